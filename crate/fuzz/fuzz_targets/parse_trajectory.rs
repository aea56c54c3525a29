#![no_main]
use libfuzzer_sys::fuzz_target;

use hdx_walks::trajectory::parse_trajectory;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = parse_trajectory(data) {
        assert_eq!(t.faces.len(), t.steps + 1);
        assert_eq!(parse_trajectory(t.to_text().as_bytes()).unwrap(), t);
    }
});
