#![no_main]
use libfuzzer_sys::fuzz_target;

use hdx_walks::rational::{format_pq, parse_pq};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = parse_pq(s) {
            assert_eq!(parse_pq(&format_pq(&r)).unwrap(), r);
        }
    }
});
