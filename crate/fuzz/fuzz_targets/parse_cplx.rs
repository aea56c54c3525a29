#![no_main]
use libfuzzer_sys::fuzz_target;

use hdx_walks::cplx::{parse_cplx, write_cplx};

fuzz_target!(|data: &[u8]| {
    if let Ok(x) = parse_cplx(data) {
        x.validate().unwrap();
        let again = parse_cplx(write_cplx(&x).as_bytes()).unwrap();
        assert_eq!(again, x);
    }
});
