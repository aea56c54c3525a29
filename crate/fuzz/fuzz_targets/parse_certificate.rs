#![no_main]
use libfuzzer_sys::fuzz_target;

use hdx_walks::certify::ExpansionCertificate;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = ExpansionCertificate::from_json(s) {
            let back = ExpansionCertificate::from_json(&c.to_json()).unwrap();
            assert_eq!(back.alpha, c.alpha);
            assert_eq!(back.epsilon, c.epsilon);
        }
    }
});
