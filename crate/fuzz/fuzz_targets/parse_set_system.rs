#![no_main]

use boxgt::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(sys) = io::parse_set_system(data) {
        let text = io::to_json(&sys).expect("valid systems serialize");
        assert_eq!(io::parse_set_system(text.as_bytes()).expect("round trip"), sys);
    }
});
