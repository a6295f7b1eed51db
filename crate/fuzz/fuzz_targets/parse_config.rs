#![no_main]

use boxgt::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(config) = io::parse_config(data) {
        let text = io::to_json(&config).expect("valid configs serialize");
        assert_eq!(io::parse_config(text.as_bytes()).expect("round trip"), config);
    }
});
