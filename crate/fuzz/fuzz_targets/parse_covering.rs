#![no_main]

use boxgt::io;
use boxgt::patterns::covering_check;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cov) = io::parse_covering(data) {
        let text = io::to_json(&cov).expect("valid coverings serialize");
        assert_eq!(io::parse_covering(text.as_bytes()).expect("round trip"), cov);
        if (cov.grid_side() as u128).pow(cov.dim() as u32) <= 4096 && cov.boxes().len() <= 256 {
            let _ = covering_check(&cov, &[]);
        }
    }
});
