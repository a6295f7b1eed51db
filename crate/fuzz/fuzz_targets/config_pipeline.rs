#![no_main]

use boxgt::io;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(config) = io::parse_config(data) else { return };
    if config.points().len() * config.boxes().len().max(1) > 4096 {
        return;
    }
    let Ok(sys) = config.induce() else { return };
    let general = config.to_general_position();
    assert!(general.is_general_position());
    assert_eq!(general.induce().expect("general position induces"), sys);
    if let Ok(grid) = config.compress_to_grid() {
        assert_eq!(grid.induce().expect("grid induces"), sys);
    }
});
