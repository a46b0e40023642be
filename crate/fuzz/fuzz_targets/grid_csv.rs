#![no_main]

use langevin_mc::Grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = Grid::from_csv_str(text) {
        let back = Grid::from_csv_str(&grid.to_csv()).unwrap();
        assert_eq!(back, grid);
    }
});
