#![no_main]

use langevin_mc::samplers::Chain;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(chain) = Chain::from_csv_str(text) {
        let back = Chain::from_csv_str(&chain.to_csv()).unwrap();
        assert_eq!(back.len(), chain.len());
        assert_eq!(back.dim(), chain.dim());
        assert_eq!(back.accepted(), chain.accepted());
    }
});
