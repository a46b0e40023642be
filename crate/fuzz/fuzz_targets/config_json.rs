#![no_main]

use langevin_mc::experiment::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = ExperimentConfig::from_json_str(text) {
        // Anything accepted must be accepted again after serialization.
        let again = serde_json::to_string(&config).unwrap();
        let back = ExperimentConfig::from_json_str(&again).unwrap();
        assert_eq!(back.n, config.n);
        assert_eq!(back.samplers, config.samplers);
    }
});
