#![no_main]

use langevin_mc::diagnostics::DiagnosticsReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = serde_json::from_slice::<DiagnosticsReport>(data) {
        let _ = report.min_ess();
        let _ = report.acf_csv();
    }
});
