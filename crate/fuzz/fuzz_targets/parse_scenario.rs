#![no_main]

use libfuzzer_sys::fuzz_target;
use perr_core::instance::parse_scenario;

fuzz_target!(|data: &[u8]| {
    if let Ok((starts, goals)) = parse_scenario(data) {
        assert_eq!(starts.len(), goals.len());
    }
});
