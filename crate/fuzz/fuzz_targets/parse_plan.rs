#![no_main]

use libfuzzer_sys::fuzz_target;
use perr_core::Plan;

fuzz_target!(|data: &[u8]| {
    if let Ok(plan) = Plan::from_csv(data) {
        let again = Plan::from_csv(plan.to_csv().as_bytes()).expect("serialized plans parse");
        assert_eq!(again, plan);
        let _ = plan.swap_count();
    }
});
