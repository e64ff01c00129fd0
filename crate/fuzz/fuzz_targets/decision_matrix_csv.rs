#![no_main]
use coughrank::io::parse_decision_matrix;
use coughrank::mcdm::{entropy_weights, topsis};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dm) = parse_decision_matrix(text, None, "fuzz") {
        if let Ok(w) = entropy_weights(&dm) {
            let r = topsis(&dm, &w).expect("weights match matrix");
            assert!(r.closeness.iter().all(|c| (0.0..=1.0).contains(c)));
        }
    }
});
