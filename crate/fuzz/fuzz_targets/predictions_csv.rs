#![no_main]
use coughrank::io::{parse_predictions, write_predictions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sets) = parse_predictions(text, "fuzz") {
        let again = parse_predictions(&write_predictions(&sets), "fuzz").expect("round trip");
        assert_eq!(again.len(), sets.len());
    }
});
