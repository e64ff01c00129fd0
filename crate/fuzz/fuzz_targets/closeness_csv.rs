#![no_main]
use coughrank::ensemble::{ensemble, TiePolicy};
use coughrank::io::parse_closeness;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ct) = parse_closeness(text, "fuzz") {
        let _ = ensemble(&ct, &TiePolicy::default());
    }
});
