#![no_main]
use coughrank::io::parse_features;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = std::str::from_utf8(data).map(|t| parse_features(t, "fuzz"));
});
