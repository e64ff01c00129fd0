#![no_main]
use coughrank::io::parse_weights;
use coughrank::metrics::CriterionSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let criteria = CriterionSpec::defaults();
    let _ = std::str::from_utf8(data).map(|t| parse_weights(t, &criteria, "fuzz"));
});
