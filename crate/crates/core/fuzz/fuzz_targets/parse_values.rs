#![no_main]

use libfuzzer_sys::fuzz_target;
use zskit::domain::parse_values;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = parse_values(text) {
        let joined = values.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(parse_values(&joined).unwrap(), values);
    }
});
