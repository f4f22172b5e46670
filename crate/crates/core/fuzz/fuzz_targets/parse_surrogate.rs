#![no_main]

use libfuzzer_sys::fuzz_target;
use zskit::central::CentralSurrogate;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = text.parse::<CentralSurrogate>() {
        let again: CentralSurrogate = s.to_string().parse().expect("display output parses");
        assert_eq!(again, s);
        assert!(!s.star_contains(0));
    }
});
