#![no_main]

use libfuzzer_sys::fuzz_target;
use zskit::sets::{parse_set, SetDescription};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_set(text) {
        let printed = set.to_string();
        let again: SetDescription = printed.parse().expect("display output parses");
        assert_eq!(again.to_string(), printed);
        for x in 0..64 {
            assert_eq!(set.contains(x), again.contains(x));
        }
        assert!(!set.contains(0));
    }
});
