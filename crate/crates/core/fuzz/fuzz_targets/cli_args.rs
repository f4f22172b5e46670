#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = zskit_cli::parse_args_with(text.split('\0'), None);
});
