#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The parser must reject arbitrary bytes gracefully, never panic.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = lms_core::csv::parse_dataset(text);
    }
});
