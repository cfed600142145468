#![no_main]

use libfuzzer_sys::fuzz_target;
use lms_core::csv::{parse_dataset, write_dataset};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(dataset) = parse_dataset(text) else {
        return;
    };
    // Anything we accept must re-emit in canonical form and parse back to
    // the identical dataset.
    let written = write_dataset(&dataset);
    let reparsed = parse_dataset(&written).expect("canonical output must parse");
    assert_eq!(dataset.x_rows(), reparsed.x_rows());
    assert_eq!(dataset.responses(), reparsed.responses());
    assert_eq!(write_dataset(&reparsed), written);
});
