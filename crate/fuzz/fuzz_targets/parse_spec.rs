#![no_main]

use gspan_cli::document::DocumentSpec;
use libfuzzer_sys::fuzz_target;

// Syntax layer only: whatever parses must serialize and parse back to the
// same definitions.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = DocumentSpec::parse(text) {
        let again = DocumentSpec::parse(&spec.to_json()).expect("serialized specs parse");
        assert_eq!(spec, again);
    }
});
