#![no_main]

use gspan_cli::document::{resolve, serialize, DocumentSpec};
use gspan_core::groupoid::Limits;
use libfuzzer_sys::fuzz_target;

// Full resolution under tight limits, so that inputs describing large
// groupoids are rejected instead of exhausting memory.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let limits = Limits {
        max_table_morphisms: 2_000,
        max_table_pairs: 50_000,
        max_objects: 2_000,
    };
    let Ok(spec) = DocumentSpec::parse(text) else { return };
    if let Ok(doc) = resolve(spec, &limits) {
        let again = DocumentSpec::parse(&serialize(&doc)).expect("serialized documents parse");
        let again = resolve(again, &limits).expect("serialized documents resolve");
        assert!(doc == again);
    }
});
