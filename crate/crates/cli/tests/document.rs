use gspan_cli::commands::{cmd_compose, cmd_euler, cmd_matrix};
use gspan_cli::document::{parse_document, resolve, serialize, DocumentError, DocumentSpec};
use gspan_core::groupoid::Limits;

fn corpus(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    std::fs::read_to_string(path).unwrap()
}

const MINIMAL: &str = r#"{
  "groups": {"Z2": {"orders": [2]}},
  "groupoids": {"BZ2": {"type": "BG", "group": "Z2"}}
}"#;

#[test]
fn minimal_document_parses() {
    let doc = parse_document(MINIMAL).unwrap();
    assert_eq!(doc.groups["Z2"].order(), 2);
    assert_eq!(cmd_euler(&doc, "BZ2").unwrap(), "1/2");
}

#[test]
fn dangling_functor_target_is_an_unresolved_name() {
    let text = r#"{
      "groups": {"Z2": {"orders": [2]}},
      "groupoids": {"BZ2": {"type": "BG", "group": "Z2"}},
      "functors": {"h": {"type": "trivial", "source": "BZ2", "target": "BZ3"}}
    }"#;
    match parse_document(text) {
        Err(DocumentError::UnresolvedName { path, kind, name }) => {
            assert_eq!(path, "functors.h.target");
            assert_eq!(kind, "groupoid");
            assert_eq!(name, "BZ3");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_natural_labels_name_the_witness_morphism() {
    // H(f) = 1 while V is trivial and both labels are 0: the naturality
    // square fails at f.
    let text = corpus("tables.json").replace(r#""labels": {"b": 1}"#, r#""labels": {}"#);
    match parse_document(&text) {
        Err(DocumentError::Validation { path, reason }) => {
            assert_eq!(path, "spans.T");
            assert!(reason.ends_with("at morphism f"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn reference_cycles_are_reported() {
    let text = r#"{
      "functors": {
        "a": {"type": "compose", "first": "b", "second": "b"},
        "b": {"type": "compose", "first": "a", "second": "a"}
      }
    }"#;
    match parse_document(text) {
        Err(DocumentError::Cycle { cycle }) => {
            assert!(cycle.iter().any(|c| c.contains('a')) && cycle.iter().any(|c| c.contains('b')), "{cycle:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_carry_a_path() {
    let text = r#"{"groups": {"Z2": {"orders": [2], "extra": 1}}}"#;
    match parse_document(text) {
        Err(DocumentError::Syntax { path, .. }) => assert!(path.starts_with("groups.Z2"), "{path}"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_document("{"), Err(DocumentError::Syntax { .. })));
    let text = r#"{"groupoids": {"X": {"type": "BG", "grup": "Z2"}}}"#;
    assert!(matches!(parse_document(text), Err(DocumentError::Syntax { .. })));
}

#[test]
fn malformed_tables_are_validation_failures() {
    let text = corpus("tables.json").replace(r#""f": "g", "g": "f""#, r#""f": "f", "g": "g""#);
    assert!(matches!(parse_document(&text), Err(DocumentError::Validation { .. })));
}

#[test]
fn the_corpus_round_trips() {
    for name in ["basic.json", "tables.json"] {
        let doc = parse_document(&corpus(name)).unwrap();
        let again = parse_document(&serialize(&doc)).unwrap();
        assert_eq!(doc, again, "{name}");
        assert_eq!(serialize(&doc), serialize(&again));
        for span in doc.spans.keys() {
            assert_eq!(cmd_matrix(&doc, span, None, false).unwrap(), cmd_matrix(&again, span, None, false).unwrap());
        }
    }
}

#[test]
fn compose_fragment_merges_back() {
    let doc = parse_document(&corpus("basic.json")).unwrap();
    let fragment = cmd_compose(&doc, "Id", "U", "C").unwrap();
    let text = fragment.to_json();
    assert_eq!(DocumentSpec::parse(&text).unwrap(), fragment);
    let mut spec = doc.spec.clone();
    spec.merge(fragment).unwrap();
    let merged = resolve(spec, &Limits::default()).unwrap();
    assert_eq!(
        cmd_matrix(&merged, "C", None, false).unwrap(),
        cmd_matrix(&merged, "IU", None, false).unwrap()
    );
    assert_eq!(cmd_euler(&merged, "C.apex").unwrap(), cmd_euler(&merged, "IU").unwrap());
}

#[test]
fn merging_rejects_duplicates() {
    let doc = parse_document(&corpus("basic.json")).unwrap();
    let mut spec = doc.spec.clone();
    assert!(matches!(spec.merge(doc.spec.clone()), Err(DocumentError::Validation { .. })));
}
