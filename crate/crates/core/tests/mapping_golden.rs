use std::path::PathBuf;

use metakg_core::mapping::{dedup_in_order, execute_mapping, parse_mapping};
use metakg_core::model::serialize_ntriples;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn mini_tables_match_golden_bytes() {
    let doc = parse_mapping(&std::fs::read_to_string(fixtures().join("mapping.ttl")).unwrap()).unwrap();
    let names: Vec<&str> = doc.triples_maps.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(names, ["DatasetMap", "CatalogMap", "OrganizationMap", "VariableMap", "KeywordMap"]);
    let (triples, stats) = execute_mapping(&doc, &fixtures().join("mini/tables")).unwrap();
    assert_eq!(stats.triples, triples.len());
    let text = serialize_ntriples(&dedup_in_order(triples));
    let golden = std::fs::read_to_string(fixtures().join("mini/golden.nt")).unwrap();
    if text != golden {
        for (i, (a, b)) in text.lines().zip(golden.lines()).enumerate() {
            assert_eq!(a, b, "first difference at line {}", i + 1);
        }
        assert_eq!(text.lines().count(), golden.lines().count());
    }
    assert_eq!(text.as_bytes(), golden.as_bytes());
}

#[test]
fn missing_column_is_reported_before_any_output() {
    let doc = parse_mapping(&std::fs::read_to_string(fixtures().join("mapping.ttl")).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for name in ["datasets.csv", "categories.csv", "variables.csv", "keywords.csv"] {
        std::fs::copy(fixtures().join("mini/tables").join(name), dir.path().join(name)).unwrap();
    }
    std::fs::write(dir.path().join("keywords.csv"), "doc_id,term\nX,y\n").unwrap();
    let err = execute_mapping(&doc, dir.path()).unwrap_err();
    assert!(err.to_string().contains("keyword"), "{err}");
}
