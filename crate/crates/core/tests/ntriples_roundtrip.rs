mod common;

use metakg_core::model::{parse_ntriples, serialize_ntriples, Term, Triple};
use proptest::prelude::*;

fn document(lines: &[[String; 3]]) -> String {
    lines.iter().map(|[s, p, o]| format!("{s} {p} {o} .\n")).collect()
}

#[test]
fn generated_sets_roundtrip() {
    for seed in 0..1000 {
        let lines = common::random_ntriples_terms(seed);
        let text = document(&lines);
        let parsed = parse_ntriples(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(parsed.len(), lines.len());
        let written = serialize_ntriples(&parsed);
        assert_eq!(written, text, "seed {seed}");
        assert_eq!(parse_ntriples(&written).unwrap(), parsed, "seed {seed}");
    }
}

#[test]
fn escapes_decode_to_raw_characters() {
    let text = "<http://x/s> <http://x/p> \"q\\\"b\\\\n\\nt\\t\\u00e9\\U0001F600\"@EN .\n";
    let t = parse_ntriples(text).unwrap();
    let lit = t[0].object().as_literal().unwrap();
    assert_eq!(lit.lexical(), "q\"b\\n\nt\té😀");
    assert_eq!(lit.language(), Some("en"));
}

fn literal() -> impl Strategy<Value = Term> {
    // printable text mixed with controls, quotes and backslashes
    let lexical = "(\\PC|[\x00-\x1f\"\\\\])*";
    prop_oneof![
        lexical.prop_map(|s| Term::plain(&s)),
        (lexical, prop::sample::select(vec!["en", "nl", "en-us", "de-ch-1996"])).prop_map(|(s, l)| Term::literal(
            &s,
            Some(l),
            None
        )
        .unwrap()),
        lexical.prop_map(|s| Term::literal(&s, None, Some("http://www.w3.org/2001/XMLSchema#date")).unwrap()),
    ]
}

fn iri() -> impl Strategy<Value = Term> {
    "[a-z][a-z0-9+.-]{0,5}:[A-Za-z0-9/#%._~?=&é-]{0,20}".prop_map(|s| Term::iri(&s).unwrap())
}

fn triple() -> impl Strategy<Value = Triple> {
    let subject = prop_oneof![iri(), "[A-Za-z0-9_][A-Za-z0-9_-]{0,8}".prop_map(|b| Term::blank(&b).unwrap())];
    let object = prop_oneof![iri(), literal()];
    (subject, iri(), object).prop_map(|(s, p, o)| Triple::new(s, p, o).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_inverts_serialize(ts in prop::collection::vec(triple(), 0..16)) {
        let text = serialize_ntriples(&ts);
        prop_assert_eq!(parse_ntriples(&text).unwrap(), ts);
    }
}
