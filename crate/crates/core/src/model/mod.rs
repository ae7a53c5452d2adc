//! RDF terms, triples, vocabulary constants and N-Triples I/O.

pub mod iri;
pub mod ntriples;
mod term;
pub mod vocab;

pub use ntriples::{parse_ntriples, parse_term, serialize_ntriples, SyntaxError};
pub use term::{is_language_tag, Literal, Term, TermError, Triple};
pub use vocab::LocalNamespace;

/// Builds an IRI term from `text`, rejecting empty or relative references.
pub fn make_iri(text: &str) -> Result<Term, TermError> {
    Term::iri(text)
}

/// Builds a literal; lang and datatype are mutually exclusive.
pub fn make_literal(lexical: &str, lang: Option<&str>, datatype: Option<&str>) -> Result<Term, TermError> {
    Term::literal(lexical, lang, datatype)
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_term(&text).map_err(serde::de::Error::custom)
    }
}
