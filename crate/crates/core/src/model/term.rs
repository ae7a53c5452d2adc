use std::fmt;

use thiserror::Error;

use super::iri::is_absolute_iri;

/// Validation failures raised while building terms and triples.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("not an absolute IRI: {0:?}")]
    RelativeIri(String),
    #[error("malformed language tag: {0:?}")]
    BadLanguageTag(String),
    #[error("literal {0:?} has both a language tag and a datatype")]
    LangAndDatatype(String),
    #[error("malformed blank node label: {0:?}")]
    BadBlankLabel(String),
    #[error("{position} must be {expected}, got {term}")]
    Position { position: &'static str, expected: &'static str, term: String },
}

/// A literal's lexical form plus at most one of language tag or datatype.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    lang: Option<String>,
    datatype: Option<String>,
}

impl Literal {
    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn language(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    pub fn datatype(&self) -> Option<&str> {
        self.datatype.as_deref()
    }
}

/// An RDF term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Literal(Literal),
    Blank(String),
}

impl Term {
    /// Builds an IRI term from an absolute IRI, trimming surrounding whitespace.
    pub fn iri(text: &str) -> Result<Term, TermError> {
        let trimmed = text.trim();
        if is_absolute_iri(trimmed) {
            Ok(Term::Iri(trimmed.to_string()))
        } else {
            Err(TermError::RelativeIri(text.to_string()))
        }
    }

    /// Builds a literal. The language tag is lowercased; lang and datatype are exclusive.
    pub fn literal(lexical: &str, lang: Option<&str>, datatype: Option<&str>) -> Result<Term, TermError> {
        match (lang, datatype) {
            (Some(_), Some(_)) => Err(TermError::LangAndDatatype(lexical.to_string())),
            (Some(tag), None) => {
                let tag = tag.to_ascii_lowercase();
                if !is_language_tag(&tag) {
                    return Err(TermError::BadLanguageTag(tag));
                }
                Ok(Term::Literal(Literal { lexical: lexical.to_string(), lang: Some(tag), datatype: None }))
            }
            (None, Some(dt)) => {
                let dt = dt.trim();
                if !is_absolute_iri(dt) {
                    return Err(TermError::RelativeIri(dt.to_string()));
                }
                Ok(Term::Literal(Literal { lexical: lexical.to_string(), lang: None, datatype: Some(dt.to_string()) }))
            }
            (None, None) => Ok(Term::Literal(Literal { lexical: lexical.to_string(), lang: None, datatype: None })),
        }
    }

    /// Plain literal without tag or datatype.
    pub fn plain(lexical: &str) -> Term {
        Term::Literal(Literal { lexical: lexical.to_string(), lang: None, datatype: None })
    }

    pub fn blank(label: &str) -> Result<Term, TermError> {
        if is_blank_label(label) {
            Ok(Term::Blank(label.to_string()))
        } else {
            Err(TermError::BadBlankLabel(label.to_string()))
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    /// IRI text, literal lexical form, or blank label.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(iri) => iri,
            Term::Literal(lit) => &lit.lexical,
            Term::Blank(label) => label,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                f.write_str("\"")?;
                for c in lit.lexical.chars() {
                    match c {
                        '\\' => f.write_str("\\\\")?,
                        '"' => f.write_str("\\\"")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")?;
                if let Some(lang) = &lit.lang {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = &lit.datatype {
                    write!(f, "^^<{dt}>")?;
                }
                Ok(())
            }
        }
    }
}

/// Subject–predicate–object statement. Subject is an IRI or blank node, predicate an IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, TermError> {
        if subject.is_literal() {
            return Err(TermError::Position {
                position: "subject",
                expected: "an IRI or blank node",
                term: subject.to_string(),
            });
        }
        if !predicate.is_iri() {
            return Err(TermError::Position { position: "predicate", expected: "an IRI", term: predicate.to_string() });
        }
        Ok(Triple { subject, predicate, object })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Term, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// `[a-z]{2,8}(-[a-z0-9]{1,8})*`, checked on an already lowercased tag.
pub fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary = parts.next().unwrap_or("");
    if !(2..=8).contains(&primary.len()) || !primary.bytes().all(|b| b.is_ascii_lowercase()) {
        return false;
    }
    parts.all(|p| (1..=8).contains(&p.len()) && p.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()))
}

fn is_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_requires_scheme() {
        assert!(Term::iri("http://purl.org/dc/terms/hasPart").is_ok());
        assert!(matches!(Term::iri(""), Err(TermError::RelativeIri(_))));
        assert!(matches!(
            Term::iri("dataset/42"),
            Err(TermError::RelativeIri(s)) if s == "dataset/42"
        ));
        assert_eq!(Term::iri("  urn:x:y ").unwrap(), Term::Iri("urn:x:y".to_string()));
    }

    #[test]
    fn literal_language_is_lowercased() {
        let nl = Term::literal("Leeftijd bij overlijden", Some("nl"), None).unwrap();
        assert_eq!(nl.as_literal().unwrap().language(), Some("nl"));
        let en = Term::literal("Age at Death", Some("EN"), None).unwrap();
        assert_eq!(en.to_string(), "\"Age at Death\"@en");
    }

    #[test]
    fn literal_rejects_lang_and_datatype() {
        let err = Term::literal("x", Some("en"), Some("http://www.w3.org/2001/XMLSchema#string"));
        assert!(matches!(err, Err(TermError::LangAndDatatype(_))));
        assert!(matches!(Term::literal("x", Some("e"), None), Err(TermError::BadLanguageTag(_))));
        assert!(matches!(Term::literal("x", Some("en_US"), None), Err(TermError::BadLanguageTag(_))));
        assert!(Term::literal("x", Some("en-GB"), None).is_ok());
    }

    #[test]
    fn triple_positions() {
        let iri = Term::iri("http://ex.org/a").unwrap();
        let lit = Term::plain("a");
        assert!(Triple::new(lit.clone(), iri.clone(), iri.clone()).is_err());
        assert!(Triple::new(iri.clone(), lit.clone(), iri.clone()).is_err());
        assert!(Triple::new(Term::blank("b0").unwrap(), iri.clone(), lit).is_ok());
    }
}
