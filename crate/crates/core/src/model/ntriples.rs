//! Line-oriented N-Triples reading and writing.

use std::fmt::Write as _;

use thiserror::Error;

use super::term::{Term, TermError, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// One statement per line, LF-terminated, in input order.
pub fn serialize_ntriples<'a, I>(triples: I) -> String
where
    I: IntoIterator<Item = &'a Triple>,
{
    let mut out = String::new();
    for t in triples {
        let _ = writeln!(out, "{t}");
    }
    out
}

pub fn parse_ntriples(text: &str) -> Result<Vec<Triple>, SyntaxError> {
    let mut triples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let mut cursor = Cursor::new(line, idx + 1);
        cursor.skip_ws();
        if cursor.at_end() || cursor.peek() == Some('#') {
            continue;
        }
        let subject = cursor.term()?;
        if subject.is_literal() {
            return Err(cursor.error_at(0, "subject must be an IRI or blank node"));
        }
        cursor.skip_ws();
        let pred_col = cursor.pos;
        let predicate = cursor.term()?;
        if !predicate.is_iri() {
            return Err(cursor.error_at(pred_col, "predicate must be an IRI"));
        }
        cursor.skip_ws();
        if cursor.peek() == Some('.') {
            return Err(cursor.error("missing object"));
        }
        let object = cursor.term()?;
        cursor.skip_ws();
        if !cursor.eat('.') {
            return Err(cursor.error("expected '.'"));
        }
        cursor.skip_ws();
        if !cursor.at_end() && cursor.peek() != Some('#') {
            return Err(cursor.error("trailing content after '.'"));
        }
        triples.push(Triple::new(subject, predicate, object).map_err(|e| cursor.error_at(0, &e.to_string()))?);
    }
    Ok(triples)
}

/// Parses a single term written in N-Triples syntax (`<iri>`, `_:b`, `"lit"@en`).
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut cursor = Cursor::new(text.trim(), 1);
    let term = cursor.term()?;
    if !cursor.at_end() {
        return Err(cursor.error("trailing content after term"));
    }
    Ok(term)
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> SyntaxError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: &str) -> SyntaxError {
        SyntaxError { line: self.line, column: pos + 1, message: message.to_string() }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let start = self.pos;
        match self.peek() {
            Some('<') => {
                let iri = self.iri_ref()?;
                Term::iri(&iri).map_err(|e| self.error_at(start, &e.to_string()))
            }
            Some('_') => {
                self.pos += 1;
                if !self.eat(':') {
                    return Err(self.error("expected ':' after '_'"));
                }
                let label_start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') {
                    self.pos += 1;
                }
                // a trailing '.' terminates the statement, not the label
                while self.pos > label_start && self.chars[self.pos - 1] == '.' {
                    self.pos -= 1;
                }
                let label: String = self.chars[label_start..self.pos].iter().collect();
                Term::blank(&label).map_err(|e| self.error_at(start, &e.to_string()))
            }
            Some('"') => self.literal(),
            Some(c) => Err(self.error(&format!("unexpected character {c:?}"))),
            None => Err(self.error("unexpected end of line")),
        }
    }

    fn iri_ref(&mut self) -> Result<String, SyntaxError> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => out.push(self.unicode_escape()?),
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
    }

    fn unicode_escape(&mut self) -> Result<char, SyntaxError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error_at(self.pos.saturating_sub(1), "bad escape")),
        };
        let start = self.pos;
        let mut value = 0u32;
        for _ in 0..width {
            let digit =
                self.bump().and_then(|c| c.to_digit(16)).ok_or_else(|| self.error_at(start, "bad unicode escape"))?;
            value = value * 16 + digit;
        }
        char::from_u32(value).ok_or_else(|| self.error_at(start, "invalid code point"))
    }

    fn literal(&mut self) -> Result<Term, SyntaxError> {
        let start = self.pos;
        self.pos += 1;
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => match self.peek() {
                    Some('t') => {
                        self.pos += 1;
                        lexical.push('\t')
                    }
                    Some('b') => {
                        self.pos += 1;
                        lexical.push('\u{8}')
                    }
                    Some('n') => {
                        self.pos += 1;
                        lexical.push('\n')
                    }
                    Some('r') => {
                        self.pos += 1;
                        lexical.push('\r')
                    }
                    Some('f') => {
                        self.pos += 1;
                        lexical.push('\u{c}')
                    }
                    Some('"') => {
                        self.pos += 1;
                        lexical.push('"')
                    }
                    Some('\'') => {
                        self.pos += 1;
                        lexical.push('\'')
                    }
                    Some('\\') => {
                        self.pos += 1;
                        lexical.push('\\')
                    }
                    Some('u' | 'U') => lexical.push(self.unicode_escape()?),
                    _ => return Err(self.error("bad string escape")),
                },
                Some(c) => lexical.push(c),
                None => return Err(self.error_at(start, "unterminated literal")),
            }
        }
        let to_err = |c: &Cursor, e: TermError| c.error_at(start, &e.to_string());
        if self.eat('@') {
            let tag_start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                self.pos += 1;
            }
            let tag: String = self.chars[tag_start..self.pos].iter().collect();
            Term::literal(&lexical, Some(&tag), None).map_err(|e| to_err(self, e))
        } else if self.peek() == Some('^') {
            self.pos += 1;
            if !self.eat('^') || self.peek() != Some('<') {
                return Err(self.error("expected '^^<datatype>'"));
            }
            let dt = self.iri_ref()?;
            Term::literal(&lexical, None, Some(&dt)).map_err(|e| to_err(self, e))
        } else {
            Ok(Term::plain(&lexical))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vocab::DCT_HAS_PART;

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    #[test]
    fn empty_collection_serializes_to_empty_text() {
        assert_eq!(serialize_ntriples(&Vec::new()), "");
    }

    #[test]
    fn single_iri_triple() {
        let t = Triple::new(iri("http://ex.org/a"), iri(DCT_HAS_PART), iri("http://ex.org/b")).unwrap();
        assert_eq!(
            serialize_ntriples([&t]),
            "<http://ex.org/a> <http://purl.org/dc/terms/hasPart> <http://ex.org/b> .\n"
        );
    }

    #[test]
    fn quotes_are_escaped_and_reparsed() {
        let lit = Term::literal("say \"hi\"\n\ttab \\ é", Some("en"), None).unwrap();
        let t = Triple::new(iri("http://ex.org/a"), iri("http://ex.org/p"), lit).unwrap();
        let text = serialize_ntriples([&t]);
        assert!(text.contains("\\\"hi\\\""));
        assert!(text.contains('é'));
        assert_eq!(parse_ntriples(&text).unwrap(), vec![t]);
    }

    #[test]
    fn missing_object_reports_line_one() {
        let err = parse_ntriples("<http://a/a> <http://a/b> .").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("missing object"));
    }

    #[test]
    fn error_line_and_column() {
        let err = parse_ntriples("# c\n\n<http://a/s> <http://a/p> \"x\" .\n<http://a/s> <rel> <http://a/o> .\n")
            .unwrap_err();
        assert_eq!((err.line, err.column), (4, 14));
    }

    #[test]
    fn comments_blank_nodes_and_datatypes() {
        let text = "# header\n_:b1 <http://a/p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> . # trailing\n\n_:b1 <http://a/q> _:b2.\n";
        let ts = parse_ntriples(text).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[1].object(), &Term::blank("b2").unwrap());
        assert_eq!(ts[0].object().as_literal().unwrap().datatype(), Some("http://www.w3.org/2001/XMLSchema#integer"));
    }

    #[test]
    fn unicode_escapes_decode() {
        let ts = parse_ntriples("<http://a/s> <http://a/p> \"caf\\u00E9\" .").unwrap();
        assert_eq!(ts[0].object().value(), "café");
    }

    #[test]
    fn rejects_literal_subject() {
        assert!(parse_ntriples("\"x\" <http://a/p> <http://a/o> .").is_err());
        assert!(parse_ntriples("<http://a/s> <http://a/p> \"x\"@en <http://a/o> .").is_err());
    }

    #[test]
    fn parse_single_term() {
        assert_eq!(parse_term(" \"death\"@en ").unwrap(), Term::literal("death", Some("en"), None).unwrap());
        assert!(parse_term("<a> x").is_err());
    }
}
