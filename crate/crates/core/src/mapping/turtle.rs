//! Turtle subset: prefixes/base, IRIs, prefixed names, `a`, string literals
//! (short and long forms, language tags, datatypes), blank-node property
//! lists, predicate-object lists and object lists.

use std::collections::HashMap;

use super::MappingError;
use crate::model::iri::is_absolute_iri;

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub(crate) const DEFAULT_BASE: &str = "http://metakg.local/mapping";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Iri(String),
    Blank(String),
    Literal { lexical: String, lang: Option<String>, datatype: Option<String> },
}

impl Node {
    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Node::Iri(i) => Some(i),
            _ => None,
        }
    }
}

pub(crate) type Statement = (Node, Node, Node);

pub(crate) fn parse_turtle(text: &str) -> Result<Vec<Statement>, MappingError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        prefixes: HashMap::new(),
        base: DEFAULT_BASE.to_string(),
        blank_counter: 0,
        out: Vec::new(),
    };
    parser.document()?;
    Ok(parser.out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    prefixes: HashMap<String, String>,
    base: String,
    blank_counter: usize,
    out: Vec<Statement>,
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> MappingError {
        MappingError::Syntax { line: self.line, column: self.col, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        kw.chars().enumerate().all(|(i, c)| self.peek_at(i).map(|x| x.to_ascii_uppercase()) == Some(c))
            && self.peek_at(kw.len()).is_some_and(char::is_whitespace)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), MappingError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!(
                "expected '{c}', found {}",
                self.peek().map_or("end of input".to_string(), |x| format!("'{x}'"))
            )))
        }
    }

    fn document(&mut self) -> Result<(), MappingError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.starts_with("@prefix") {
                self.advance(7);
                self.prefix_decl()?;
                self.expect('.')?;
            } else if self.starts_with("@base") {
                self.advance(5);
                self.skip_ws();
                self.base = self.iri_ref()?;
                self.expect('.')?;
            } else if self.starts_with_keyword("PREFIX") {
                self.advance(6);
                self.prefix_decl()?;
            } else if self.starts_with_keyword("BASE") {
                self.advance(4);
                self.skip_ws();
                self.base = self.iri_ref()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn prefix_decl(&mut self) -> Result<(), MappingError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return Err(self.err(format!("invalid prefix name character '{c}'")));
            }
            name.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn resolve(&self, iri: &str) -> String {
        if is_absolute_iri(iri) {
            return iri.to_string();
        }
        if iri.is_empty() {
            return self.base.clone();
        }
        if iri.starts_with('#') {
            let base = self.base.split('#').next().unwrap_or("");
            return format!("{base}{iri}");
        }
        let dir = match self.base.rfind('/') {
            Some(i) => &self.base[..=i],
            None => &self.base,
        };
        format!("{dir}{iri}")
    }

    fn iri_ref(&mut self) -> Result<String, MappingError> {
        if self.peek() != Some('<') {
            return Err(self.err("expected '<'"));
        }
        self.bump();
        let mut iri = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() => return Err(self.err("whitespace inside IRI")),
                Some(c) => iri.push(c),
                None => return Err(self.err("unterminated IRI")),
            }
        }
        Ok(self.resolve(&iri))
    }

    fn prefixed_name(&mut self) -> Result<String, MappingError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return Err(self.err(format!("unexpected character '{c}'")));
            }
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return Err(self.err(format!("expected ':' after prefix '{prefix}'")));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let continues = c.is_alphanumeric()
                || matches!(c, '_' | '-' | '%')
                || (c == '.' && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || n == '_' || n == '-'));
            if !continues {
                break;
            }
            local.push(c);
            self.bump();
        }
        let ns = self.prefixes.get(&prefix).ok_or_else(|| self.err(format!("undeclared prefix '{prefix}:'")))?;
        Ok(format!("{ns}{local}"))
    }

    fn fresh_blank(&mut self) -> Node {
        self.blank_counter += 1;
        Node::Blank(format!("anon{}", self.blank_counter))
    }

    fn subject(&mut self) -> Result<Node, MappingError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Node::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some(_) => Ok(Node::Iri(self.prefixed_name()?)),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn blank_label(&mut self) -> Result<Node, MappingError> {
        self.advance(2);
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return Err(self.err("empty blank node label"));
        }
        Ok(Node::Blank(format!("b_{label}")))
    }

    fn blank_property_list(&mut self) -> Result<Node, MappingError> {
        self.bump();
        let node = self.fresh_blank();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(']')?;
        Ok(node)
    }

    fn triples(&mut self) -> Result<(), MappingError> {
        self.skip_ws();
        let is_bnode_list = self.peek() == Some('[');
        let subject = self.subject()?;
        self.skip_ws();
        if is_bnode_list && self.peek() == Some('.') {
            return Ok(());
        }
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Node) -> Result<(), MappingError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.out.push((subject.clone(), Node::Iri(predicate.clone()), object));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.' | ']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<String, MappingError> {
        if self.peek() == Some('a') && self.peek_at(1).is_some_and(|c| c.is_whitespace() || c == '<' || c == '[') {
            self.bump();
            return Ok(RDF_TYPE.to_string());
        }
        match self.peek() {
            Some('<') => self.iri_ref(),
            Some(_) => self.prefixed_name(),
            None => Err(self.err("expected predicate")),
        }
    }

    fn object(&mut self) -> Result<Node, MappingError> {
        self.skip_ws();
        match self.peek() {
            Some('"' | '\'') => self.literal(),
            Some('<') => Ok(Node::Iri(self.iri_ref()?)),
            Some('[') => self.blank_property_list(),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => self.number(),
            Some(_) => Ok(Node::Iri(self.prefixed_name()?)),
            None => Err(self.err("expected object")),
        }
    }

    fn number(&mut self) -> Result<Node, MappingError> {
        let mut lexical = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || matches!(c, '-' | '+') {
                lexical.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(Node::Literal {
            lexical,
            lang: None,
            datatype: Some("http://www.w3.org/2001/XMLSchema#integer".to_string()),
        })
    }

    fn literal(&mut self) -> Result<Node, MappingError> {
        let quote = self.peek().expect("caller checked");
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        self.advance(if long { 3 } else { 1 });
        let mut lexical = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unterminated string literal")),
                Some(c) if c == quote => {
                    if !long {
                        self.bump();
                        break;
                    }
                    if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                        self.advance(3);
                        break;
                    }
                    lexical.push(c);
                    self.bump();
                }
                Some('\n') if !long => return Err(self.err("newline in short string literal")),
                Some('\\') => {
                    self.bump();
                    let escaped = match self.bump() {
                        Some('t') => '\t',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some(c @ ('u' | 'U')) => {
                            let width = if c == 'u' { 4 } else { 8 };
                            let mut v = 0u32;
                            for _ in 0..width {
                                let d = self
                                    .bump()
                                    .and_then(|d| d.to_digit(16))
                                    .ok_or_else(|| self.err("bad unicode escape"))?;
                                v = v * 16 + d;
                            }
                            char::from_u32(v).ok_or_else(|| self.err("invalid code point"))?
                        }
                        _ => return Err(self.err("bad string escape")),
                    };
                    lexical.push(escaped);
                }
                Some(c) => {
                    lexical.push(c);
                    self.bump();
                }
            }
        }
        let mut lang = None;
        let mut datatype = None;
        if self.peek() == Some('@') {
            self.bump();
            let mut tag = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '-' {
                    tag.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if tag.is_empty() {
                return Err(self.err("empty language tag"));
            }
            lang = Some(tag.to_ascii_lowercase());
        } else if self.starts_with("^^") {
            self.advance(2);
            datatype = Some(match self.peek() {
                Some('<') => self.iri_ref()?,
                _ => self.prefixed_name()?,
            });
        }
        Ok(Node::Literal { lexical, lang, datatype })
    }
}
