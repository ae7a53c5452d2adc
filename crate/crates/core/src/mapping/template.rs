use super::MappingError;
use crate::model::iri::percent_encode_iri_safe;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Text(String),
    Column(String),
}

/// Parsed `rr:template` string. `{col}` is a placeholder, `{{` and `}}` are literal braces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    source: String,
    segments: Vec<Segment>,
}

/// Whether an expansion feeds an IRI (values percent-encoded) or a literal (raw).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Iri,
    Literal,
}

impl Template {
    pub fn parse(source: &str) -> Result<Self, MappingError> {
        let bad = |message: &str| MappingError::Template { template: source.to_string(), message: message.to_string() };
        let mut segments = Vec::new();
        let mut text = String::new();
        let mut chars = source.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '{' if chars.peek() == Some(&'{') => {
                    chars.next();
                    text.push('{');
                }
                '}' if chars.peek() == Some(&'}') => {
                    chars.next();
                    text.push('}');
                }
                '{' => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some('{') => return Err(bad("nested '{' in placeholder")),
                            Some(c) => name.push(c),
                            None => return Err(bad("unclosed placeholder")),
                        }
                    }
                    if name.is_empty() {
                        return Err(bad("empty placeholder"));
                    }
                    if !text.is_empty() {
                        segments.push(Segment::Text(std::mem::take(&mut text)));
                    }
                    segments.push(Segment::Column(name));
                }
                '}' => return Err(bad("unmatched '}'")),
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            segments.push(Segment::Text(text));
        }
        Ok(Template { source: source.to_string(), segments })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Column(c) => Some(c.as_str()),
            Segment::Text(_) => None,
        })
    }

    /// Expands against a row. `lookup` returns `None` for an unknown column and
    /// `Some("")` for an empty cell; the latter yields `Ok(None)`.
    pub fn expand<'a>(
        &self,
        lookup: impl Fn(&str) -> Option<&'a str>,
        row: usize,
        target: Target,
    ) -> Result<Option<String>, MappingError> {
        let mut out = String::with_capacity(self.source.len());
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Column(c) => {
                    let value =
                        lookup(c).ok_or_else(|| MappingError::UnresolvedPlaceholder { column: c.clone(), row })?;
                    if value.is_empty() {
                        return Ok(None);
                    }
                    match target {
                        Target::Iri => out.push_str(&percent_encode_iri_safe(value)),
                        Target::Literal => out.push_str(value),
                    }
                }
            }
        }
        Ok(Some(out))
    }
}

/// Expands `template` against a header/row pair.
pub fn expand_template(
    template: &str,
    header: &[String],
    row: &[String],
    row_index: usize,
    target: Target,
) -> Result<Option<String>, MappingError> {
    let t = Template::parse(template)?;
    t.expand(|c| header.iter().position(|h| h == c).and_then(|i| row.get(i)).map(String::as_str), row_index, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hdr(cols: &[&str]) -> Vec<String> {
        cols.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dataset_iri() {
        let out = expand_template(
            "http://data.example.org/cbs/dataset/{doc_id}",
            &hdr(&["doc_id"]),
            &hdr(&["GBAPERSOONTAB"]),
            0,
            Target::Iri,
        )
        .unwrap();
        assert_eq!(out.as_deref(), Some("http://data.example.org/cbs/dataset/GBAPERSOONTAB"));
    }

    #[test]
    fn verbatim_without_placeholders() {
        let out = expand_template("http://x.org/fixed", &[], &[], 0, Target::Iri).unwrap();
        assert_eq!(out.as_deref(), Some("http://x.org/fixed"));
    }

    #[test]
    fn encoding_only_for_iris() {
        let h = hdr(&["doc_id"]);
        let r = hdr(&["a b"]);
        assert_eq!(
            expand_template("http://x.org/{doc_id}", &h, &r, 0, Target::Iri).unwrap().as_deref(),
            Some("http://x.org/a%20b")
        );
        assert_eq!(expand_template("v: {doc_id}", &h, &r, 0, Target::Literal).unwrap().as_deref(), Some("v: a b"));
    }

    #[test]
    fn escaped_braces() {
        let h = hdr(&["x"]);
        let r = hdr(&["1"]);
        assert_eq!(expand_template("{{{x}}}", &h, &r, 0, Target::Literal).unwrap().as_deref(), Some("{1}"));
    }

    #[test]
    fn errors() {
        let err = expand_template("{missing}", &hdr(&["x"]), &hdr(&["1"]), 4, Target::Iri).unwrap_err();
        assert_eq!(err, MappingError::UnresolvedPlaceholder { column: "missing".into(), row: 4 });
        assert!(Template::parse("{open").is_err());
        assert!(Template::parse("a}b").is_err());
        assert!(Template::parse("{}").is_err());
    }

    #[test]
    fn empty_cell_skips() {
        assert_eq!(expand_template("x/{a}", &hdr(&["a"]), &hdr(&[""]), 0, Target::Iri).unwrap(), None);
    }
}
