use std::collections::{HashMap, HashSet};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{char_span, EntityKind, ExtractError, ExtractedEntity};

static ABBREVIATION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[A-Z][A-Z0-9]{1,9}$").unwrap());
static PAREN_ABBR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\(([A-Z][A-Z0-9]{1,9})\)").unwrap());
static TOKEN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\S+").unwrap());

const CONNECTORS: &[&str] = &["of", "for", "the", "and", "on", "in", "van", "voor", "de", "het", "en", "&"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub canonical: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abbreviation: Option<String>,
}

/// Known organizations and persons.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gazetteer {
    #[serde(default)]
    pub organizations: Vec<GazetteerEntry>,
    #[serde(default)]
    pub persons: Vec<GazetteerEntry>,
}

impl Gazetteer {
    pub fn from_json(text: &str) -> Result<Self, ExtractError> {
        let g: Gazetteer = serde_json::from_str(text).map_err(|e| ExtractError::Gazetteer(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ExtractError> {
        for list in [&self.organizations, &self.persons] {
            let mut seen = HashSet::new();
            for e in list {
                if !seen.insert(e.canonical.as_str()) {
                    return Err(ExtractError::Gazetteer(format!("duplicate canonical name {:?}", e.canonical)));
                }
                if let Some(a) = &e.abbreviation {
                    if !ABBREVIATION.is_match(a) {
                        return Err(ExtractError::Gazetteer(format!(
                            "abbreviation {a:?} of {:?} is not 2-10 uppercase characters",
                            e.canonical
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Case-insensitive whole-word matcher over names and aliases; abbreviations match case-sensitively.
struct Matcher {
    regex: Option<Regex>,
    forms: HashMap<String, String>,
    exact: HashMap<String, String>,
}

fn word_bounded(form: &str) -> String {
    let escaped = regex::escape(form);
    let word = |c: Option<char>| c.is_some_and(|c| c.is_alphanumeric() || c == '_');
    let pre = if word(form.chars().next()) { r"\b" } else { "" };
    let post = if word(form.chars().last()) { r"\b" } else { "" };
    format!("{pre}{escaped}{post}")
}

impl Matcher {
    fn new(entries: &[GazetteerEntry]) -> Self {
        let mut forms = HashMap::new();
        let mut exact = HashMap::new();
        let mut alternatives: Vec<(String, String)> = Vec::new();
        for e in entries {
            for name in std::iter::once(&e.canonical).chain(&e.aliases) {
                let name = name.trim();
                if name.is_empty() {
                    continue;
                }
                forms.entry(name.to_lowercase()).or_insert_with(|| e.canonical.clone());
                alternatives.push((name.to_string(), format!("(?i:{})", word_bounded(name))));
            }
            if let Some(a) = &e.abbreviation {
                exact.entry(a.clone()).or_insert_with(|| e.canonical.clone());
                alternatives.push((a.clone(), word_bounded(a)));
            }
        }
        alternatives.sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then(a.0.cmp(&b.0)));
        let regex = (!alternatives.is_empty()).then(|| {
            let pattern: Vec<&str> = alternatives.iter().map(|(_, p)| p.as_str()).collect();
            Regex::new(&pattern.join("|")).expect("escaped alternatives")
        });
        Matcher { regex, forms, exact }
    }

    fn lookup(&self, surface: &str) -> Option<&String> {
        self.exact.get(surface).or_else(|| self.forms.get(&surface.to_lowercase()))
    }

    /// Non-overlapping matches as (byte start, byte end, canonical).
    fn find(&self, text: &str) -> Vec<(usize, usize, String)> {
        let Some(re) = &self.regex else {
            return Vec::new();
        };
        re.find_iter(text).filter_map(|m| self.lookup(m.as_str()).map(|c| (m.start(), m.end(), c.clone()))).collect()
    }
}

fn is_capitalized(token: &str) -> bool {
    token.chars().next().is_some_and(char::is_uppercase)
        && token.chars().all(|c| c.is_alphanumeric() || matches!(c, '-' | '&' | '\''))
}

/// Start offset of the capitalized name directly preceding byte `end`, if any.
/// Connectors may join capitalized words but never begin or end the name.
fn name_before(text: &str, end: usize) -> Option<usize> {
    let is_connector = |w: &str| CONNECTORS.contains(&w.to_lowercase().as_str());
    let mut run = Vec::new();
    for t in TOKEN.find_iter(&text[..end]).collect::<Vec<_>>().into_iter().rev() {
        if is_connector(t.as_str()) || is_capitalized(t.as_str()) {
            run.push(t);
        } else {
            break;
        }
    }
    if run.first().is_none_or(|t| is_connector(t.as_str())) {
        return None;
    }
    while run.last().is_some_and(|t| is_connector(t.as_str())) {
        run.pop();
    }
    run.last().map(|t| t.start())
}

/// Organization mentions: gazetteer names and aliases, plus names introduced as
/// `Name Sequence (ABBR)`; the abbreviation then resolves to that name for the
/// rest of the text.
pub fn extract_organizations(text: &str, gazetteer: &Gazetteer, doc_id: &str) -> Vec<ExtractedEntity> {
    let matcher = Matcher::new(&gazetteer.organizations);
    // (name start, name end, claim end, abbreviation, canonical)
    let mut introductions: Vec<(usize, usize, usize, String, String)> = Vec::new();
    for c in PAREN_ABBR.captures_iter(text) {
        let paren = c.get(0).unwrap();
        let Some(start) = name_before(text, paren.start()) else {
            continue;
        };
        let name = text[start..paren.start()].trim_end();
        let canonical = matcher.lookup(name).cloned().unwrap_or_else(|| name.to_string());
        introductions.push((start, start + name.len(), paren.end(), c[1].to_string(), canonical));
    }

    let claimed = |s: usize, e: usize| introductions.iter().any(|i| s < i.2 && e > i.0);
    let mut found: Vec<(usize, usize, String)> = introductions.iter().map(|i| (i.0, i.1, i.4.clone())).collect();
    for (s, e, canonical) in matcher.find(text) {
        if !claimed(s, e) {
            found.push((s, e, canonical));
        }
    }
    let mut seen_abbr = HashSet::new();
    for (_, _, claim_end, abbr, _) in &introductions {
        if !seen_abbr.insert(abbr.as_str()) {
            continue;
        }
        let re = Regex::new(&word_bounded(abbr)).expect("escaped abbreviation");
        for m in re.find_iter(&text[*claim_end..]) {
            let (s, e) = (claim_end + m.start(), claim_end + m.end());
            if claimed(s, e) || found.iter().any(|f| s < f.1 && e > f.0) {
                continue;
            }
            let latest = introductions.iter().rfind(|i| i.3 == *abbr && i.2 <= s).expect("introduced before");
            found.push((s, e, latest.4.clone()));
        }
    }
    found.sort_by_key(|f| (f.0, f.1));
    found.dedup_by(|b, a| b.0 < a.1);
    to_entities(text, found, EntityKind::Organization, doc_id)
}

/// Person mentions from the gazetteer only.
pub fn extract_persons(text: &str, gazetteer: &Gazetteer, doc_id: &str) -> Vec<ExtractedEntity> {
    let found = Matcher::new(&gazetteer.persons).find(text);
    to_entities(text, found, EntityKind::Person, doc_id)
}

fn to_entities(text: &str, found: Vec<(usize, usize, String)>, kind: EntityKind, doc_id: &str) -> Vec<ExtractedEntity> {
    found
        .into_iter()
        .map(|(s, e, normalized)| ExtractedEntity {
            kind,
            surface: text[s..e].to_string(),
            normalized,
            span: char_span(text, s, e),
            doc_id: doc_id.to_string(),
        })
        .collect()
}
