use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::layout::{join_lines, Paragraph};

static VARIABLE_NAME: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[A-Z][A-Z0-9_]{2,}$").unwrap());

pub const DEFAULT_VARIABLE_HEADERS: [&str; 2] = ["variabelen", "beschrijving van de variabelen"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableRow {
    pub name: String,
    pub label_nl: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_en: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptionDocument {
    pub doc_id: String,
    pub category: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub additional_categories: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub landing_page: Option<String>,
    pub title_nl: String,
    pub paragraphs_nl: Vec<String>,
    pub variable_rows: Vec<VariableRow>,
    pub fetched_at: String,
    pub sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_en: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paragraphs_en: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl DescriptionDocument {
    pub fn is_translated(&self) -> bool {
        self.title_en.is_some()
            && self.paragraphs_en.is_some()
            && self.variable_rows.iter().all(|v| v.label_en.is_some())
    }

    pub fn categories(&self) -> Vec<&str> {
        std::iter::once(self.category.as_str()).chain(self.additional_categories.iter().map(String::as_str)).collect()
    }
}

/// Structural parts recovered from the paragraphs of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sections {
    pub title: Option<String>,
    pub paragraphs: Vec<String>,
    pub variable_rows: Vec<VariableRow>,
}

fn starts_variable_section(text: &str, headers: &[String]) -> bool {
    let lower = text.trim().to_lowercase();
    headers.iter().any(|h| {
        let h = h.to_lowercase();
        lower.strip_prefix(&h).is_some_and(|rest| {
            rest.is_empty() || rest.starts_with(|c: char| c.is_whitespace() || c == ':' || c.is_ascii_punctuation())
        })
    })
}

/// Finds the title (largest font on the first page, first such line), the
/// description paragraphs before the variables section and the variable rows.
pub fn segment_sections(paragraphs: &[Paragraph], headers: &[String]) -> Sections {
    let first_page = paragraphs.iter().map(|p| p.page).min();
    let mut title_at: Option<(usize, usize)> = None;
    let mut best = f64::NEG_INFINITY;
    for (pi, p) in paragraphs.iter().enumerate() {
        if Some(p.page) != first_page {
            continue;
        }
        for (li, l) in p.lines.iter().enumerate() {
            if !l.text.trim().is_empty() && l.font_size > best {
                best = l.font_size;
                title_at = Some((pi, li));
            }
        }
    }
    let title = title_at.map(|(pi, li)| paragraphs[pi].lines[li].text.trim().to_string());

    let mut description = Vec::new();
    let mut variable_rows: Vec<VariableRow> = Vec::new();
    let mut in_variables = false;
    for (pi, p) in paragraphs.iter().enumerate() {
        let lines: Vec<&str> = p
            .lines
            .iter()
            .enumerate()
            .filter(|(li, _)| title_at != Some((pi, *li)))
            .map(|(_, l)| l.text.as_str())
            .collect();
        if !in_variables && starts_variable_section(&join_lines(lines.iter().copied()), headers) {
            in_variables = true;
        }
        if in_variables {
            for line in lines {
                let line = line.trim();
                let (first, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                if VARIABLE_NAME.is_match(first) {
                    variable_rows.push(VariableRow {
                        name: first.to_string(),
                        label_nl: rest.trim().to_string(),
                        label_en: None,
                    });
                }
            }
        } else {
            let text = join_lines(lines.into_iter());
            if !text.is_empty() {
                description.push(text);
            }
        }
    }
    Sections { title, paragraphs: description, variable_rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::layout::Line;

    fn para(page: u32, lines: &[(&str, f64)]) -> Paragraph {
        Paragraph {
            page,
            lines: lines
                .iter()
                .map(|(t, size)| Line { text: t.to_string(), page, y0: 0.0, y1: *size, font_size: *size })
                .collect(),
        }
    }

    fn headers() -> Vec<String> {
        DEFAULT_VARIABLE_HEADERS.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn title_description_and_variables() {
        let paras = vec![
            para(1, &[("Leeftijd bij overlijden", 18.0)]),
            para(1, &[("Dit bestand bevat", 10.0), ("gegevens.", 10.0)]),
            para(2, &[("Beschrijving van de variabelen", 12.0)]),
            para(
                2,
                &[
                    ("GBAGESLACHT geslacht van de persoon", 10.0),
                    ("RINPERSOON persoonsnummer", 10.0),
                    ("toelichting", 10.0),
                ],
            ),
        ];
        let s = segment_sections(&paras, &headers());
        assert_eq!(s.title.as_deref(), Some("Leeftijd bij overlijden"));
        assert_eq!(s.paragraphs, vec!["Dit bestand bevat gegevens."]);
        assert_eq!(
            s.variable_rows[0],
            VariableRow { name: "GBAGESLACHT".into(), label_nl: "geslacht van de persoon".into(), label_en: None }
        );
        assert_eq!(s.variable_rows.len(), 2);
    }

    #[test]
    fn no_variable_section() {
        let s = segment_sections(&[para(1, &[("Titel", 14.0)]), para(1, &[("GBA tekst", 10.0)])], &headers());
        assert!(s.variable_rows.is_empty());
        assert_eq!(s.paragraphs, vec!["GBA tekst"]);
    }

    #[test]
    fn no_title_on_empty_input() {
        assert_eq!(segment_sections(&[], &headers()).title, None);
    }

    #[test]
    fn header_must_be_whole_words() {
        assert!(starts_variable_section("Variabelen:", &headers()));
        assert!(!starts_variable_section("Variabelenlijst volgt", &headers()));
    }
}
