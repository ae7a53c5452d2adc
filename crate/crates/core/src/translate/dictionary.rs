use std::collections::HashMap;

use super::{TranslateError, Translator};

/// Offline translator: longest-match phrase replacement over a `nl<TAB>en` lexicon.
#[derive(Debug, Clone, Default)]
pub struct DictionaryTranslator {
    phrases: HashMap<Vec<String>, String>,
    longest: usize,
}

#[derive(Debug, PartialEq)]
enum Piece<'a> {
    Word(&'a str),
    Gap(&'a str),
}

fn pieces(text: &str) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut in_word = None;
    for (i, c) in text.char_indices() {
        let word_char = c.is_alphanumeric() || c == '\'';
        match in_word {
            Some(w) if w != word_char => {
                let s = &text[start..i];
                out.push(if w { Piece::Word(s) } else { Piece::Gap(s) });
                start = i;
                in_word = Some(word_char);
            }
            None => in_word = Some(word_char),
            _ => {}
        }
    }
    if let Some(w) = in_word {
        let s = &text[start..];
        out.push(if w { Piece::Word(s) } else { Piece::Gap(s) });
    }
    out
}

fn words(text: &str) -> Vec<String> {
    pieces(text)
        .into_iter()
        .filter_map(|p| match p {
            Piece::Word(w) => Some(w.to_lowercase()),
            Piece::Gap(_) => None,
        })
        .collect()
}

fn match_case(source: &str, replacement: &str) -> String {
    let upper = source.chars().next().is_some_and(char::is_uppercase);
    let mut chars = replacement.chars();
    match chars.next() {
        Some(first) if upper => first.to_uppercase().chain(chars).collect(),
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

impl DictionaryTranslator {
    pub fn from_tsv(text: &str) -> Result<Self, TranslateError> {
        let mut dict = DictionaryTranslator::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (nl, en) = line
                .split_once('\t')
                .ok_or_else(|| TranslateError::Lexicon { line: i + 1, message: "expected nl<TAB>en".into() })?;
            let key = words(nl);
            if key.is_empty() {
                return Err(TranslateError::Lexicon { line: i + 1, message: "empty source phrase".into() });
            }
            dict.longest = dict.longest.max(key.len());
            dict.phrases.insert(key, en.trim().to_string());
        }
        Ok(dict)
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn translate_text(&self, text: &str) -> String {
        let pieces = pieces(text);
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        while i < pieces.len() {
            let Piece::Word(first) = pieces[i] else {
                if let Piece::Gap(g) = pieces[i] {
                    out.push_str(g);
                }
                i += 1;
                continue;
            };
            // Candidate phrase: words at i, i+2, ... separated by whitespace-only gaps.
            let mut key = vec![first.to_lowercase()];
            let mut ends = vec![i];
            let mut j = i;
            while key.len() < self.longest {
                match (pieces.get(j + 1), pieces.get(j + 2)) {
                    (Some(Piece::Gap(g)), Some(Piece::Word(w))) if g.chars().all(char::is_whitespace) => {
                        key.push(w.to_lowercase());
                        j += 2;
                        ends.push(j);
                    }
                    _ => break,
                }
            }
            let hit = (1..=key.len()).rev().find_map(|n| self.phrases.get(&key[..n]).map(|en| (n, en)));
            match hit {
                Some((n, en)) => {
                    out.push_str(&match_case(first, en));
                    i = ends[n - 1] + 1;
                }
                None => {
                    out.push_str(first);
                    i += 1;
                }
            }
        }
        out
    }
}

impl Translator for DictionaryTranslator {
    fn translate(&self, text: &str, _source: &str, _target: &str) -> Result<String, String> {
        Ok(self.translate_text(text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dict() -> DictionaryTranslator {
        DictionaryTranslator::from_tsv(
            "leeftijd\tage\nleeftijd bij overlijden\tAge at Death\nbij\tat\ndatum van overlijden\tdate of death\n",
        )
        .unwrap()
    }

    #[test]
    fn longest_match_wins() {
        assert_eq!(dict().translate_text("Leeftijd bij overlijden"), "Age at Death");
        assert_eq!(dict().translate_text("leeftijd bij geboorte"), "age at geboorte");
    }

    #[test]
    fn first_letter_case_follows_source() {
        assert_eq!(dict().translate_text("Datum van overlijden."), "Date of death.");
        assert_eq!(dict().translate_text("de datum van overlijden"), "de date of death");
    }

    #[test]
    fn punctuation_breaks_phrases() {
        assert_eq!(dict().translate_text("leeftijd, bij overlijden"), "age, at overlijden");
    }

    #[test]
    fn unknown_text_passes_through() {
        assert_eq!(dict().translate_text("  GBAGESLACHT (2019)  "), "  GBAGESLACHT (2019)  ");
        assert_eq!(dict().translate_text(""), "");
    }

    #[test]
    fn malformed_lexicon() {
        assert!(DictionaryTranslator::from_tsv("no tab here\n").is_err());
    }
}
