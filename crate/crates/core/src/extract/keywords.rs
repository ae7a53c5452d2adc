use std::collections::{BTreeMap, HashMap, HashSet};

pub const DEFAULT_STOPLIST: &str = include_str!("stoplist.txt");

pub fn parse_stoplist(text: &str) -> HashSet<String> {
    text.lines().map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

/// Lowercased alphabetic runs of at least three letters that are not stopwords.
pub fn candidate_terms(text: &str, stoplist: &HashSet<String>) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| t.chars().count() >= 3)
        .map(str::to_lowercase)
        .filter(|t| !stoplist.contains(t))
        .collect()
}

/// Document frequencies over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub documents: usize,
    pub df: HashMap<String, usize>,
}

impl CorpusStats {
    pub fn build<'a>(texts: impl IntoIterator<Item = &'a str>, stoplist: &HashSet<String>) -> Self {
        let mut stats = CorpusStats::default();
        for text in texts {
            stats.documents += 1;
            let unique: HashSet<String> = candidate_terms(text, stoplist).into_iter().collect();
            for t in unique {
                *stats.df.entry(t).or_default() += 1;
            }
        }
        stats
    }

    pub fn idf(&self, term: &str) -> f64 {
        let df = self.df.get(term).copied().unwrap_or(0).max(1);
        (self.documents.max(df) as f64 / df as f64).ln()
    }
}

/// Top-`k` terms by tf × ln(N/df); ties go to the higher tf, then lexicographic order.
pub fn extract_keywords(text: &str, stats: &CorpusStats, stoplist: &HashSet<String>, k: usize) -> Vec<String> {
    let mut tf: BTreeMap<String, usize> = BTreeMap::new();
    for t in candidate_terms(text, stoplist) {
        *tf.entry(t).or_default() += 1;
    }
    let mut scored: Vec<(f64, usize, String)> = tf.into_iter().map(|(t, n)| (n as f64 * stats.idf(&t), n, t)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
    scored.into_iter().take(k).map(|(_, _, t)| t).collect()
}
