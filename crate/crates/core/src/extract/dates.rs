use std::sync::LazyLock;

use chrono::NaiveDate;
use regex::Regex;

use super::{char_span, EntityKind, ExtractedEntity};

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

static DAY_MONTH_YEAR: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(r"(?i)(\d{{1,2}})(?:st|nd|rd|th)?\s+({})\s+(\d{{4}})", MONTHS.join("|"))).unwrap()
});
static DMY_NUMERIC: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(\d{2})-(\d{2})-(\d{4})").unwrap());
static YMD_NUMERIC: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(\d{4})-(\d{2})-(\d{2})").unwrap());
static YEAR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?:19|20)\d{2}").unwrap());

fn isolated(text: &str, start: usize, end: usize) -> bool {
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    !before.is_some_and(|c| c.is_ascii_digit()) && !after.is_some_and(|c| c.is_ascii_digit())
}

fn full_date(y: &str, m: &str, d: &str) -> Option<String> {
    let date = NaiveDate::from_ymd_opt(y.parse().ok()?, m.parse().ok()?, d.parse().ok()?)?;
    Some(date.format("%Y-%m-%d").to_string())
}

/// Dates in order of appearance. Full dates (`31st March 2020`, `31-03-2020`,
/// `2020-03-31`) normalize to `YYYY-MM-DD`, bare years 1900-2099 to `YYYY`.
/// Overlapping candidates are resolved longest first.
pub fn extract_dates(text: &str, doc_id: &str) -> Vec<ExtractedEntity> {
    // (byte start, byte end, normalized)
    let mut candidates: Vec<(usize, usize, String)> = Vec::new();
    for c in DAY_MONTH_YEAR.captures_iter(text) {
        let m = c.get(0).unwrap();
        if !isolated(text, m.start(), m.end()) {
            continue;
        }
        let month = MONTHS.iter().position(|x| x.eq_ignore_ascii_case(&c[2])).unwrap() + 1;
        if let Some(n) = full_date(&c[3], &month.to_string(), &c[1]) {
            candidates.push((m.start(), m.end(), n));
        }
    }
    for (re, order) in [(&*DMY_NUMERIC, [3, 2, 1]), (&*YMD_NUMERIC, [1, 2, 3])] {
        // overlapping numeric forms are rare; scanning from every start keeps them all
        let mut from = 0;
        while let Some(c) = re.captures_at(text, from) {
            let m = c.get(0).unwrap();
            if isolated(text, m.start(), m.end()) {
                if let Some(n) = full_date(&c[order[0]], &c[order[1]], &c[order[2]]) {
                    candidates.push((m.start(), m.end(), n));
                }
            }
            from = m.start() + text[m.start()..].chars().next().map_or(1, char::len_utf8);
        }
    }
    for m in YEAR.find_iter(text) {
        if isolated(text, m.start(), m.end()) {
            candidates.push((m.start(), m.end(), m.as_str().to_string()));
        }
    }

    candidates.sort_by(|a, b| (b.1 - b.0).cmp(&(a.1 - a.0)).then(a.0.cmp(&b.0)));
    let mut chosen: Vec<(usize, usize, String)> = Vec::new();
    for c in candidates {
        if chosen.iter().all(|k| c.1 <= k.0 || c.0 >= k.1) {
            chosen.push(c);
        }
    }
    chosen.sort_by_key(|c| c.0);
    chosen
        .into_iter()
        .map(|(s, e, normalized)| ExtractedEntity {
            kind: EntityKind::Date,
            surface: text[s..e].to_string(),
            normalized,
            span: char_span(text, s, e),
            doc_id: doc_id.to_string(),
        })
        .collect()
}
