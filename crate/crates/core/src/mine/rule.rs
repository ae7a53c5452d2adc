use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Binary atom `relation(subject, object)` over variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub relation: String,
    pub subject: String,
    pub object: String,
}

impl Atom {
    pub fn new(relation: &str, subject: &str, object: &str) -> Self {
        Atom { relation: relation.to_string(), subject: subject.to_string(), object: object.to_string() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{} <{}> ?{}", self.subject, self.relation, self.object)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RuleScores {
    pub support: u64,
    pub head_coverage: f64,
    pub std_confidence: f64,
    pub pca_confidence: f64,
}

/// `body ⇒ head`, stored in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HornRule {
    pub body: Vec<Atom>,
    pub head: Atom,
    pub scores: RuleScores,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl HornRule {
    /// Canonicalizes variable names and body order; scores start at zero.
    pub fn new(body: Vec<Atom>, head: Atom) -> Self {
        let (body, head) = canonicalize(&body, &head);
        HornRule { body, head, scores: RuleScores::default() }
    }

    /// `?b <r1> ?a & ... => ?a <r> ?b`
    pub fn canonical_text(&self) -> String {
        rule_text(&self.body, &self.head)
    }

    /// Every variable occurs in at least two atoms.
    pub fn is_closed(&self) -> bool {
        let mut counts: std::collections::HashMap<&str, usize> = Default::default();
        for a in self.body.iter().chain([&self.head]) {
            *counts.entry(&a.subject).or_default() += 1;
            *counts.entry(&a.object).or_default() += 1;
        }
        counts.values().all(|&c| c >= 2)
    }

    /// Line of a rules file: `<canonical text>\t<support> <hc> <std> <pca>`.
    pub fn to_line(&self) -> String {
        let s = &self.scores;
        format!(
            "{}\t{} {} {} {}",
            self.canonical_text(),
            s.support,
            s.head_coverage,
            s.std_confidence,
            s.pca_confidence
        )
    }
}

fn rule_text(body: &[Atom], head: &Atom) -> String {
    let body: Vec<String> = body.iter().map(Atom::to_string).collect();
    format!("{} => {}", body.join(" & "), head)
}

fn var_name(i: usize) -> String {
    // a..z, then v26, v27, ...
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("v{i}")
    }
}

/// Renames head variables to `a`, `b`, and body variables in first-occurrence
/// order; among all body orderings the one with the smallest text wins.
pub fn canonicalize(body: &[Atom], head: &Atom) -> (Vec<Atom>, Atom) {
    let mut best: Option<(String, Vec<Atom>, Atom)> = None;
    let mut indices: Vec<usize> = (0..body.len()).collect();
    permutations(&mut indices, 0, &mut |perm| {
        let mut names: Vec<(String, String)> = Vec::new();
        let mut rename = |v: &str| -> String {
            if let Some((_, n)) = names.iter().find(|(old, _)| old == v) {
                return n.clone();
            }
            let n = var_name(names.len());
            names.push((v.to_string(), n.clone()));
            n
        };
        let h = Atom::new(&head.relation, &rename(&head.subject), &rename(&head.object));
        let b: Vec<Atom> = perm
            .iter()
            .map(|&i| {
                let a = &body[i];
                let s = rename(&a.subject);
                let o = rename(&a.object);
                Atom::new(&a.relation, &s, &o)
            })
            .collect();
        let text = rule_text(&b, &h);
        if best.as_ref().is_none_or(|(t, _, _)| text < *t) {
            best = Some((text, b, h));
        }
    });
    let (_, b, h) = best.expect("at least one permutation");
    (b, h)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn parse_atom(text: &str) -> Option<Atom> {
    let text = text.trim();
    let (subj, rest) = text.split_once(' ')?;
    let rest = rest.trim();
    let close = rest.find('>')?;
    let relation = rest.strip_prefix('<')?.get(..close - 1)?;
    let obj = rest[close + 1..].trim();
    Some(Atom::new(relation, subj.strip_prefix('?')?, obj.strip_prefix('?')?))
}

/// Parses a rules file; blank lines and `#` comments are skipped.
pub fn parse_rules(text: &str) -> Result<Vec<HornRule>, RuleParseError> {
    let mut rules = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let err = |message: &str| RuleParseError::Syntax { line: idx + 1, message: message.to_string() };
        let line = line.trim_end();
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (rule, scores) = line.split_once('\t').ok_or_else(|| err("missing scores column"))?;
        let (body, head) = rule.split_once("=>").ok_or_else(|| err("missing '=>'"))?;
        let head = parse_atom(head).ok_or_else(|| err("malformed head atom"))?;
        let body = body
            .split(" & ")
            .filter(|s| !s.trim().is_empty())
            .map(|a| parse_atom(a).ok_or_else(|| err("malformed body atom")))
            .collect::<Result<Vec<_>, _>>()?;
        let nums: Vec<&str> = scores.split_whitespace().collect();
        if nums.len() != 4 {
            return Err(err("expected four scores"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| err("bad score"));
        let mut parsed = HornRule::new(body, head);
        parsed.scores = RuleScores {
            support: nums[0].parse().map_err(|_| err("bad support"))?,
            head_coverage: float(nums[1])?,
            std_confidence: float(nums[2])?,
            pca_confidence: float(nums[3])?,
        };
        rules.push(parsed);
    }
    Ok(rules)
}

pub fn format_rules(rules: &[HornRule]) -> String {
    rules.iter().map(|r| r.to_line() + "\n").collect()
}
