//! Independent oracles shared by integration and acceptance tests. Nothing
//! here calls into the code paths it checks.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Entity triple as plain strings `(s, p, o)`.
pub type Fact = (String, String, String);

/// Random entity graph with at most `max_triples` facts over `relations` relations.
pub fn random_kg(seed: u64, max_triples: usize, relations: usize, entities: usize) -> Vec<Fact> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(0..=max_triples);
    let mut seen = BTreeSet::new();
    let mut facts = Vec::new();
    for _ in 0..n {
        let s = rng.random_range(0..entities);
        let o = rng.random_range(0..entities);
        let p = rng.random_range(0..relations);
        let fact = (format!("http://ex.org/e{s}"), format!("http://ex.org/r{p}"), format!("http://ex.org/e{o}"));
        if seen.insert(fact.clone()) {
            facts.push(fact.clone());
        }
        // plant inverse structure so that some rules survive the thresholds
        if p == 0 && rng.random_bool(0.7) {
            let inv = (fact.2.clone(), "http://ex.org/r1".to_string(), fact.0.clone());
            if seen.insert(inv.clone()) && facts.len() < max_triples {
                facts.push(inv);
            }
        }
    }
    facts.truncate(max_triples);
    facts
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRule {
    pub text: String,
    pub support: u64,
    pub head_coverage: f64,
    pub std_confidence: f64,
    pub pca_confidence: f64,
}

type OAtom = (usize, usize, usize); // (relation index, subject var, object var)

fn oracle_text(rels: &[String], head: OAtom, body: &[OAtom]) -> String {
    // minimum over body permutations of the first-occurrence renaming
    let perms: Vec<Vec<usize>> = match body.len() {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        n => panic!("oracle supports bodies of 1-2 atoms, got {n}"),
    };
    perms
        .iter()
        .map(|perm| {
            let mut names: Vec<usize> = Vec::new();
            let mut name = |v: usize| {
                let i = names.iter().position(|x| *x == v).unwrap_or_else(|| {
                    names.push(v);
                    names.len() - 1
                });
                ((b'a' + i as u8) as char).to_string()
            };
            let h = format!("?{} <{}> ?{}", name(head.1), rels[head.0], name(head.2));
            let b: Vec<String> = perm
                .iter()
                .map(|&i| {
                    let a = body[i];
                    let s = name(a.1);
                    let o = name(a.2);
                    format!("?{} <{}> ?{}", s, rels[a.0], o)
                })
                .collect();
            format!("{} => {}", b.join(" & "), h)
        })
        .min()
        .unwrap()
}

/// Exhaustive enumeration of closed rules of 2..=max_len atoms (max_len <= 3)
/// with nested-loop scoring. Literal objects must already be filtered out.
pub fn brute_force_rules(
    facts: &[Fact],
    max_len: usize,
    min_support: u64,
    min_hc: f64,
    min_std: f64,
) -> Vec<OracleRule> {
    let rels: Vec<String> = facts.iter().map(|f| f.1.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let by_rel: Vec<Vec<(&str, &str)>> = rels
        .iter()
        .map(|r| facts.iter().filter(|f| &f.1 == r).map(|f| (f.0.as_str(), f.2.as_str())).collect())
        .collect();

    let mut candidates: Vec<(OAtom, Vec<OAtom>)> = Vec::new();
    for h in 0..rels.len() {
        let head = (h, 0, 1);
        let mut atoms2 = Vec::new();
        let mut atoms3 = Vec::new();
        for r in 0..rels.len() {
            for s in 0..3 {
                for o in 0..3 {
                    if s != o {
                        if s < 2 && o < 2 {
                            atoms2.push((r, s, o));
                        }
                        atoms3.push((r, s, o));
                    }
                }
            }
        }
        for a in &atoms2 {
            if *a != head {
                candidates.push((head, vec![*a]));
            }
        }
        if max_len >= 3 {
            for a in &atoms3 {
                for b in &atoms3 {
                    if a == b || *a == head || *b == head {
                        continue;
                    }
                    let mut count = [0usize; 3];
                    for x in [head, *a, *b] {
                        count[x.1] += 1;
                        count[x.2] += 1;
                    }
                    let uses_z = count[2] > 0;
                    if count[0] < 2 || count[1] < 2 || (uses_z && count[2] < 2) {
                        continue;
                    }
                    candidates.push((head, vec![*a, *b]));
                }
            }
        }
    }

    let mut out: BTreeMap<String, OracleRule> = BTreeMap::new();
    for (head, body) in candidates {
        let text = oracle_text(&rels, head, &body);
        if out.contains_key(&text) {
            continue;
        }
        // all body instantiations projected on (x, y)
        let mut pairs: HashSet<(&str, &str)> = HashSet::new();
        match body.len() {
            1 => {
                let a = body[0];
                for &(s, o) in &by_rel[a.0] {
                    let mut vals = [""; 3];
                    vals[a.1] = s;
                    vals[a.2] = o;
                    pairs.insert((vals[0], vals[1]));
                }
            }
            _ => {
                let (a, b) = (body[0], body[1]);
                for &(s1, o1) in &by_rel[a.0] {
                    for &(s2, o2) in &by_rel[b.0] {
                        let mut vals: [Option<&str>; 3] = [None; 3];
                        let mut ok = true;
                        for (v, val) in [(a.1, s1), (a.2, o1), (b.1, s2), (b.2, o2)] {
                            match vals[v] {
                                Some(x) if x != val => ok = false,
                                _ => vals[v] = Some(val),
                            }
                        }
                        if ok {
                            pairs.insert((vals[0].unwrap(), vals[1].unwrap()));
                        }
                    }
                }
            }
        }
        let head_facts: HashSet<(&str, &str)> = by_rel[head.0].iter().copied().collect();
        let support = pairs.iter().filter(|p| head_facts.contains(*p)).count() as u64;
        let head_subjects: HashSet<&str> = head_facts.iter().map(|(s, _)| *s).collect();
        let pca_den = pairs.iter().filter(|(x, _)| head_subjects.contains(x)).count();
        let div = |n: u64, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        let rule = OracleRule {
            text: text.clone(),
            support,
            head_coverage: div(support, head_facts.len()),
            std_confidence: div(support, pairs.len()),
            pca_confidence: div(support, pca_den),
        };
        if rule.support >= min_support && rule.head_coverage >= min_hc && rule.std_confidence >= min_std {
            out.insert(text, rule);
        }
    }
    let mut rules: Vec<OracleRule> = out.into_values().collect();
    rules.sort_by(|a, b| {
        b.pca_confidence.total_cmp(&a.pca_confidence).then(b.support.cmp(&a.support)).then_with(|| a.text.cmp(&b.text))
    });
    rules
}

/// Nested-loop BGP evaluation over string terms; variables start with '?'.
pub fn nested_loop_bgp(
    triples: &[(String, String, String)],
    patterns: &[[String; 3]],
    select: &[String],
) -> BTreeSet<Vec<String>> {
    let mut solutions: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for pattern in patterns {
        let mut next = Vec::new();
        for sol in &solutions {
            for t in triples {
                let mut s = sol.clone();
                let mut ok = true;
                for (pt, val) in pattern.iter().zip([&t.0, &t.1, &t.2]) {
                    if let Some(var) = pt.strip_prefix('?') {
                        match s.get(var) {
                            Some(v) if v != val => ok = false,
                            Some(_) => {}
                            None => {
                                s.insert(var.to_string(), val.clone());
                            }
                        }
                    } else if pt != val {
                        ok = false;
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    next.push(s);
                }
            }
        }
        solutions = next;
    }
    solutions.into_iter().map(|s| select.iter().map(|v| s[v].clone()).collect()).collect()
}

/// SGNS loss for one (center, context, negatives) configuration.
pub fn sgns_loss(v: &[f64], u_o: &[f64], negs: &[Vec<f64>]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let ln_sigmoid = |x: f64| -(1.0 + (-x).exp()).ln();
    -ln_sigmoid(dot(u_o, v)) - negs.iter().map(|n| ln_sigmoid(-dot(n, v))).sum::<f64>()
}

const LEXICAL_ALPHABET: &[&str] =
    &["a", "Z", "0", " ", "\"", "\\", "\n", "\r", "\t", "é", "日", "😀", "'", "<", ">", "@", "^", "#", "\\u0041", "_:"];

fn random_lexical(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(0..12);
    (0..n).map(|_| LEXICAL_ALPHABET[rng.random_range(0..LEXICAL_ALPHABET.len())]).collect()
}

fn random_iri(rng: &mut ChaCha8Rng) -> String {
    let paths = ["a", "b/c", "d#e", "caf%C3%A9", "日本", "x?y=1&z=2", "v~w.x-y_z"];
    let schemes = ["http://ex.org/", "https://data.example.org/cbs/", "urn:x:"];
    format!(
        "{}{}{}",
        schemes[rng.random_range(0..schemes.len())],
        paths[rng.random_range(0..paths.len())],
        rng.random_range(0..50)
    )
}

/// Random triples (as N-Triples term strings) covering IRIs, blank nodes,
/// plain, language-tagged and typed literals with characters that need escaping.
pub fn random_ntriples_terms(seed: u64) -> Vec<[String; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(0..20);
    let langs = ["en", "nl", "en-gb", "zh-hant-tw"];
    let mut out = Vec::new();
    for _ in 0..n {
        let subject = if rng.random_bool(0.2) {
            format!("_:b{}", rng.random_range(0..10))
        } else {
            format!("<{}>", random_iri(&mut rng))
        };
        let predicate = format!("<{}>", random_iri(&mut rng));
        let object = match rng.random_range(0..5) {
            0 => format!("<{}>", random_iri(&mut rng)),
            1 => format!("_:o{}", rng.random_range(0..10)),
            2 => format!("\"{}\"", escape(&random_lexical(&mut rng))),
            3 => format!("\"{}\"@{}", escape(&random_lexical(&mut rng)), langs[rng.random_range(0..langs.len())]),
            _ => format!("\"{}\"^^<http://www.w3.org/2001/XMLSchema#string>", escape(&random_lexical(&mut rng))),
        };
        out.push([subject, predicate, object]);
    }
    out
}

/// N-Triples string escaping written independently of the crate's serializer.
pub fn escape(lexical: &str) -> String {
    lexical.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n").replace('\r', "\\r").replace('\t', "\\t")
}

/// A random graph (terms in N-Triples form) plus a random BGP of 1-4 patterns.
pub struct BgpCase {
    pub triples: Vec<(String, String, String)>,
    pub patterns: Vec<[String; 3]>,
    pub select: Vec<String>,
}

pub fn random_bgp_case(seed: u64) -> BgpCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entities = rng.random_range(3..40);
    let predicates = rng.random_range(1..6);
    let n = rng.random_range(0..=1000);
    let entity = |i: usize| format!("<http://ex.org/e{i}>");
    let mut seen = BTreeSet::new();
    for _ in 0..n {
        let s = entity(rng.random_range(0..entities));
        let p = format!("<http://ex.org/p{}>", rng.random_range(0..predicates));
        let o = if rng.random_bool(0.15) {
            format!("\"v{}\"@en", rng.random_range(0..5))
        } else {
            entity(rng.random_range(0..entities))
        };
        seen.insert((s, p, o));
    }
    let triples: Vec<_> = seen.into_iter().collect();

    let vars = ["?x", "?y", "?z", "?w"];
    let k = rng.random_range(1..=4);
    let mut patterns = Vec::new();
    for _ in 0..k {
        let pick = |pos: usize, rng: &mut ChaCha8Rng| -> String {
            if rng.random_bool(0.7) || triples.is_empty() {
                vars[rng.random_range(0..vars.len())].to_string()
            } else {
                let t = &triples[rng.random_range(0..triples.len())];
                [&t.0, &t.1, &t.2][pos].clone()
            }
        };
        let s = pick(0, &mut rng);
        let p = pick(1, &mut rng);
        let o = pick(2, &mut rng);
        patterns.push([s, p, o]);
    }
    let mut select = Vec::new();
    for p in &patterns {
        for t in p {
            if let Some(v) = t.strip_prefix('?') {
                if !select.contains(&v.to_string()) {
                    select.push(v.to_string());
                }
            }
        }
    }
    BgpCase { triples, patterns, select }
}

/// Central finite-difference gradient of `f` at `x`.
pub fn finite_difference(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[i] += h;
            minus[i] -= h;
            (f(&plus) - f(&minus)) / (2.0 * h)
        })
        .collect()
}

/// Minimal complex arithmetic for complex-step differentiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }
    pub fn add(self, o: Complex) -> Complex {
        Complex { re: self.re + o.re, im: self.im + o.im }
    }
    pub fn mul(self, o: Complex) -> Complex {
        Complex { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    pub fn neg(self) -> Complex {
        Complex { re: -self.re, im: -self.im }
    }
    pub fn exp(self) -> Complex {
        let m = self.re.exp();
        Complex { re: m * self.im.cos(), im: m * self.im.sin() }
    }
    pub fn ln(self) -> Complex {
        Complex { re: self.re.hypot(self.im).ln(), im: self.im.atan2(self.re) }
    }
}

/// SGNS loss over complex inputs: -ln σ(u_o·v) - Σ ln σ(-u_k·v).
pub fn sgns_loss_complex(v: &[Complex], u_o: &[Complex], negs: &[Vec<Complex>]) -> Complex {
    let dot = |a: &[Complex], b: &[Complex]| a.iter().zip(b).fold(Complex::real(0.0), |acc, (x, y)| acc.add(x.mul(*y)));
    // -ln σ(x) = ln(1 + e^{-x})
    let nls = |x: Complex| Complex::real(1.0).add(x.neg().exp()).ln();
    negs.iter().fold(nls(dot(u_o, v)), |acc, n| acc.add(nls(dot(n, v).neg())))
}

/// Complex-step derivative Im f(x + ih e_i) / h for every coordinate; free of
/// subtractive cancellation, so accurate to rounding for analytic `f`.
pub fn complex_step(f: &dyn Fn(&[Complex]) -> Complex, x: &[f64], h: f64) -> Vec<f64> {
    let base: Vec<Complex> = x.iter().map(|&r| Complex::real(r)).collect();
    (0..x.len())
        .map(|i| {
            let mut p = base.clone();
            p[i].im = h;
            f(&p).im / h
        })
        .collect()
}

/// `-ln σ(s+δ) - (-ln σ(s-δ))` evaluated without cancellation: the step is
/// kept apart from the score and the difference of logs is taken as one ln1p.
fn neg_log_sigmoid_diff(s: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    let sinh = delta.sinh();
    if s >= 0.0 {
        let e = (-s).exp();
        (-2.0 * e * sinh / (1.0 + e * delta.exp())).ln_1p()
    } else {
        let e = s.exp();
        -2.0 * delta + (2.0 * e * sinh / (1.0 + e * (-delta).exp())).ln_1p()
    }
}

pub struct SgnsPartials {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Central differences `(L(x+h e_i) - L(x-h e_i)) / 2h` of the SGNS loss for
/// every parameter. The loss is linear in each parameter through dot
/// products, so each term's perturbed score is `s ± h·w_i`.
pub fn sgns_central_differences(v: &[f64], u_o: &[f64], negs: &[Vec<f64>], h: f64) -> SgnsPartials {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let s_o = dot(u_o, v);
    // negative terms are -ln σ(-u_k·v)
    let s_neg: Vec<f64> = negs.iter().map(|n| -dot(n, v)).collect();
    let center = (0..v.len())
        .map(|i| {
            let mut d = neg_log_sigmoid_diff(s_o, h * u_o[i]);
            for (n, &s) in negs.iter().zip(&s_neg) {
                d += neg_log_sigmoid_diff(s, -h * n[i]);
            }
            d / (2.0 * h)
        })
        .collect();
    let context = (0..u_o.len()).map(|i| neg_log_sigmoid_diff(s_o, h * v[i]) / (2.0 * h)).collect();
    let negatives =
        s_neg.iter().map(|&s| (0..v.len()).map(|i| neg_log_sigmoid_diff(s, -h * v[i]) / (2.0 * h)).collect()).collect();
    SgnsPartials { center, context, negatives }
}

/// One SGNS configuration: center, context and negative vectors.
pub struct SgnsCase {
    pub v: Vec<f64>,
    pub u_o: Vec<f64>,
    pub negs: Vec<Vec<f64>>,
}

/// Random dimension 1-16, 1-8 negatives, entries scaled by 0.1, 1 or 3.
pub fn random_sgns_case(seed: u64) -> SgnsCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(1..=16);
    let k = rng.random_range(1..=8);
    let scale = [0.1, 1.0, 3.0][rng.random_range(0..3)];
    let vec = |rng: &mut ChaCha8Rng| (0..d).map(|_| rng.random_range(-scale..scale)).collect::<Vec<f64>>();
    SgnsCase { v: vec(&mut rng), u_o: vec(&mut rng), negs: (0..k).map(|_| vec(&mut rng)).collect() }
}

/// Date extraction table: text and the normalized dates expected, in order
/// of appearance.
pub const DATE_CASES: [(&str, &[&str]); 30] = [
    // day, month name, year
    ("downloaded on 31st March 2020", &["2020-03-31"]),
    ("1 January 2019 was the start", &["2019-01-01"]),
    ("on 2nd february 2021.", &["2021-02-02"]),
    ("from 3rd April 1999 onwards", &["1999-04-03"]),
    ("15th MAY 2010", &["2010-05-15"]),
    ("22 June 2005 and 23 June 2005", &["2005-06-22", "2005-06-23"]),
    ("deadline 30 September 2024", &["2024-09-30"]),
    ("11th November 1918", &["1918-11-11"]),
    ("29 February 2020 leap day", &["2020-02-29"]),
    ("31 April 2020 is not a date", &["2020"]),
    // numeric day-month-year and year-month-day
    ("published 31-03-2020", &["2020-03-31"]),
    ("2020-03-31 release", &["2020-03-31"]),
    ("01-01-2000 and 2000-12-31", &["2000-01-01", "2000-12-31"]),
    ("valid from 15-08-1995", &["1995-08-15"]),
    ("revision 2018-07-04", &["2018-07-04"]),
    ("29-02-2019 is invalid", &["2019"]),
    ("2019-13-01 month out of range", &["2019"]),
    ("02-11-2011, 2011-11-03", &["2011-11-02", "2011-11-03"]),
    ("30-06-2023.", &["2023-06-30"]),
    ("code 123-04-2020 keeps only the year", &["2020"]),
    // bare years
    ("in 2019 the survey", &["2019"]),
    ("between 1995 and 2005", &["1995", "2005"]),
    ("year 1899 is out of range", &[]),
    ("2100 is out of range too", &[]),
    ("identifier 20201 is not a year", &[]),
    ("(2007)", &["2007"]),
    ("1900, 2099", &["1900", "2099"]),
    ("no dates here", &[]),
    ("version 12019", &[]),
    ("since 2012; updated 5 March 2014", &["2012", "2014-03-05"]),
];
