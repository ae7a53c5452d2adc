use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EmbedError, EmbeddingTable, WalkCorpus};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgnsConfig {
    pub dims: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for SgnsConfig {
    fn default() -> Self {
        SgnsConfig { dims: 32, negatives: 5, epochs: 5, alpha: 0.025, seed: 7 }
    }
}

impl SgnsConfig {
    pub fn validate(&self) -> Result<(), EmbedError> {
        if self.dims < 2 || self.negatives == 0 || self.epochs == 0 {
            return Err(EmbedError::Config("need dims >= 2, negatives >= 1, epochs >= 1".into()));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(EmbedError::Config("alpha must be positive".into()));
        }
        Ok(())
    }
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// −ln σ(x), computed without overflow for large |x|.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Loss of one (center, context, negatives) sample.
pub fn sgns_loss(v_c: &[f64], u_o: &[f64], u_neg: &[&[f64]]) -> f64 {
    neg_log_sigmoid(dot(u_o, v_c)) + u_neg.iter().map(|u| neg_log_sigmoid(-dot(u, v_c))).sum::<f64>()
}

/// Partial derivatives of [`sgns_loss`].
#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradients {
    pub loss: f64,
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn sgns_gradients(v_c: &[f64], u_o: &[f64], u_neg: &[&[f64]]) -> SgnsGradients {
    // σ(x) - 1 written as -σ(-x) to avoid cancellation for large x
    let g_o = -sigmoid(-dot(u_o, v_c));
    let mut center: Vec<f64> = u_o.iter().map(|x| g_o * x).collect();
    let mut negatives = Vec::with_capacity(u_neg.len());
    for u in u_neg {
        let g = sigmoid(dot(u, v_c));
        for (c, x) in center.iter_mut().zip(u.iter()) {
            *c += g * x;
        }
        negatives.push(v_c.iter().map(|x| g * x).collect());
    }
    SgnsGradients {
        loss: sgns_loss(v_c, u_o, u_neg),
        center,
        context: v_c.iter().map(|x| g_o * x).collect(),
        negatives,
    }
}

/// One SGD step at rate `alpha`. All gradients are taken at the incoming
/// values and applied together. Returns the loss before the update.
pub fn sgns_step(v_c: &mut [f64], u_o: &mut [f64], u_neg: &mut [Vec<f64>], alpha: f64) -> f64 {
    let negs: Vec<&[f64]> = u_neg.iter().map(Vec::as_slice).collect();
    let g = sgns_gradients(v_c, u_o, &negs);
    for (x, d) in v_c.iter_mut().zip(&g.center) {
        *x -= alpha * d;
    }
    for (x, d) in u_o.iter_mut().zip(&g.context) {
        *x -= alpha * d;
    }
    for (u, gn) in u_neg.iter_mut().zip(&g.negatives) {
        for (x, d) in u.iter_mut().zip(gn) {
            *x -= alpha * d;
        }
    }
    g.loss
}

/// Skip-gram with negative sampling over the walk corpus, using the corpus window.
pub fn train(corpus: &WalkCorpus, config: &SgnsConfig) -> Result<EmbeddingTable, EmbedError> {
    config.validate()?;
    let n = corpus.nodes.len();
    let mut freq = vec![0u64; n];
    for w in &corpus.walks {
        for &t in w {
            freq[t as usize] += 1;
        }
    }
    if freq.iter().all(|&f| f == 0) {
        return Err(EmbedError::EmptyVocabulary);
    }
    let weights: Vec<f64> = freq.iter().map(|&f| (f as f64).powf(0.75)).collect();
    let sampler = WeightedIndex::new(&weights).map_err(|e| EmbedError::Config(e.to_string()))?;
    let vocab_size = freq.iter().filter(|&&f| f > 0).count();

    let d = config.dims;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bound = 0.5 / d as f64;
    let mut v: Vec<f64> = (0..n * d).map(|_| rng.random_range(-bound..=bound)).collect();
    let mut u = vec![0.0; n * d];

    let mut pairs = Vec::new();
    for w in &corpus.walks {
        for (i, &c) in w.iter().enumerate() {
            let lo = i.saturating_sub(corpus.window.max(1));
            let hi = (i + corpus.window.max(1)).min(w.len() - 1);
            for (j, &o) in w.iter().enumerate().take(hi + 1).skip(lo) {
                if j != i {
                    pairs.push((c as usize, o as usize));
                }
            }
        }
    }
    let total = (pairs.len() * config.epochs).max(1) as f64;
    let floor = config.alpha / 100.0;
    let mut epoch_loss = Vec::with_capacity(config.epochs);
    let mut processed = 0usize;
    let mut negs: Vec<usize> = Vec::with_capacity(config.negatives);
    let mut grad_v = vec![0.0; d];

    for _ in 0..config.epochs {
        let mut sum = 0.0;
        for &(c, o) in &pairs {
            let alpha = config.alpha - (config.alpha - floor) * (processed as f64 / total);
            processed += 1;
            negs.clear();
            if vocab_size > 1 {
                while negs.len() < config.negatives {
                    let x = sampler.sample(&mut rng);
                    if x != o {
                        negs.push(x);
                    }
                }
            }
            let vc = &v[c * d..(c + 1) * d];
            let uo = &u[o * d..(o + 1) * d];
            let s_o = dot(uo, vc);
            let g_o = sigmoid(s_o) - 1.0;
            let mut loss = neg_log_sigmoid(s_o);
            for (gv, x) in grad_v.iter_mut().zip(uo) {
                *gv = g_o * x;
            }
            let mut neg_scales = Vec::with_capacity(negs.len());
            for &k in &negs {
                let uk = &u[k * d..(k + 1) * d];
                let s = dot(uk, vc);
                loss += neg_log_sigmoid(-s);
                let g = sigmoid(s);
                for (gv, x) in grad_v.iter_mut().zip(uk) {
                    *gv += g * x;
                }
                neg_scales.push(g);
            }
            // u updates use the pre-step v_c; copy it before v_c moves
            let vc_old: Vec<f64> = vc.to_vec();
            for (x, g) in v[c * d..(c + 1) * d].iter_mut().zip(&grad_v) {
                *x -= alpha * g;
            }
            for (x, vc) in u[o * d..(o + 1) * d].iter_mut().zip(&vc_old) {
                *x -= alpha * g_o * vc;
            }
            for (&k, &g) in negs.iter().zip(&neg_scales) {
                for (x, vc) in u[k * d..(k + 1) * d].iter_mut().zip(&vc_old) {
                    *x -= alpha * g * vc;
                }
            }
            sum += loss;
        }
        epoch_loss.push(if pairs.is_empty() { 0.0 } else { sum / pairs.len() as f64 });
    }

    Ok(EmbeddingTable {
        nodes: corpus.nodes.iter().map(|t| t.value().to_string()).collect(),
        dims: d,
        v,
        u,
        epoch_loss,
    })
}
