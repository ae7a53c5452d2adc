use std::collections::HashMap;
use std::fmt::Write;

use super::EmbedError;

/// Trained vectors; `v` and `u` are row-major `nodes.len() × dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub nodes: Vec<String>,
    pub dims: usize,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    /// Mean loss per epoch; empty for tables read from disk.
    pub epoch_loss: Vec<f64>,
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

impl EmbeddingTable {
    pub fn vector(&self, i: usize) -> &[f64] {
        &self.v[i * self.dims..(i + 1) * self.dims]
    }

    pub fn index_of(&self, node: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == node)
    }

    /// Top-`k` nodes by cosine similarity of input vectors, self excluded;
    /// ties keep table order.
    pub fn similar(&self, node: &str, k: usize) -> Result<Vec<(String, f64)>, EmbedError> {
        self.similar_where(node, k, |_| true)
    }

    /// Like [`similar`](Self::similar) but only over nodes accepted by `keep`.
    pub fn similar_where(
        &self,
        node: &str,
        k: usize,
        keep: impl Fn(&str) -> bool,
    ) -> Result<Vec<(String, f64)>, EmbedError> {
        let i = self.index_of(node).ok_or_else(|| EmbedError::UnknownNode(node.to_string()))?;
        let x = self.vector(i);
        let mut scored: Vec<(usize, f64)> = (0..self.nodes.len())
            .filter(|&j| j != i && keep(&self.nodes[j]))
            .map(|j| (j, cosine(x, self.vector(j))))
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(scored.into_iter().take(k).map(|(j, s)| (self.nodes[j].clone(), s)).collect())
    }

    /// `N dims` header, then one `node v_1 … v_dims` line per node.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.nodes.len(), self.dims);
        for (i, n) in self.nodes.iter().enumerate() {
            out.push_str(n);
            for x in self.vector(i) {
                write!(out, " {x}").expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, EmbedError> {
        let bad = |line: usize, message: &str| EmbedError::Format { line, message: message.to_string() };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(1, "bad node count"))?;
        let dims: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(1, "bad dimension"))?;
        let mut nodes = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n * dims);
        let mut seen = HashMap::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            let name = fields.next().unwrap_or_default();
            if seen.insert(name.to_string(), i).is_some() {
                return Err(bad(i + 2, "duplicate node"));
            }
            let values: Vec<f64> = fields
                .map(|f| f.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(|| bad(i + 2, "bad number"))?;
            if values.len() != dims {
                return Err(bad(i + 2, "wrong dimension"));
            }
            nodes.push(name.to_string());
            v.extend(values);
        }
        if nodes.len() != n {
            return Err(bad(1, "node count does not match header"));
        }
        Ok(EmbeddingTable { nodes, dims, v, u: Vec::new(), epoch_loss: Vec::new() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> EmbeddingTable {
        EmbeddingTable {
            nodes: vec!["http://x/a".into(), "http://x/b".into(), "http://x/c".into(), "http://x/d".into()],
            dims: 2,
            v: vec![1.0, 0.0, 2.0, 0.0, 0.0, 1.0, 2.0, 0.0],
            u: vec![0.0; 8],
            epoch_loss: vec![],
        }
    }

    #[test]
    fn similar_orders_and_breaks_ties_by_index() {
        let t = table();
        let s = t.similar("http://x/a", 3).unwrap();
        assert_eq!(s[0], ("http://x/b".to_string(), 1.0));
        assert_eq!(s[1], ("http://x/d".to_string(), 1.0));
        assert_eq!(s[2].0, "http://x/c");
        assert!(t.similar("http://x/a", 0).unwrap().is_empty());
        assert!(matches!(t.similar("http://x/z", 1), Err(EmbedError::UnknownNode(_))));
    }

    #[test]
    fn cosine_of_self_is_one() {
        assert!((cosine(&[0.3, -2.0, 5.0], &[0.3, -2.0, 5.0]) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn text_roundtrip_is_exact() {
        let mut t = table();
        t.v[0] = 0.1 + 0.2;
        let back = EmbeddingTable::from_text(&t.to_text()).unwrap();
        assert_eq!(back.v, t.v);
        assert_eq!(back.nodes, t.nodes);
        assert!(EmbeddingTable::from_text("2 2\nx 1 2\n").is_err());
    }
}
