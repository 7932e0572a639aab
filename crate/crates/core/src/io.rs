//! File formats: polynomial JSON and edge-list graphs.
//!
//! Polynomial JSON: `{"n": int, "d": int, "terms": [{"alpha": [int,...],
//! "coeff": float}, ...]}`. Duplicate alphas are summed on load; every
//! alpha must sum to d. Graphs are text edge lists, one `u v` pair per
//! line, 1-indexed.

use crate::error::{Error, Result};
use crate::lowerbound::Graph;
use crate::poly::{HomogPoly, MultiIndex};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub alpha: Vec<u32>,
    pub coeff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub d: u32,
    pub terms: Vec<PolyTermJson>,
}

impl PolyJson {
    pub fn from_poly(f: &HomogPoly<f64>) -> Self {
        PolyJson {
            n: f.n(),
            d: f.d(),
            terms: f
                .terms()
                .map(|(a, c)| PolyTermJson {
                    alpha: a.exps().to_vec(),
                    coeff: *c,
                })
                .collect(),
        }
    }

    pub fn into_poly(self) -> Result<HomogPoly<f64>> {
        if self.n < 1 || self.d < 1 {
            return Err(Error::InvalidInput(
                "polynomial file needs n >= 1 and d >= 1".into(),
            ));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if t.alpha.len() != self.n {
                return Err(Error::InvalidInput(format!(
                    "alpha length {} does not match n = {}",
                    t.alpha.len(),
                    self.n
                )));
            }
            let alpha = MultiIndex::new(t.alpha);
            if alpha.degree() != self.d {
                return Err(Error::InvalidInput(format!(
                    "alpha {:?} sums to {}, expected d = {}",
                    alpha.exps(),
                    alpha.degree(),
                    self.d
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            terms.push((alpha, t.coeff));
        }
        HomogPoly::from_terms(self.n, self.d, terms)
    }
}

pub fn load_poly(path: &std::path::Path) -> Result<HomogPoly<f64>> {
    let text = std::fs::read_to_string(path)?;
    let parsed: PolyJson = serde_json::from_str(&text)?;
    parsed.into_poly()
}

pub fn save_poly(f: &HomogPoly<f64>, path: &std::path::Path) -> Result<()> {
    let json = serde_json::to_string_pretty(&PolyJson::from_poly(f))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

/// Edge-list text, 1-indexed, one `u v` per line; blank lines and `#`
/// comments skipped.
pub fn graph_to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for &(a, b) in g.edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

pub fn parse_edge_list(n: usize, text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::InvalidInput(format!("line {}: expected 'u v'", lineno + 1)))?
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("line {}: bad vertex", lineno + 1)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if u == 0 || v == 0 {
            return Err(Error::InvalidInput(format!(
                "line {}: vertices are 1-indexed",
                lineno + 1
            )));
        }
        edges.push((u - 1, v - 1));
    }
    Graph::from_edges(n, edges)
}
