//! Deterministic graph generators used for test corpora and benchmarks.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub enum GraphKind {
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    /// `K_{1,n-1}` with center `0`.
    Star { n: usize },
    Grid { rows: usize, cols: usize },
    Gnp { n: usize, p: f64 },
    KTree { n: usize, k: usize },
    /// Random connected interval graph; interval lengths are drawn up to
    /// `max_len` on a unit line.
    Interval { n: usize, max_len: f64 },
}

impl GraphKind {
    /// Whether the kind depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, GraphKind::Gnp { .. } | GraphKind::KTree { .. } | GraphKind::Interval { .. })
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Path { n } => write!(f, "path:n={n}"),
            GraphKind::Cycle { n } => write!(f, "cycle:n={n}"),
            GraphKind::Complete { n } => write!(f, "complete:n={n}"),
            GraphKind::Star { n } => write!(f, "star:n={n}"),
            GraphKind::Grid { rows, cols } => write!(f, "grid:rows={rows},cols={cols}"),
            GraphKind::Gnp { n, p } => write!(f, "gnp:n={n},p={p}"),
            GraphKind::KTree { n, k } => write!(f, "k-tree:n={n},k={k}"),
            GraphKind::Interval { n, max_len } => write!(f, "interval:n={n},len={max_len}"),
        }
    }
}

/// Parses `kind:key=value,...`, e.g. `gnp:n=10,p=0.3` or `grid:rows=3,cols=3`.
impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::HashMap::new();
        for kv in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim(), v.trim());
        }
        let get = |key: &str| -> Result<&str> {
            params.get(key).copied().ok_or_else(|| Error::InvalidParams(format!("`{kind}` needs parameter `{key}`")))
        };
        let int = |key: &str| -> Result<usize> {
            get(key)?.parse().map_err(|_| Error::InvalidParams(format!("`{key}` must be a non-negative integer")))
        };
        let real = |key: &str| -> Result<f64> {
            get(key)?.parse().map_err(|_| Error::InvalidParams(format!("`{key}` must be a number")))
        };
        Ok(match kind {
            "path" => GraphKind::Path { n: int("n")? },
            "cycle" => GraphKind::Cycle { n: int("n")? },
            "complete" => GraphKind::Complete { n: int("n")? },
            "star" => GraphKind::Star { n: int("n")? },
            "grid" => GraphKind::Grid { rows: int("rows")?, cols: int("cols")? },
            "gnp" => GraphKind::Gnp { n: int("n")?, p: real("p")? },
            "k-tree" | "ktree" => GraphKind::KTree { n: int("n")?, k: int("k")? },
            "interval" => GraphKind::Interval {
                n: int("n")?,
                max_len: if params.contains_key("len") { real("len")? } else { 0.1 },
            },
            other => return Err(Error::InvalidParams(format!("unknown graph kind `{other}`"))),
        })
    }
}

pub fn gen_graph(kind: &GraphKind, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let n = match *kind {
        GraphKind::Path { n } => {
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParams("a cycle needs at least 3 vertices".into()));
            }
            edges.extend((0..n).map(|i| (i, (i + 1) % n)));
            n
        }
        GraphKind::Complete { n } => {
            for u in 0..n {
                edges.extend((u + 1..n).map(|v| (u, v)));
            }
            n
        }
        GraphKind::Star { n } => {
            edges.extend((1..n).map(|v| (0, v)));
            n
        }
        GraphKind::Grid { rows, cols } => {
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            rows * cols
        }
        GraphKind::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1]")));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            n
        }
        GraphKind::KTree { n, k } => {
            if n < k + 1 {
                return Err(Error::InvalidParams(format!("a {k}-tree needs at least {} vertices", k + 1)));
            }
            for u in 0..=k {
                edges.extend((u + 1..=k).map(|v| (u, v)));
            }
            // k-cliques available for attaching new vertices
            let mut cliques: Vec<Vec<usize>> = (0..=k)
                .map(|skip| (0..=k).filter(|&v| v != skip).collect())
                .collect();
            for v in k + 1..n {
                let base = cliques.choose(&mut rng).expect("at least one k-clique").clone();
                edges.extend(base.iter().map(|&u| (u, v)));
                for skip in 0..base.len() {
                    let mut c: Vec<usize> = base.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &u)| u).collect();
                    c.push(v);
                    cliques.push(c);
                }
            }
            n
        }
        GraphKind::Interval { n, max_len } => {
            if max_len <= 0.0 {
                return Err(Error::InvalidParams("interval length must be positive".into()));
            }
            let mut left: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            left.sort_by(f64::total_cmp);
            let intervals: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let len = rng.gen::<f64>() * max_len;
                    // reach the next left endpoint so the graph stays connected
                    let reach = if i + 1 < n { left[i + 1] - left[i] } else { 0.0 };
                    (left[i], left[i] + len.max(reach))
                })
                .collect();
            for u in 0..n {
                for v in u + 1..n {
                    if intervals[v].0 <= intervals[u].1 {
                        edges.push((u, v));
                    }
                }
            }
            n
        }
    };
    Graph::from_edges(n, &edges)
}
