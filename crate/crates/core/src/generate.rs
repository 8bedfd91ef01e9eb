//! Deterministic graph families used by tests, benches and the CLI.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::edge_connectivity;

const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Grid,
    Prism,
    Barbell,
    RandomConnected,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Path,
        Family::Cycle,
        Family::Complete,
        Family::Grid,
        Family::Prism,
        Family::Barbell,
        Family::RandomConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Grid => "grid",
            Family::Prism => "prism",
            Family::Barbell => "barbell",
            Family::RandomConnected => "random_connected",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| Error::Input(format!("unknown graph family `{s}`")))
    }
}

/// Parameters for [`generate`]. Unused fields are ignored by a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    /// Grid shape; defaults to a square of side sqrt(n).
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    /// Edge probability for `random_connected`.
    pub p: f64,
    pub seed: u64,
    /// Keep drawing until the edge connectivity is at least this.
    pub min_connectivity: usize,
    /// Keep drawing until the edge connectivity is at most this.
    pub max_connectivity: Option<usize>,
}

impl GenParams {
    pub fn new(n: usize) -> Self {
        GenParams { n, rows: None, cols: None, p: 0.3, seed: 0, min_connectivity: 1, max_connectivity: None }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        GenParams { rows: Some(rows), cols: Some(cols), ..GenParams::new(rows * cols) }
    }

    pub fn connectivity(mut self, min: usize, max: Option<usize>) -> Self {
        self.min_connectivity = min;
        self.max_connectivity = max;
        self
    }
}

pub fn generate(family: Family, params: &GenParams) -> Result<Graph> {
    let n = params.n;
    let bad = |msg: &str| Err(Error::Generation(format!("{family}: {msg}")));
    let g = match family {
        Family::Path => {
            if n < 2 {
                return bad("n must be at least 2");
            }
            Graph::connected(n, (1..n).map(|i| (i - 1, i)))
        }
        Family::Cycle => {
            if n < 3 {
                return bad("n must be at least 3");
            }
            Graph::connected(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Complete => {
            if n < 2 {
                return bad("n must be at least 2");
            }
            Graph::connected(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Family::Grid => {
            let (rows, cols) = match (params.rows, params.cols) {
                (Some(r), Some(c)) => (r, c),
                _ => {
                    let side = (n as f64).sqrt().round() as usize;
                    if side * side != n {
                        return bad("n must be a perfect square unless rows and cols are given");
                    }
                    (side, side)
                }
            };
            if rows * cols < 2 {
                return bad("grid needs at least 2 vertices");
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::connected(rows * cols, edges)
        }
        Family::Prism => {
            if n < 6 || n % 2 != 0 {
                return bad("n must be even and at least 6");
            }
            let h = n / 2;
            let mut edges = Vec::new();
            for i in 0..h {
                edges.push((i, (i + 1) % h));
            }
            for i in 0..h {
                edges.push((h + i, h + (i + 1) % h));
            }
            for i in 0..h {
                edges.push((i, h + i));
            }
            Graph::connected(n, edges)
        }
        Family::Barbell => {
            if n < 6 || n % 2 != 0 {
                return bad("n must be even and at least 6");
            }
            let h = n / 2;
            let mut edges = Vec::new();
            for base in [0, h] {
                for u in 0..h {
                    for v in u + 1..h {
                        edges.push((base + u, base + v));
                    }
                }
            }
            edges.push((h - 1, h));
            Graph::connected(n, edges)
        }
        Family::RandomConnected => return random_connected(params),
    };
    g.map_err(|e| Error::Generation(format!("{family}: {e}")))
}

fn random_connected(params: &GenParams) -> Result<Graph> {
    let n = params.n;
    if n < 2 {
        return Err(Error::Generation("random_connected: n must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&params.p) || params.p == 0.0 {
        return Err(Error::Generation("random_connected: p must be in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..MAX_RETRIES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(params.p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges)?;
        if !g.is_connected() {
            continue;
        }
        let lambda = edge_connectivity(&g)?;
        if lambda < params.min_connectivity || params.max_connectivity.is_some_and(|m| lambda > m) {
            continue;
        }
        return Ok(g);
    }
    Err(Error::Generation(format!(
        "random_connected: no connected graph with n={n}, p={} and the requested connectivity after {MAX_RETRIES} draws",
        params.p
    )))
}

/// Relabels vertices by a seeded random permutation. Used to vary which vertex
/// ends up as the tree root in randomized tests.
pub fn shuffle_labels(g: &Graph, seed: u64) -> Graph {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Graph::new(g.n(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).expect("relabeling keeps the graph simple")
}
