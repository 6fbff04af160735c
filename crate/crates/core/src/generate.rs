//! Deterministic graph families.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Attempts made by [`random_connected`] before giving up.
pub const RANDOM_CONNECTED_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    Star { n: usize },
    Complete { n: usize },
    TriangleChain { k: usize },
    Wheel { n: usize },
    Path { n: usize },
    RandomConnected { n: usize, p: f64, seed: u64 },
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match *self {
            GraphSpec::Star { n } => star(n),
            GraphSpec::Complete { n } => complete(n),
            GraphSpec::TriangleChain { k } => triangle_chain(k),
            GraphSpec::Wheel { n } => wheel(n),
            GraphSpec::Path { n } => path(n),
            GraphSpec::RandomConnected { n, p, seed } => random_connected(n, p, seed),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            GraphSpec::RandomConnected { seed, .. } => Some(seed),
            _ => None,
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphSpec::Star { n } => write!(f, "star({n})"),
            GraphSpec::Complete { n } => write!(f, "complete({n})"),
            GraphSpec::TriangleChain { k } => write!(f, "triangle_chain({k})"),
            GraphSpec::Wheel { n } => write!(f, "wheel({n})"),
            GraphSpec::Path { n } => write!(f, "path({n})"),
            GraphSpec::RandomConnected { n, p, seed } => {
                write!(f, "random_connected({n};{p};{seed})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Star,
    Complete,
    TriangleChain,
    Wheel,
    Path,
    Random,
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "star" => GeneratorKind::Star,
            "complete" => GeneratorKind::Complete,
            "triangle-chain" | "triangle_chain" => GeneratorKind::TriangleChain,
            "wheel" => GeneratorKind::Wheel,
            "path" => GeneratorKind::Path,
            "random" | "random-connected" | "random_connected" => GeneratorKind::Random,
            other => return Err(Error::Param(format!("unknown generator '{other}'"))),
        })
    }
}

fn need(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Param(msg.into()))
    }
}

/// Center 0, leaves `1..n`.
pub fn star(n: usize) -> Result<Graph> {
    need(n >= 2, format!("star needs n >= 2, got {n}"))?;
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    need(n >= 2, format!("complete needs n >= 2, got {n}"))?;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges)
}

pub fn path(n: usize) -> Result<Graph> {
    need(n >= 2, format!("path needs n >= 2, got {n}"))?;
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges)
}

/// Hub 0 joined to every node of the rim cycle `1..n`.
pub fn wheel(n: usize) -> Result<Graph> {
    need(n >= 4, format!("wheel needs n >= 4, got {n}"))?;
    let mut edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    for v in 1..n {
        let next = if v + 1 == n { 1 } else { v + 1 };
        edges.push((v.min(next), v.max(next)));
    }
    Graph::from_edges(n, &edges)
}

/// `k` triangles `{3i, 3i+1, 3i+2}` linked by the path `3i+2 -- 3i+5`.
///
/// For `k >= 2` every triangle has exactly two nodes of degree two.
pub fn triangle_chain(k: usize) -> Result<Graph> {
    need(k >= 1, "triangle_chain needs k >= 1")?;
    let mut edges = Vec::with_capacity(4 * k);
    for i in 0..k {
        let (a, b, c) = (3 * i, 3 * i + 1, 3 * i + 2);
        edges.extend([(a, b), (a, c), (b, c)]);
        if i + 1 < k {
            edges.push((c, c + 3));
        }
    }
    Graph::from_edges(3 * k, &edges)
}

/// Erdos-Renyi `G(n, p)` resampled from a single seeded stream until connected.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    need(n >= 2, format!("random_connected needs n >= 2, got {n}"))?;
    need(
        p > 0.0 && p <= 1.0,
        format!("edge probability must lie in (0, 1], got {p}"),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_CONNECTED_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Param(format!(
        "no connected G({n}, {p}) within {RANDOM_CONNECTED_ATTEMPTS} attempts from seed {seed}"
    )))
}

/// Connected random graph for property tests: raises `p` until generation
/// succeeds, so low densities on small `n` still yield a graph.
#[cfg(test)]
pub(crate) fn connected_for_test(n: usize, p: f64, seed: u64) -> Graph {
    let mut p = p;
    loop {
        if let Ok(g) = random_connected(n, p, seed) {
            return g;
        }
        p = (p * 1.5).min(1.0);
    }
}
