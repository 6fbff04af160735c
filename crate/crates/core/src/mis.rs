//! Independent sets: the greedy maximal one and an exact maximum solver.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;

/// Default node limit for [`exact_max_independent_set`].
pub const EXACT_MIS_LIMIT: usize = 60;

/// Scans ids ascending and keeps every node with no kept neighbor.
pub fn greedy_maximal_independent_set(graph: &Graph) -> NodeSet {
    let mut set = NodeSet::new(graph.n());
    for v in graph.nodes() {
        if graph.neighbors(v).iter().all(|&u| !set.contains(u)) {
            set.insert(v);
        }
    }
    set
}

/// True when `set` is independent and every node outside it has a neighbor inside.
pub fn is_maximal_independent(graph: &Graph, set: &NodeSet) -> bool {
    graph.is_independent(set)
        && graph
            .nodes()
            .all(|v| set.contains(v) || graph.neighbors(v).iter().any(|&u| set.contains(u)))
}

/// Maximum independent set with the default [`EXACT_MIS_LIMIT`].
pub fn exact_max_independent_set(graph: &Graph) -> Result<(NodeSet, usize)> {
    exact_max_independent_set_with_limit(graph, EXACT_MIS_LIMIT)
}

/// Branch and bound over 64-bit masks. `limit` may be raised up to 64.
pub fn exact_max_independent_set_with_limit(
    graph: &Graph,
    limit: usize,
) -> Result<(NodeSet, usize)> {
    let limit = limit.min(64);
    let n = graph.n();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let nbr: Vec<u64> = graph
        .nodes()
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut solver = Bnb {
        nbr: &nbr,
        best: 0,
        best_mask: 0,
    };
    // Seed the incumbent with the greedy answer so the bound bites early.
    let greedy = greedy_maximal_independent_set(graph);
    solver.best = greedy.len();
    solver.best_mask = greedy.iter().fold(0, |m, v| m | 1 << v);
    solver.search(all, 0, 0);
    let set = NodeSet::from_iter(n, (0..n).filter(|&v| solver.best_mask >> v & 1 == 1));
    Ok((set, solver.best))
}

struct Bnb<'a> {
    nbr: &'a [u64],
    best: usize,
    best_mask: u64,
}

impl Bnb<'_> {
    fn search(&mut self, mut pool: u64, mut chosen: u64, mut size: usize) {
        // Nodes of degree <= 1 inside the pool can always be taken.
        loop {
            let mut took = false;
            let mut rest = pool;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if pool >> v & 1 == 0 {
                    continue;
                }
                if (self.nbr[v] & pool).count_ones() <= 1 {
                    chosen |= 1 << v;
                    size += 1;
                    pool &= !(self.nbr[v] | 1 << v);
                    took = true;
                }
            }
            if !took {
                break;
            }
        }
        if pool == 0 {
            if size > self.best {
                self.best = size;
                self.best_mask = chosen;
            }
            return;
        }
        if size + self.clique_cover(pool) <= self.best {
            return;
        }
        let mut pivot = 0;
        let mut pivot_deg = 0;
        let mut rest = pool;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.nbr[v] & pool).count_ones();
            if d > pivot_deg {
                pivot_deg = d;
                pivot = v;
            }
        }
        self.search(
            pool & !(self.nbr[pivot] | 1 << pivot),
            chosen | 1 << pivot,
            size + 1,
        );
        self.search(pool & !(1 << pivot), chosen, size);
    }

    /// Number of cliques in a greedy clique cover of `pool`; an upper bound on alpha.
    fn clique_cover(&self, pool: u64) -> usize {
        let mut rest = pool;
        let mut count = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut cand = rest & self.nbr[v];
            while cand != 0 {
                let u = cand.trailing_zeros() as usize;
                clique |= 1 << u;
                cand &= self.nbr[u];
            }
            rest &= !clique;
            count += 1;
        }
        count
    }
}
