//! Layered domination peeling and the `n/3` guarantee for `N`.
//!
//! Starting from a maximal independent set `X` (with `Y = V \ X`), the
//! peeling repeatedly discards `Y`-nodes that are not needed to dominate
//! `X`, then strips the `X`-nodes that became pendant. This yields layers
//! `X_1..X_l` and `Y_0..Y_l` such that, inside
//! `G_i = G[union over j >= i of X_j and Y_j]`, every node of `X_i` is
//! pendant and every node of `Y_i` touches `X_i`.
//!
//! The mirror construction is then run layer by layer from `l` down to 0,
//! which forces every node outside `A` into `Y_0`.

use std::collections::BTreeSet;

use crate::dynamics::{Decision, Schedule};
use crate::error::{Error, Result};
use crate::graph::{require_valid, Graph, NodeId};
use crate::mirror::{MirrorBuilder, MirrorPair};
use crate::mis::{greedy_maximal_independent_set, is_maximal_independent};
use crate::nodeset::NodeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayerSide {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelingDecomposition {
    /// Index of the last layer (`l`).
    pub depth: usize,
    /// `x_layers[0]` is always empty.
    pub x_layers: Vec<NodeSet>,
    pub y_layers: Vec<NodeSet>,
    pub base_x: NodeSet,
    pub layer_of: Vec<(usize, LayerSide)>,
}

impl PeelingDecomposition {
    /// Node set of `G_i`.
    pub fn subgraph_nodes(&self, i: usize) -> NodeSet {
        let n = self.base_x.capacity();
        NodeSet::from_iter(n, (0..n).filter(|&v| self.layer_of[v].0 >= i))
    }

    /// Partition and layer-pendancy checks; returns a description of the first failure.
    pub fn check(&self, graph: &Graph) -> std::result::Result<(), String> {
        let n = graph.n();
        let mut seen = vec![0u32; n];
        for (i, layer) in self.x_layers.iter().enumerate() {
            if i == 0 && !layer.is_empty() {
                return Err("X_0 must be empty".into());
            }
            for v in layer.iter() {
                seen[v] += 1;
                if !self.base_x.contains(v) || self.layer_of[v] != (i, LayerSide::X) {
                    return Err(format!("node {v} misfiled in X_{i}"));
                }
            }
        }
        for (i, layer) in self.y_layers.iter().enumerate() {
            for v in layer.iter() {
                seen[v] += 1;
                if self.base_x.contains(v) || self.layer_of[v] != (i, LayerSide::Y) {
                    return Err(format!("node {v} misfiled in Y_{i}"));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&c| c != 1) {
            return Err(format!("node {v} appears {} times", seen[v]));
        }
        for i in 1..=self.depth {
            let gi = self.subgraph_nodes(i);
            for x in self.x_layers[i].iter() {
                if graph.degree_into(x, &gi) != 1 {
                    return Err(format!("X-node {x} not pendant in G_{i}"));
                }
            }
            for y in self.y_layers[i].iter() {
                if !graph
                    .neighbors(y)
                    .iter()
                    .any(|&u| self.x_layers[i].contains(u))
                {
                    return Err(format!("Y-node {y} has no neighbor in X_{i}"));
                }
            }
        }
        Ok(())
    }
}

/// Critical-node peeling in O(m log n).
///
/// A `Y`-node is critical while it is the only remaining neighbor of some
/// `X`-node. Non-critical `Y`-nodes are removed lowest id first.
pub fn peel(graph: &Graph, x: &NodeSet) -> Result<PeelingDecomposition> {
    if !is_maximal_independent(graph, x) {
        return Err(Error::Param(
            "peeling needs a maximal independent set".into(),
        ));
    }
    let n = graph.n();
    let mut alive = NodeSet::full(n);
    let mut deg: Vec<usize> = graph.nodes().map(|v| graph.degree(v)).collect();
    // For Y-nodes: number of pendant X-neighbors still alive.
    let mut pendant_nbrs = vec![0usize; n];
    let mut non_critical: BTreeSet<NodeId> = BTreeSet::new();
    let mut pendant_x: BTreeSet<NodeId> = BTreeSet::new();
    let mut x_left = x.len();

    let sole_neighbor = |alive: &NodeSet, v: NodeId| -> NodeId {
        *graph
            .neighbors(v)
            .iter()
            .find(|&&u| alive.contains(u))
            .expect("pendant node has a live neighbor")
    };

    for v in x.iter() {
        if deg[v] == 1 {
            pendant_x.insert(v);
            pendant_nbrs[graph.neighbors(v)[0]] += 1;
        }
    }
    for v in graph.nodes().filter(|&v| !x.contains(v)) {
        if pendant_nbrs[v] == 0 {
            non_critical.insert(v);
        }
    }

    let mut x_layers = vec![NodeSet::new(n)];
    let mut y_layers = Vec::new();
    let mut layer_of = vec![(0, LayerSide::Y); n];
    let mut stage = 0;
    loop {
        let mut y_stage = NodeSet::new(n);
        while let Some(v) = non_critical.pop_first() {
            y_stage.insert(v);
            layer_of[v] = (stage, LayerSide::Y);
            alive.remove(v);
            for &u in graph.neighbors(v) {
                if !alive.contains(u) || !x.contains(u) {
                    continue;
                }
                deg[u] -= 1;
                debug_assert!(deg[u] >= 1, "X-node {u} lost its last dominator");
                if deg[u] == 1 {
                    pendant_x.insert(u);
                    let w = sole_neighbor(&alive, u);
                    pendant_nbrs[w] += 1;
                    non_critical.remove(&w);
                }
            }
        }
        y_layers.push(y_stage);
        if x_left == 0 {
            break;
        }
        // Every live Y-node is critical now, so at least one X-node is pendant.
        let mut x_stage = NodeSet::new(n);
        let stripped: Vec<NodeId> = std::mem::take(&mut pendant_x).into_iter().collect();
        debug_assert!(!stripped.is_empty());
        for &u in &stripped {
            let w = sole_neighbor(&alive, u);
            x_stage.insert(u);
            layer_of[u] = (stage + 1, LayerSide::X);
            x_left -= 1;
            pendant_nbrs[w] -= 1;
            if pendant_nbrs[w] == 0 {
                non_critical.insert(w);
            }
        }
        for &u in &stripped {
            alive.remove(u);
        }
        x_layers.push(x_stage);
        stage += 1;
    }
    let decomp = PeelingDecomposition {
        depth: stage,
        x_layers,
        y_layers,
        base_x: x.clone(),
        layer_of,
    };
    debug_assert_eq!(decomp.check(graph), Ok(()));
    Ok(decomp)
}

/// Layered mirror construction; returns the pair and `A`.
pub fn run_algorithm2(graph: &Graph, decomp: &PeelingDecomposition) -> (MirrorPair, NodeSet) {
    let mut b = MirrorBuilder::new(graph);
    for i in (0..=decomp.depth).rev() {
        let layer: Vec<NodeId> = decomp.x_layers[i]
            .iter()
            .chain(decomp.y_layers[i].iter())
            .collect();
        b.activate(layer.iter().copied());
        let mut layer_sorted = layer;
        layer_sorted.sort_unstable();
        loop {
            while let Some(&w) = layer_sorted.iter().find(|&&w| b.is_unbalanced(w)) {
                b.schedule_node(w);
            }
            match b.find_free_edge() {
                Some((u, v)) => b.schedule_edge(u, v),
                None => break,
            }
        }
    }
    let pair = b.finish();
    let a = pair.a.clone();
    debug_assert!(pair.mirror_property_holds());
    (pair, a)
}

/// Schedule with at least `n/3` decisions of `N`.
pub fn schedule_n(graph: &Graph) -> Result<Schedule> {
    require_valid(graph)?;
    let x = greedy_maximal_independent_set(graph);
    let decomp = peel(graph, &x)?;
    Ok(schedule_n_with(graph, &decomp))
}

/// Assembles the `N` schedule for a given decomposition.
pub fn schedule_n_with(graph: &Graph, decomp: &PeelingDecomposition) -> Schedule {
    let n = graph.n();
    let (pair, a) = run_algorithm2(graph, decomp);
    let order: Vec<NodeId> = if 3 * a.len() > 2 * n {
        let chosen = pair.richer(Decision::N);
        chosen
            .nodes()
            .chain(graph.nodes().filter(|&v| !a.contains(v)))
            .collect()
    } else {
        let x = &decomp.base_x;
        x.iter()
            .chain(graph.nodes().filter(|&v| !a.contains(v)))
            .chain(graph.nodes().filter(|&v| a.contains(v) && !x.contains(v)))
            .collect()
    };
    Schedule::new(order).expect("branches cover every node once")
}
