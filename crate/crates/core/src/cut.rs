//! Ordered link cuts `[S1, S2]`, their stability condition, and the move
//! system that drives any cut to a stable one.
//!
//! A cut is stable when every `S1` node has at least as many neighbors in
//! `S2` as in `S1`, and every `S2` node has strictly more neighbors in `S1`
//! than in `S2`. The asymmetry mirrors the tie rule: `S1` is the leading
//! (`Y`) side. Moving a violating node never shrinks the cut, and a move
//! out of `S1` strictly grows it, so cut size is a potential.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    S1,
    S2,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::S1 => Side::S2,
            Side::S2 => Side::S1,
        }
    }

    /// 1 or 2.
    pub fn index(self) -> u8 {
        match self {
            Side::S1 => 1,
            Side::S2 => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    side: Vec<Side>,
    size: usize,
    s1_count: usize,
}

impl Cut {
    pub fn from_sides(graph: &Graph, side: Vec<Side>) -> Cut {
        assert_eq!(side.len(), graph.n(), "cut must cover every node");
        let size = graph.edges().filter(|&(u, v)| side[u] != side[v]).count();
        let s1_count = side.iter().filter(|&&s| s == Side::S1).count();
        Cut {
            side,
            size,
            s1_count,
        }
    }

    pub fn from_membership(graph: &Graph, in_s1: &[bool]) -> Cut {
        let side = in_s1
            .iter()
            .map(|&b| if b { Side::S1 } else { Side::S2 })
            .collect();
        Cut::from_sides(graph, side)
    }

    pub fn from_s1(graph: &Graph, s1: &NodeSet) -> Cut {
        let side = graph
            .nodes()
            .map(|v| if s1.contains(v) { Side::S1 } else { Side::S2 })
            .collect();
        Cut::from_sides(graph, side)
    }

    pub fn uniform(graph: &Graph, side: Side) -> Cut {
        Cut::from_sides(graph, vec![side; graph.n()])
    }

    pub fn n(&self) -> usize {
        self.side.len()
    }

    #[inline]
    pub fn side(&self, v: NodeId) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    /// Number of edges crossing the cut.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn s1_count(&self) -> usize {
        self.s1_count
    }

    pub fn s2_count(&self) -> usize {
        self.side.len() - self.s1_count
    }

    pub fn s1(&self) -> NodeSet {
        self.members(Side::S1)
    }

    pub fn s2(&self) -> NodeSet {
        self.members(Side::S2)
    }

    pub fn members(&self, side: Side) -> NodeSet {
        NodeSet::from_iter(self.n(), (0..self.n()).filter(|&v| self.side[v] == side))
    }

    /// `[S1, S2] <- [S2, S1]`.
    pub fn swap(&mut self) {
        for s in &mut self.side {
            *s = s.other();
        }
        self.s1_count = self.side.len() - self.s1_count;
    }

    /// Neighbors of `v` on `side`.
    pub fn degree_to(&self, graph: &Graph, v: NodeId, side: Side) -> usize {
        graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.side[u] == side)
            .count()
    }
}

/// Per-node `(i(v), delta(v))` with `delta(v) = d_other(v) - d_own(v)`.
///
/// `v` violates stability iff `delta < 0` on side 1 or `delta <= 0` on side 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationIndex {
    side: Vec<Side>,
    delta: Vec<i64>,
}

impl ViolationIndex {
    #[inline]
    pub fn side(&self, v: NodeId) -> Side {
        self.side[v]
    }

    #[inline]
    pub fn delta(&self, v: NodeId) -> i64 {
        self.delta[v]
    }

    #[inline]
    pub fn is_violating(&self, v: NodeId) -> bool {
        match self.side[v] {
            Side::S1 => self.delta[v] < 0,
            Side::S2 => self.delta[v] <= 0,
        }
    }

    /// Lowest-id violating node, found by a linear scan.
    pub fn first_violator(&self) -> Option<NodeId> {
        (0..self.side.len()).find(|&v| self.is_violating(v))
    }

    pub fn violators(&self) -> NodeSet {
        NodeSet::from_iter(
            self.side.len(),
            (0..self.side.len()).filter(|&v| self.is_violating(v)),
        )
    }

    /// Relabels sides; `d_other - d_own` is unchanged.
    fn swap(&mut self) {
        for s in &mut self.side {
            *s = s.other();
        }
    }
}

/// O(m) construction of the index for `cut`.
pub fn build_index(graph: &Graph, cut: &Cut) -> ViolationIndex {
    let delta =
        graph
            .nodes()
            .map(|v| {
                let own = cut.side(v);
                graph.neighbors(v).iter().fold(0i64, |acc, &u| {
                    if cut.side(u) == own {
                        acc - 1
                    } else {
                        acc + 1
                    }
                })
            })
            .collect();
    ViolationIndex {
        side: cut.sides().to_vec(),
        delta,
    }
}

/// Checks the stability condition directly from neighbor counts.
pub fn is_stable(graph: &Graph, cut: &Cut) -> (bool, NodeSet) {
    let mut violators = NodeSet::new(graph.n());
    for v in graph.nodes() {
        let d1 = cut.degree_to(graph, v, Side::S1);
        let d2 = cut.degree_to(graph, v, Side::S2);
        let ok = match cut.side(v) {
            Side::S1 => d2 >= d1,
            Side::S2 => d1 > d2,
        };
        if !ok {
            violators.insert(v);
        }
    }
    (violators.is_empty(), violators)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveType {
    /// Out of `S1`; strictly grows the cut.
    Type1,
    /// Out of `S2`; never shrinks the cut.
    Type2,
}

impl MoveType {
    pub fn number(self) -> u8 {
        match self {
            MoveType::Type1 => 1,
            MoveType::Type2 => 2,
        }
    }
}

impl fmt::Display for MoveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub node: NodeId,
    pub kind: MoveType,
    pub cut_size_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveLog {
    pub moves: Vec<MoveRecord>,
    pub type1_count: usize,
    pub type2_count: usize,
    /// Side swaps performed by [`procedure2`].
    pub swaps: usize,
}

impl MoveLog {
    fn push(&mut self, rec: MoveRecord) {
        match rec.kind {
            MoveType::Type1 => self.type1_count += 1,
            MoveType::Type2 => self.type2_count += 1,
        }
        self.moves.push(rec);
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn extend(&mut self, other: MoveLog) {
        for rec in other.moves {
            self.push(rec);
        }
        self.swaps += other.swaps;
    }

    pub fn moved_nodes(&self) -> NodeSet {
        let cap = self.moves.iter().map(|r| r.node + 1).max().unwrap_or(0);
        NodeSet::from_iter(cap, self.moves.iter().map(|r| r.node))
    }
}

/// Moves violating node `v` to the other side, updating the cut and the
/// entries of `v` and its neighbors in the index.
///
/// # Panics
/// If `v` is not violating.
pub fn apply_move(
    graph: &Graph,
    cut: &mut Cut,
    index: &mut ViolationIndex,
    v: NodeId,
) -> MoveRecord {
    assert!(index.is_violating(v), "node {v} is not violating");
    debug_assert_eq!(index.side[v], cut.side[v]);
    let from = cut.side[v];
    let kind = match from {
        Side::S1 => MoveType::Type1,
        Side::S2 => MoveType::Type2,
    };
    // Crossing edges at v go from d_other to d_own, i.e. change by -delta.
    let gain = -index.delta[v];
    debug_assert!(gain >= 0);
    cut.size = (cut.size as i64 + gain) as usize;
    cut.side[v] = from.other();
    match from {
        Side::S1 => cut.s1_count -= 1,
        Side::S2 => cut.s1_count += 1,
    }
    index.side[v] = from.other();
    index.delta[v] = -index.delta[v];
    for &u in graph.neighbors(v) {
        if index.side[u] == from {
            index.delta[u] += 2;
        } else {
            index.delta[u] -= 2;
        }
    }
    MoveRecord {
        node: v,
        kind,
        cut_size_after: cut.size,
    }
}

/// Upper bound on moves tolerated before declaring non-termination.
pub fn move_cap(graph: &Graph) -> usize {
    4 * (graph.m() + 1) * (graph.n() + 1)
}

/// Moves lowest-id violating nodes until none is left.
pub fn stabilize(graph: &Graph, cut: Cut) -> Result<(Cut, MoveLog)> {
    stabilize_observed(graph, cut, |_, _, _| {})
}

/// [`stabilize`] with a hook called after every move.
pub fn stabilize_observed<F>(graph: &Graph, mut cut: Cut, mut observe: F) -> Result<(Cut, MoveLog)>
where
    F: FnMut(&Cut, &ViolationIndex, &MoveRecord),
{
    let mut index = build_index(graph, &cut);
    let mut log = MoveLog::default();
    run_moves(
        graph,
        &mut cut,
        &mut index,
        &mut log,
        move_cap(graph),
        &mut observe,
    )?;
    Ok((cut, log))
}

fn run_moves<F>(
    graph: &Graph,
    cut: &mut Cut,
    index: &mut ViolationIndex,
    log: &mut MoveLog,
    cap: usize,
    observe: &mut F,
) -> Result<()>
where
    F: FnMut(&Cut, &ViolationIndex, &MoveRecord),
{
    while let Some(v) = index.first_violator() {
        if log.len() >= cap {
            return Err(Error::IterationCap {
                cap,
                context: "cut stabilization",
            });
        }
        let rec = apply_move(graph, cut, index, v);
        observe(cut, index, &rec);
        log.push(rec);
    }
    Ok(())
}

/// Stable cut whose leading set holds at least half of the nodes:
/// repeat { swap if `|S1| < n/2`; move while violating } until `|S1| >= n/2`.
pub fn procedure2(graph: &Graph, mut cut: Cut) -> Result<(Cut, MoveLog)> {
    let n = graph.n();
    let cap = move_cap(graph);
    let mut index = build_index(graph, &cut);
    let mut log = MoveLog::default();
    loop {
        if 2 * cut.s1_count() < n {
            cut.swap();
            index.swap();
            log.swaps += 1;
        }
        run_moves(
            graph,
            &mut cut,
            &mut index,
            &mut log,
            cap,
            &mut |_, _, _| {},
        )?;
        if 2 * cut.s1_count() >= n {
            break;
        }
        if log.swaps > cap {
            return Err(Error::IterationCap {
                cap,
                context: "procedure2 swaps",
            });
        }
    }
    Ok((cut, log))
}
