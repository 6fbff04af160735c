//! The sequential rebel decision process.
//!
//! Consumers are asked one at a time. Each one picks the product held by
//! the minority of her already-decided neighbors; on a tie (including no
//! decided neighbors at all) she picks `Y`. Undecided neighbors count for
//! neither side.

use std::fmt;

use crate::cut::{is_stable, Cut};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::nodeset::NodeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Y,
    N,
}

impl Decision {
    pub fn opposite(self) -> Decision {
        match self {
            Decision::Y => Decision::N,
            Decision::N => Decision::Y,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Decision::Y => 'Y',
            Decision::N => 'N',
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// The rebel rule over already-decided neighbors.
#[inline]
pub fn decide(y_neighbors: usize, n_neighbors: usize) -> Decision {
    if y_neighbors > n_neighbors {
        Decision::N
    } else {
        Decision::Y
    }
}

/// Same rule phrased on the signed balance `y - n`.
#[inline]
pub fn decide_balance(balance: i64) -> Decision {
    if balance > 0 {
        Decision::N
    } else {
        Decision::Y
    }
}

/// A total order of the nodes, kept together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    order: Vec<NodeId>,
    position: Vec<usize>,
}

impl Schedule {
    /// Fails unless `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<NodeId>) -> Result<Schedule> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::ScheduleMismatch(format!(
                    "node {v} out of range for {n} nodes"
                )));
            }
            if position[v] != usize::MAX {
                return Err(Error::ScheduleMismatch(format!("node {v} scheduled twice")));
            }
            position[v] = pos;
        }
        Ok(Schedule { order, position })
    }

    pub fn identity(n: usize) -> Schedule {
        Schedule {
            order: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn position(&self, v: NodeId) -> usize {
        self.position[v]
    }

    pub fn into_order(self) -> Vec<NodeId> {
        self.order
    }
}

/// An ordered prefix of a schedule together with the decisions it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSchedule {
    entries: Vec<(NodeId, Decision)>,
    scheduled: NodeSet,
}

impl PartialSchedule {
    pub fn new(n: usize) -> Self {
        PartialSchedule {
            entries: Vec::new(),
            scheduled: NodeSet::new(n),
        }
    }

    pub fn push(&mut self, v: NodeId, d: Decision) {
        let fresh = self.scheduled.insert(v);
        assert!(fresh, "node {v} already in partial schedule");
        self.entries.push((v, d));
    }

    pub fn entries(&self) -> &[(NodeId, Decision)] {
        &self.entries
    }

    pub fn scheduled(&self) -> &NodeSet {
        &self.scheduled
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, d: Decision) -> usize {
        self.entries.iter().filter(|e| e.1 == d).count()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// Replays the prefix with the rebel rule and compares decisions.
    pub fn replays_consistently(&self, graph: &Graph) -> bool {
        let mut dec: Vec<Option<Decision>> = vec![None; graph.n()];
        for &(v, d) in &self.entries {
            let (y, n) = decided_counts(graph, v, &dec);
            if decide(y, n) != d {
                return false;
            }
            dec[v] = Some(d);
        }
        true
    }
}

fn decided_counts(graph: &Graph, v: NodeId, dec: &[Option<Decision>]) -> (usize, usize) {
    let mut y = 0;
    let mut n = 0;
    for &u in graph.neighbors(v) {
        match dec[u] {
            Some(Decision::Y) => y += 1,
            Some(Decision::N) => n += 1,
            None => {}
        }
    }
    (y, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    decisions: Vec<Decision>,
    count_y: usize,
    count_n: usize,
}

impl Outcome {
    pub fn from_decisions(decisions: Vec<Decision>) -> Outcome {
        let count_y = decisions.iter().filter(|&&d| d == Decision::Y).count();
        let count_n = decisions.len() - count_y;
        Outcome {
            decisions,
            count_y,
            count_n,
        }
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn decision(&self, v: NodeId) -> Decision {
        self.decisions[v]
    }

    pub fn count_y(&self) -> usize {
        self.count_y
    }

    pub fn count_n(&self) -> usize {
        self.count_n
    }

    pub fn count(&self, d: Decision) -> usize {
        match d {
            Decision::Y => self.count_y,
            Decision::N => self.count_n,
        }
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }
}

/// Runs the decision process for a full schedule.
pub fn simulate(graph: &Graph, schedule: &Schedule) -> Result<Outcome> {
    if schedule.len() != graph.n() {
        return Err(Error::ScheduleMismatch(format!(
            "schedule has {} nodes, graph has {}",
            schedule.len(),
            graph.n()
        )));
    }
    let prefix = simulate_prefix(graph, schedule.order());
    let mut decisions = vec![Decision::Y; graph.n()];
    for (&v, &d) in schedule.order().iter().zip(&prefix) {
        decisions[v] = d;
    }
    Ok(Outcome::from_decisions(decisions))
}

/// Decisions of the nodes in `prefix`, aligned with `prefix`.
pub fn simulate_prefix(graph: &Graph, prefix: &[NodeId]) -> Vec<Decision> {
    let mut dec: Vec<Option<Decision>> = vec![None; graph.n()];
    prefix
        .iter()
        .map(|&v| {
            let (y, n) = decided_counts(graph, v, &dec);
            let d = decide(y, n);
            dec[v] = Some(d);
            d
        })
        .collect()
}

/// `S1` = the `Y` deciders (leading set), `S2` = the `N` deciders.
pub fn associated_cut(graph: &Graph, outcome: &Outcome) -> Cut {
    let in_s1: Vec<bool> = outcome
        .decisions()
        .iter()
        .map(|&d| d == Decision::Y)
        .collect();
    Cut::from_membership(graph, &in_s1)
}

/// A schedule is regret-proof exactly when its associated cut is stable.
/// Returns the verdict and the nodes that would regret their choice.
pub fn is_regret_proof(graph: &Graph, schedule: &Schedule) -> Result<(bool, NodeSet)> {
    let outcome = simulate(graph, schedule)?;
    Ok(is_stable(graph, &associated_cut(graph, &outcome)))
}
