//! Regret-proof schedules from stable cuts.
//!
//! Given a stable cut `[S1, S2]`, the greedy pass schedules `S1` nodes that
//! would decide `Y` and `S2` nodes that would decide `N`, as long as any
//! such node exists. If someone is left over, swapping the scheduled parts
//! `T1`, `T2` across the cut gives a strictly larger cut, and the process
//! restarts from it. When everybody is scheduled, the outcome's cut is the
//! stable cut itself, so no consumer regrets her choice.

use crate::cut::{procedure2, stabilize, Cut, MoveLog, Side};
use crate::dynamics::{decide, Decision, PartialSchedule, Schedule};
use crate::error::{Error, Result};
use crate::graph::{require_valid, Graph};
use crate::mis::greedy_maximal_independent_set;
use crate::nodeset::NodeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyPassResult {
    pub partial: PartialSchedule,
    /// Scheduled with `Y` (all inside `S1`).
    pub t1: NodeSet,
    /// Scheduled with `N` (all inside `S2`).
    pub t2: NodeSet,
    pub s1_rem: NodeSet,
    pub s2_rem: NodeSet,
}

impl GreedyPassResult {
    pub fn is_complete(&self) -> bool {
        self.s1_rem.is_empty() && self.s2_rem.is_empty()
    }

    /// `[S1' + T2, S2' + T1]`.
    pub fn recombined(&self, graph: &Graph) -> Cut {
        let in_s1: Vec<bool> = graph
            .nodes()
            .map(|v| self.s1_rem.contains(v) || self.t2.contains(v))
            .collect();
        Cut::from_membership(graph, &in_s1)
    }

    pub fn schedule(&self) -> Option<Schedule> {
        if !self.is_complete() {
            return None;
        }
        Some(Schedule::new(self.partial.nodes().collect()).expect("complete pass"))
    }
}

fn target(side: Side) -> Decision {
    match side {
        Side::S1 => Decision::Y,
        Side::S2 => Decision::N,
    }
}

/// Schedules, lowest id first and rescanning from the start after every
/// step, any unscheduled node whose decision would match its side.
pub fn greedy_pass(graph: &Graph, cut: &Cut) -> GreedyPassResult {
    let n = graph.n();
    let mut y = vec![0usize; n];
    let mut no = vec![0usize; n];
    let mut done = NodeSet::new(n);
    let mut partial = PartialSchedule::new(n);
    let mut t1 = NodeSet::new(n);
    let mut t2 = NodeSet::new(n);
    while let Some(v) =
        (0..n).find(|&v| !done.contains(v) && decide(y[v], no[v]) == target(cut.side(v)))
    {
        let d = target(cut.side(v));
        done.insert(v);
        partial.push(v, d);
        match d {
            Decision::Y => {
                t1.insert(v);
                for &u in graph.neighbors(v) {
                    y[u] += 1;
                }
            }
            Decision::N => {
                t2.insert(v);
                for &u in graph.neighbors(v) {
                    no[u] += 1;
                }
            }
        }
    }
    let s1_rem = NodeSet::from_iter(
        n,
        (0..n).filter(|&v| !done.contains(v) && cut.side(v) == Side::S1),
    );
    let s2_rem = NodeSet::from_iter(
        n,
        (0..n).filter(|&v| !done.contains(v) && cut.side(v) == Side::S2),
    );
    GreedyPassResult {
        partial,
        t1,
        t2,
        s1_rem,
        s2_rem,
    }
}

/// One row of the per-iteration trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationStats {
    pub iter: usize,
    pub cut_size: usize,
    pub s1: usize,
    pub s2: usize,
    pub moves_type1: usize,
    pub moves_type2: usize,
}

impl IterationStats {
    fn new(iter: usize, cut: &Cut, log: &MoveLog) -> Self {
        IterationStats {
            iter,
            cut_size: cut.size(),
            s1: cut.s1_count(),
            s2: cut.s2_count(),
            moves_type1: log.type1_count,
            moves_type2: log.type2_count,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Algorithm4Run {
    pub schedule: Schedule,
    pub final_cut: Cut,
    pub trace: Vec<IterationStats>,
    /// Sizes of the cuts handed to the stabilizing procedure, in order.
    pub input_sizes: Vec<usize>,
}

/// Default start cut: `S2` = greedy maximal independent set, `S1` = the rest.
pub fn default_initial_cut(graph: &Graph) -> Cut {
    let mis = greedy_maximal_independent_set(graph);
    Cut::from_s1(graph, &mis.complement())
}

/// Regret-proof schedule with at least `n/2` decisions of `Y`.
pub fn algorithm4(graph: &Graph, initial: Cut) -> Result<Schedule> {
    Ok(algorithm4_traced(graph, initial)?.schedule)
}

pub fn algorithm4_traced(graph: &Graph, initial: Cut) -> Result<Algorithm4Run> {
    require_valid(graph)?;
    let cap = graph.m() + 1;
    let mut input = initial;
    let mut prev: Option<usize> = None;
    let mut trace = Vec::new();
    let mut input_sizes = Vec::new();
    for iter in 0..cap {
        if let Some(p) = prev {
            if input.size() <= p {
                return Err(Error::Invariant(format!(
                    "recombined cut of size {} does not exceed previous stable cut of size {p}",
                    input.size()
                )));
            }
        }
        input_sizes.push(input.size());
        let (cut, log) = procedure2(graph, input)?;
        let pass = greedy_pass(graph, &cut);
        trace.push(IterationStats::new(iter, &cut, &log));
        if pass.s1_rem.is_empty() {
            let schedule = pass.schedule().ok_or_else(|| {
                Error::Invariant("S2 nodes left unscheduled on a stable cut".into())
            })?;
            return Ok(Algorithm4Run {
                schedule,
                final_cut: cut,
                trace,
                input_sizes,
            });
        }
        prev = Some(cut.size());
        input = pass.recombined(graph);
    }
    Err(Error::IterationCap {
        cap,
        context: "algorithm4 repeat loop",
    })
}

/// What one outer round of [`algorithm5`] produced.
#[derive(Clone, Debug)]
pub struct OuterRound {
    pub r: usize,
    pub s: usize,
    pub count_n: usize,
    pub final_cut: Cut,
    /// Moves of the last stabilization inside this round.
    pub last_moves: MoveLog,
    /// Cut right before that last stabilization.
    pub last_start: Cut,
}

#[derive(Clone, Debug)]
pub struct Algorithm5Run {
    pub schedule: Schedule,
    pub count_n: usize,
    pub rounds: Vec<OuterRound>,
    pub trace: Vec<IterationStats>,
}

/// Regret-proof schedule with at least `max(sqrt(n+1) - 1, (n - alpha)/2)`
/// decisions of `N`.
pub fn algorithm5(graph: &Graph) -> Result<Schedule> {
    Ok(algorithm5_traced(graph, default_initial_cut(graph))?.schedule)
}

pub fn algorithm5_traced(graph: &Graph, initial: Cut) -> Result<Algorithm5Run> {
    require_valid(graph)?;
    let cap = graph.m() + 2;
    let mut cut = initial;
    let mut s = 0;
    let mut best: Option<(usize, Schedule)> = None;
    let mut rounds = Vec::new();
    let mut trace = Vec::new();
    let mut iter = 0;
    for _ in 0..cap {
        let r = s;
        cut.swap();
        let mut inner = 0;
        let (schedule, last_moves, last_start) = loop {
            if inner == cap {
                return Err(Error::IterationCap {
                    cap,
                    context: "algorithm5 inner loop",
                });
            }
            inner += 1;
            let start = cut.clone();
            let (stable, log) = stabilize(graph, cut)?;
            cut = stable;
            let pass = greedy_pass(graph, &cut);
            trace.push(IterationStats::new(iter, &cut, &log));
            iter += 1;
            if pass.s1_rem.is_empty() {
                let schedule = pass.schedule().ok_or_else(|| {
                    Error::Invariant("S2 nodes left unscheduled on a stable cut".into())
                })?;
                break (schedule, log, start);
            }
            cut = pass.recombined(graph);
        };
        let count_n = cut.s2_count();
        if best.as_ref().is_none_or(|(k, _)| count_n > *k) {
            best = Some((count_n, schedule));
        }
        s = cut.size();
        rounds.push(OuterRound {
            r,
            s,
            count_n,
            final_cut: cut.clone(),
            last_moves,
            last_start,
        });
        if r == s {
            let (count_n, schedule) = best.expect("at least one round");
            return Ok(Algorithm5Run {
                schedule,
                count_n,
                rounds,
                trace,
            });
        }
    }
    Err(Error::IterationCap {
        cap,
        context: "algorithm5 outer loop",
    })
}

/// Smallest integer `k` with `k >= sqrt(n + 1) - 1`.
pub fn sqrt_bound(n: usize) -> usize {
    let target = n + 1;
    let mut k = 0usize;
    while (k + 1) * (k + 1) < target {
        k += 1;
    }
    k
}

/// Integer ceiling of `max(sqrt(n+1) - 1, (n - alpha)/2)`; the `alpha`
/// term is dropped when `alpha` is unknown.
pub fn algorithm5_bound(n: usize, alpha: Option<usize>) -> usize {
    let half = alpha.map_or(0, |a| (n - a).div_ceil(2));
    sqrt_bound(n).max(half)
}

/// Moved nodes of a log, as a set over `n` nodes.
pub fn moved_set(n: usize, log: &MoveLog) -> NodeSet {
    NodeSet::from_iter(n, log.moves.iter().map(|r| r.node))
}
