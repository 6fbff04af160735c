//! Exhaustive ground truth for small graphs.
//!
//! [`brute_force`] walks every schedule of up to nine nodes. [`exact_optimum`]
//! reaches further by memoizing on the scheduled set plus the decisions of
//! scheduled nodes that still have unscheduled neighbors; no other decision
//! can influence the rest of the process.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dynamics::{decide, is_regret_proof, simulate, Decision, Outcome, Schedule};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::schedulers::{alpha_if_small, Algorithm};

pub const BRUTE_FORCE_LIMIT: usize = 9;
pub const EXACT_SEARCH_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_y: usize,
    pub opt_n: usize,
    /// First schedule in lexicographic order reaching `opt_y`.
    pub argmax_y: Schedule,
    /// Outcome of `argmax_y` as replayed by the enumeration itself.
    pub argmax_y_outcome: Outcome,
    pub argmax_n: Schedule,
    pub argmax_n_outcome: Outcome,
    pub regret_proof_exists: bool,
    pub best_regret_proof_y: Option<usize>,
    pub best_regret_proof_n: Option<usize>,
    /// Complete schedules visited (pruned subtrees excluded).
    pub leaves: u64,
}

impl OracleResult {
    pub fn opt(&self, d: Decision) -> usize {
        match d {
            Decision::Y => self.opt_y,
            Decision::N => self.opt_n,
        }
    }
}

struct Enumeration<'g> {
    graph: &'g Graph,
    order: Vec<NodeId>,
    dec: Vec<Option<Decision>>,
    used: Vec<bool>,
    count_y: usize,
    best_y: Option<(usize, Vec<NodeId>, Vec<Decision>)>,
    best_n: Option<(usize, Vec<NodeId>, Vec<Decision>)>,
    rp_y: Option<usize>,
    rp_n: Option<usize>,
    leaves: u64,
}

impl Enumeration<'_> {
    fn stable(&self) -> bool {
        self.graph.nodes().all(|v| {
            let (mut y, mut n) = (0, 0);
            for &u in self.graph.neighbors(v) {
                match self.dec[u] {
                    Some(Decision::Y) => y += 1,
                    _ => n += 1,
                }
            }
            match self.dec[v] {
                Some(Decision::Y) => n >= y,
                _ => y > n,
            }
        })
    }

    fn worth_descending(&self, depth: usize) -> bool {
        let rest = self.graph.n() - depth;
        let y = self.count_y;
        let n = depth - y;
        let better = |best: Option<usize>, have: usize| best.is_none_or(|b| have + rest > b);
        better(self.best_y.as_ref().map(|b| b.0), y)
            || better(self.best_n.as_ref().map(|b| b.0), n)
            || better(self.rp_y, y)
            || better(self.rp_n, n)
    }

    fn leaf(&mut self) {
        self.leaves += 1;
        let n_nodes = self.graph.n();
        let y = self.count_y;
        let n = n_nodes - y;
        let snapshot = |e: &Self| {
            (
                e.order.clone(),
                e.dec
                    .iter()
                    .map(|d| d.expect("complete"))
                    .collect::<Vec<_>>(),
            )
        };
        if self.best_y.as_ref().is_none_or(|b| y > b.0) {
            let (o, d) = snapshot(self);
            self.best_y = Some((y, o, d));
        }
        if self.best_n.as_ref().is_none_or(|b| n > b.0) {
            let (o, d) = snapshot(self);
            self.best_n = Some((n, o, d));
        }
        if self.stable() {
            self.rp_y = Some(self.rp_y.map_or(y, |b| b.max(y)));
            self.rp_n = Some(self.rp_n.map_or(n, |b| b.max(n)));
        }
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.graph.n() {
            self.leaf();
            return;
        }
        if !self.worth_descending(depth) {
            return;
        }
        for v in self.graph.nodes() {
            if self.used[v] {
                continue;
            }
            let (mut y, mut n) = (0, 0);
            for &u in self.graph.neighbors(v) {
                match self.dec[u] {
                    Some(Decision::Y) => y += 1,
                    Some(Decision::N) => n += 1,
                    None => {}
                }
            }
            let d = decide(y, n);
            self.used[v] = true;
            self.dec[v] = Some(d);
            self.order.push(v);
            if d == Decision::Y {
                self.count_y += 1;
            }
            self.descend(depth + 1);
            if d == Decision::Y {
                self.count_y -= 1;
            }
            self.order.pop();
            self.dec[v] = None;
            self.used[v] = false;
        }
    }
}

/// Optimal counts over all `n!` schedules, `n <= 9`.
pub fn brute_force(graph: &Graph) -> Result<OracleResult> {
    let n = graph.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::Param("empty graph".into()));
    }
    let mut e = Enumeration {
        graph,
        order: Vec::with_capacity(n),
        dec: vec![None; n],
        used: vec![false; n],
        count_y: 0,
        best_y: None,
        best_n: None,
        rp_y: None,
        rp_n: None,
        leaves: 0,
    };
    e.descend(0);
    let (opt_y, oy, dy) = e.best_y.expect("at least one schedule");
    let (opt_n, on, dn) = e.best_n.expect("at least one schedule");
    Ok(OracleResult {
        opt_y,
        opt_n,
        argmax_y: Schedule::new(oy)?,
        argmax_y_outcome: Outcome::from_decisions(dy),
        argmax_n: Schedule::new(on)?,
        argmax_n_outcome: Outcome::from_decisions(dn),
        regret_proof_exists: e.rp_y.is_some(),
        best_regret_proof_y: e.rp_y,
        best_regret_proof_n: e.rp_n,
        leaves: e.leaves,
    })
}

struct Search<'g> {
    graph: &'g Graph,
    target: Decision,
    all: u64,
    nbr: Vec<u64>,
    preds: Vec<u64>,
    /// Earlier member of the same interchangeable class, if any.
    twin_prev: Vec<Option<NodeId>>,
    memo: HashMap<(u64, u64), u32>,
}

impl Search<'_> {
    fn ready(&self, v: NodeId, sched: u64) -> bool {
        sched >> v & 1 == 0
            && self.preds[v] & !sched == 0
            && self.twin_prev[v].is_none_or(|t| sched >> t & 1 == 1)
    }

    fn decision(&self, v: NodeId, sched: u64, ymask: u64) -> Decision {
        let y = (self.nbr[v] & ymask).count_ones() as usize;
        let n = (self.nbr[v] & sched & !ymask).count_ones() as usize;
        decide(y, n)
    }

    /// Schedules every ready node whose neighbors are all scheduled; their
    /// decisions are fixed and affect nobody still pending.
    fn settle(
        &self,
        mut sched: u64,
        mut ymask: u64,
        order: Option<&mut Vec<NodeId>>,
    ) -> (u64, u64, u32) {
        let mut gained = 0;
        let mut order = order;
        loop {
            let next =
                (0..self.graph.n()).find(|&v| self.ready(v, sched) && self.nbr[v] & !sched == 0);
            let Some(v) = next else { break };
            let d = self.decision(v, sched, ymask);
            sched |= 1 << v;
            if d == Decision::Y {
                ymask |= 1 << v;
            }
            gained += (d == self.target) as u32;
            if let Some(o) = order.as_deref_mut() {
                o.push(v);
            }
        }
        (sched, ymask, gained)
    }

    fn key(&self, sched: u64, ymask: u64) -> (u64, u64) {
        let boundary = (0..self.graph.n())
            .filter(|&v| sched >> v & 1 == 1 && self.nbr[v] & !sched != 0)
            .fold(0u64, |acc, v| acc | 1 << v);
        (sched, ymask & boundary)
    }

    fn value(&mut self, sched: u64, ymask: u64) -> Result<u32> {
        let (sched, ymask, gained) = self.settle(sched, ymask, None);
        if sched == self.all {
            return Ok(gained);
        }
        let key = self.key(sched, ymask);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(gained + v);
        }
        let mut best: Option<u32> = None;
        for v in 0..self.graph.n() {
            if !self.ready(v, sched) {
                continue;
            }
            let d = self.decision(v, sched, ymask);
            let ny = if d == Decision::Y {
                ymask | 1 << v
            } else {
                ymask
            };
            let val = (d == self.target) as u32 + self.value(sched | 1 << v, ny)?;
            best = Some(best.map_or(val, |b| b.max(val)));
        }
        let best =
            best.ok_or_else(|| Error::Param("precedence constraints contain a cycle".into()))?;
        self.memo.insert(key, best);
        Ok(gained + best)
    }

    fn reconstruct(&mut self) -> Result<Vec<NodeId>> {
        let mut order = Vec::with_capacity(self.graph.n());
        let (mut sched, mut ymask) = (0u64, 0u64);
        loop {
            let (s, y, _) = self.settle(sched, ymask, Some(&mut order));
            sched = s;
            ymask = y;
            if sched == self.all {
                return Ok(order);
            }
            let want = self.value(sched, ymask)?;
            let mut chosen = None;
            for v in 0..self.graph.n() {
                if !self.ready(v, sched) {
                    continue;
                }
                let d = self.decision(v, sched, ymask);
                let ny = if d == Decision::Y {
                    ymask | 1 << v
                } else {
                    ymask
                };
                if (d == self.target) as u32 + self.value(sched | 1 << v, ny)? == want {
                    chosen = Some((v, ny));
                    break;
                }
            }
            let (v, ny) =
                chosen.ok_or_else(|| Error::Invariant("optimum not reproducible".into()))?;
            order.push(v);
            sched |= 1 << v;
            ymask = ny;
        }
    }
}

/// Maximum number of `target` decisions over all schedules, with one
/// schedule attaining it. Works up to 64 nodes when the memo stays small:
/// interchangeable nodes (same neighbors, same constraints) are tried in
/// one fixed order only.
pub fn exact_optimum(graph: &Graph, target: Decision) -> Result<(usize, Schedule)> {
    exact_optimum_with_precedence(graph, target, &[])
}

/// As [`exact_optimum`], restricted to schedules placing `before` ahead of
/// `after` for every listed pair.
pub fn exact_optimum_with_precedence(
    graph: &Graph,
    target: Decision,
    precedence: &[(NodeId, NodeId)],
) -> Result<(usize, Schedule)> {
    let n = graph.n();
    if n > EXACT_SEARCH_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_SEARCH_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::Param("empty graph".into()));
    }
    let nbr: Vec<u64> = graph
        .nodes()
        .map(|v| graph.neighbors(v).iter().fold(0u64, |a, &u| a | 1 << u))
        .collect();
    let mut preds = vec![0u64; n];
    let mut succs = vec![0u64; n];
    for &(a, b) in precedence {
        if a >= n || b >= n || a == b {
            return Err(Error::Param(format!("bad precedence pair ({a}, {b})")));
        }
        preds[b] |= 1 << a;
        succs[a] |= 1 << b;
    }
    let mut last_in_class: HashMap<(u64, u64, u64), NodeId> = HashMap::new();
    let twin_prev = (0..n)
        .map(|v| last_in_class.insert((nbr[v], preds[v], succs[v]), v))
        .collect();
    let mut s = Search {
        graph,
        target,
        all: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        nbr,
        preds,
        twin_prev,
        memo: HashMap::new(),
    };
    let best = s.value(0, 0)? as usize;
    let order = s.reconstruct()?;
    Ok((best, Schedule::new(order)?))
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub algorithm: String,
    pub claim: String,
    pub value: Option<usize>,
    pub required: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub n: usize,
    pub m: usize,
    pub alpha: Option<usize>,
    pub oracle: Option<(usize, usize)>,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,claim,value,required,passed,detail\n");
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                e.algorithm,
                e.claim,
                opt(e.value),
                opt(e.required),
                e.passed,
                e.detail.replace(',', ";")
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("graph: n={} m={}", self.n, self.m);
        if let Some(a) = self.alpha {
            let _ = write!(out, " alpha={a}");
        }
        if let Some((y, n)) = self.oracle {
            let _ = write!(out, " optY={y} optN={n}");
        }
        out.push('\n');
        for e in &self.entries {
            let verdict = if e.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{verdict} {:<6} {:<18}", e.algorithm, e.claim);
            if let Some(v) = e.value {
                let _ = write!(out, " value={v}");
            }
            if let Some(r) = e.required {
                let _ = write!(out, " required={r}");
            }
            if !e.detail.is_empty() {
                let _ = write!(out, " ({})", e.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn entry(
    algorithm: &str,
    claim: &str,
    value: Option<usize>,
    required: Option<usize>,
    passed: bool,
    detail: String,
) -> AuditEntry {
    AuditEntry {
        algorithm: algorithm.to_string(),
        claim: claim.to_string(),
        value,
        required,
        passed,
        detail,
    }
}

/// Runs every scheduler and checks its guarantee; adds oracle dominance and
/// equilibrium existence when `n <= 9`.
pub fn audit(graph: &Graph) -> AuditReport {
    let n = graph.n();
    let alpha = alpha_if_small(graph);
    let oracle = if n <= BRUTE_FORCE_LIMIT {
        brute_force(graph).ok()
    } else {
        None
    };
    let mut entries = Vec::new();
    for alg in Algorithm::ALL {
        let name = alg.name();
        let schedule = match alg.run(graph) {
            Ok(s) => s,
            Err(e) => {
                entries.push(entry(name, "runs", None, None, false, e.to_string()));
                continue;
            }
        };
        let outcome = match simulate(graph, &schedule) {
            Ok(o) => o,
            Err(e) => {
                entries.push(entry(name, "runs", None, None, false, e.to_string()));
                continue;
            }
        };
        let count = outcome.count(alg.objective());
        let required = alg.required(n, alpha);
        let detail = match (alg, alpha) {
            (Algorithm::Alg5, None) => "alpha unknown; sqrt term only".to_string(),
            _ => String::new(),
        };
        entries.push(entry(
            name,
            &format!("bound_{}", alg.objective().as_char()),
            Some(count),
            Some(required),
            count >= required,
            detail,
        ));
        if alg.claims_regret_proof() {
            let (ok, bad) = is_regret_proof(graph, &schedule)
                .unwrap_or_else(|_| (false, crate::nodeset::NodeSet::new(0)));
            let detail = if ok {
                String::new()
            } else {
                format!("regretting nodes {:?}", bad.to_vec())
            };
            entries.push(entry(name, "regret_proof", None, None, ok, detail));
        }
        if let Some(o) = &oracle {
            let opt = o.opt(alg.objective());
            entries.push(entry(
                name,
                "oracle_dominance",
                Some(count),
                Some(opt),
                count <= opt,
                String::new(),
            ));
        }
    }
    if let Some(o) = &oracle {
        entries.push(entry(
            "oracle",
            "regret_proof_exists",
            o.best_regret_proof_y,
            None,
            o.regret_proof_exists,
            String::new(),
        ));
    }
    AuditReport {
        n,
        m: graph.m(),
        alpha,
        oracle: oracle.map(|o| (o.opt_y, o.opt_n)),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, path, random_connected, star, triangle_chain};

    #[test]
    fn brute_force_examples() {
        let r = brute_force(&complete(4).unwrap()).unwrap();
        assert_eq!((r.opt_y, r.opt_n), (2, 2));
        assert!(r.regret_proof_exists);

        let r = brute_force(&star(4).unwrap()).unwrap();
        assert_eq!((r.opt_y, r.opt_n), (3, 3));
        assert_eq!(r.argmax_n.order()[0], 0);

        let r = brute_force(&path(2).unwrap()).unwrap();
        assert_eq!((r.opt_y, r.opt_n), (1, 1));
        assert_eq!(r.argmax_y.order(), &[0, 1]);

        assert_eq!(brute_force(&star(9).unwrap()).unwrap().opt_y, 8);
        assert!(brute_force(&star(10).unwrap()).is_err());
    }

    #[test]
    fn argmax_outcomes_replay() {
        let g = triangle_chain(2).unwrap();
        let r = brute_force(&g).unwrap();
        assert_eq!(simulate(&g, &r.argmax_y).unwrap(), r.argmax_y_outcome);
        assert_eq!(simulate(&g, &r.argmax_n).unwrap(), r.argmax_n_outcome);
        assert_eq!(r.argmax_y_outcome.count_y(), r.opt_y);
    }

    #[test]
    fn exact_matches_brute_force() {
        for seed in 0..40u64 {
            let n = 2 + (seed as usize % 7);
            let g = crate::generate::connected_for_test(n, 0.35, seed);
            let r = brute_force(&g).unwrap();
            for d in [Decision::Y, Decision::N] {
                let (best, s) = exact_optimum(&g, d).unwrap();
                assert_eq!(best, r.opt(d), "seed {seed} {d}");
                assert_eq!(simulate(&g, &s).unwrap().count(d), best);
            }
        }
    }

    #[test]
    fn exact_handles_pendant_heavy_graphs() {
        let h = complete(5).unwrap();
        let inst = crate::reductions::mis_to_rebel(&h).unwrap();
        let (best, s) = exact_optimum(&inst.graph, Decision::Y).unwrap();
        assert_eq!(best, 2 * 10 + 1);
        assert_eq!(simulate(&inst.graph, &s).unwrap().count_y(), best);
    }

    #[test]
    fn precedence_is_respected() {
        let g = path(3).unwrap();
        let (best, s) = exact_optimum_with_precedence(&g, Decision::Y, &[(1, 0), (1, 2)]).unwrap();
        assert_eq!(s.order()[0], 1);
        assert_eq!(best, 1);
        assert!(exact_optimum_with_precedence(&g, Decision::Y, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn audit_examples() {
        let r = audit(&triangle_chain(2).unwrap());
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.oracle.is_some());
        let r = audit(&random_connected(50, 0.1, 7).unwrap());
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.oracle.is_none());
        let r = audit(&star(9).unwrap());
        assert_eq!(r.oracle.unwrap().0, 8);
        assert!(r.to_csv().starts_with("algorithm,claim"));
        assert!(r.to_text().contains("overall: PASS"));
    }
}
