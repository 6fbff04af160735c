//! Instance generators for the two hardness constructions.
//!
//! `mis_to_rebel` hangs `d(u)` pendant nodes off every node `u` of a graph
//! `H`; the best `Y` count of the result is `2|F(H)| + alpha(H)`.
//! `sat_to_rebel` encodes a MAX-2SAT instance in which every literal occurs
//! at most three times; its best `N` count is `opt(I) + (5 + 9L)N`.

use std::fmt;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::dynamics::Schedule;
use crate::error::{Error, Result};
use crate::graph::{require_valid, Graph, NodeId};

pub const MAX_OCCURRENCES: usize = 3;
pub const SAT_BRUTEFORCE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Literal {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Literal {
        Literal { var, negated: true }
    }

    /// `x_i -> 2i`, `not x_i -> 2i + 1`.
    pub fn code(self) -> usize {
        2 * self.var + self.negated as usize
    }

    pub fn from_dimacs(x: i64) -> Option<Literal> {
        if x == 0 {
            return None;
        }
        Some(Literal {
            var: (x.unsigned_abs() - 1) as usize,
            negated: x < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// MAX-2SAT instance with at most three occurrences per literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatInstance {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
    occurrences: Vec<usize>,
}

impl SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<SatInstance> {
        if num_vars == 0 {
            return Err(Error::Param("instance needs at least one variable".into()));
        }
        let mut occurrences = vec![0usize; 2 * num_vars];
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 2 {
                return Err(Error::Param(format!(
                    "clause {} has {} literals, expected 1 or 2",
                    j + 1,
                    c.len()
                )));
            }
            if c.len() == 2 && c[0] == c[1] {
                return Err(Error::Param(format!(
                    "clause {} repeats literal {}",
                    j + 1,
                    c[0]
                )));
            }
            for &lit in c {
                if lit.var >= num_vars {
                    return Err(Error::Param(format!(
                        "literal {lit} in clause {} exceeds {num_vars} variables",
                        j + 1
                    )));
                }
                occurrences[lit.code()] += 1;
            }
        }
        for (code, &count) in occurrences.iter().enumerate() {
            if count > MAX_OCCURRENCES {
                let lit = Literal {
                    var: code / 2,
                    negated: code % 2 == 1,
                };
                return Err(Error::OccurrenceLimit {
                    literal: lit.to_dimacs(),
                    count,
                });
            }
        }
        Ok(SatInstance {
            num_vars,
            clauses,
            occurrences,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn occurrences(&self, lit: Literal) -> usize {
        self.occurrences[lit.code()]
    }

    pub fn has_unit_clauses(&self) -> bool {
        self.clauses.iter().any(|c| c.len() == 1)
    }

    pub fn satisfied(&self, assignment: &[bool]) -> usize {
        assert_eq!(assignment.len(), self.num_vars, "assignment length");
        self.clauses
            .iter()
            .filter(|c| c.iter().any(|l| l.holds(assignment)))
            .count()
    }

    /// Reads the `p cnf` subset: `c` comment lines, one header, clauses of
    /// one or two literals terminated by `0`.
    pub fn read_dimacs<R: BufRead>(reader: R) -> Result<SatInstance> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        let mut last_line = 0;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            last_line = lineno;
            let t = line.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
                continue;
            }
            if t.starts_with('p') {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate header"));
                }
                let parts: Vec<&str> = t.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(parse_err(lineno, "expected `p cnf <vars> <clauses>`"));
                }
                let nv = parts[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad variable count"))?;
                let nc = parts[3]
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad clause count"))?;
                header = Some((nv, nc, lineno));
                continue;
            }
            let Some((nv, _, _)) = header else {
                return Err(parse_err(lineno, "clause before header"));
            };
            for tok in t.split_whitespace() {
                let x: i64 = tok
                    .parse()
                    .map_err(|_| parse_err(lineno, &format!("bad literal `{tok}`")))?;
                match Literal::from_dimacs(x) {
                    None => {
                        if current.is_empty() {
                            return Err(parse_err(lineno, "empty clause"));
                        }
                        if current.len() > 2 {
                            return Err(parse_err(
                                lineno,
                                &format!(
                                    "clause has {} literals, at most 2 allowed",
                                    current.len()
                                ),
                            ));
                        }
                        clauses.push(std::mem::take(&mut current));
                    }
                    Some(lit) => {
                        if lit.var >= nv {
                            return Err(parse_err(
                                lineno,
                                &format!("literal {x} exceeds {nv} variables"),
                            ));
                        }
                        current.push(lit);
                    }
                }
            }
        }
        let Some((nv, nc, hline)) = header else {
            return Err(parse_err(last_line.max(1), "missing `p cnf` header"));
        };
        if !current.is_empty() {
            return Err(parse_err(last_line, "last clause not terminated by 0"));
        }
        if clauses.len() != nc {
            return Err(parse_err(
                hline,
                &format!("header announces {nc} clauses, found {}", clauses.len()),
            ));
        }
        SatInstance::new(nv, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

/// Random instance with two distinct literals per clause, respecting the
/// occurrence limit. Deterministic in `seed`.
pub fn random_3occ(num_vars: usize, num_clauses: usize, seed: u64) -> Result<SatInstance> {
    if num_vars == 0 {
        return Err(Error::Param("need at least one variable".into()));
    }
    if 2 * num_clauses > MAX_OCCURRENCES * 2 * num_vars {
        return Err(Error::Param(format!(
            "{num_clauses} two-literal clauses exceed the occurrence budget of {num_vars} variables"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left = vec![MAX_OCCURRENCES; 2 * num_vars];
    let mut clauses = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        let open: Vec<usize> = (0..2 * num_vars).filter(|&c| left[c] > 0).collect();
        let pick: Vec<usize> = open.choose_multiple(&mut rng, 2).copied().collect();
        if pick.len() < 2 {
            return Err(Error::Param("occurrence budget exhausted".into()));
        }
        let clause: Vec<Literal> = pick
            .iter()
            .map(|&c| {
                left[c] -= 1;
                Literal {
                    var: c / 2,
                    negated: c % 2 == 1,
                }
            })
            .collect();
        clauses.push(clause);
    }
    SatInstance::new(num_vars, clauses)
}

/// Best satisfied-clause count and the first assignment (in binary counting
/// order, variable 0 lowest) attaining it.
pub fn sat_bruteforce(inst: &SatInstance) -> Result<(usize, Vec<bool>)> {
    let nv = inst.num_vars();
    if nv > SAT_BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge {
            n: nv,
            limit: SAT_BRUTEFORCE_LIMIT,
        });
    }
    let mut best = (0usize, vec![false; nv]);
    let mut first = true;
    for mask in 0u32..(1u32 << nv) {
        let a = assignment_from_mask(nv, mask as u64);
        let s = inst.satisfied(&a);
        if first || s > best.0 {
            best = (s, a);
            first = false;
        }
    }
    Ok(best)
}

pub fn assignment_from_mask(num_vars: usize, mask: u64) -> Vec<bool> {
    (0..num_vars).map(|i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetPart {
    A,
    B,
    C,
    D,
}

impl GadgetPart {
    pub fn as_str(self) -> &'static str {
        match self {
            GadgetPart::A => "A",
            GadgetPart::B => "B",
            GadgetPart::C => "C",
            GadgetPart::D => "D",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// Node `u` of the source graph.
    Original(NodeId),
    Pendant {
        owner: NodeId,
    },
    Literal(Literal),
    Clause(usize),
    /// `index` is 0-based within the part; for `D` it is `(k - 1) * L + j - 1`.
    Gadget {
        var: usize,
        part: GadgetPart,
        index: usize,
    },
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::Original(_) => "original",
            Role::Pendant { .. } => "pendant",
            Role::Literal(_) => "literal",
            Role::Clause(_) => "clause",
            Role::Gadget { .. } => "gadget",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionParams {
    Mis {
        source_n: usize,
        source_m: usize,
    },
    Sat {
        num_vars: usize,
        num_clauses: usize,
        l: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub graph: Graph,
    pub roles: Vec<Role>,
    pub params: ReductionParams,
    /// Only for the SAT construction.
    pub sat: Option<SatInstance>,
}

impl ReducedInstance {
    pub fn role(&self, v: NodeId) -> Role {
        self.roles[v]
    }

    /// One JSON object per node: `{"node", "role", "param"}`.
    pub fn certificate_lines(&self) -> Vec<String> {
        let unit_clauses: Vec<bool> = self
            .sat
            .as_ref()
            .map(|s| s.clauses().iter().map(|c| c.len() == 1).collect())
            .unwrap_or_default();
        self.roles
            .iter()
            .enumerate()
            .map(|(v, role)| {
                let param = match *role {
                    Role::Original(u) => json!({ "source": u }),
                    Role::Pendant { owner } => json!({ "owner": owner }),
                    Role::Literal(l) => json!({ "var": l.var + 1, "negated": l.negated }),
                    Role::Clause(j) => json!({ "clause": j + 1, "unit": unit_clauses[j] }),
                    Role::Gadget { var, part, index } => {
                        json!({ "var": var + 1, "part": part.as_str(), "index": index })
                    }
                };
                format!(r#"{{"node":{v},"role":"{}","param":{param}}}"#, role.name())
            })
            .collect()
    }
}

/// Attaches `d(u)` pendants to every node `u` of `h`. Original nodes keep
/// their ids; pendants follow, grouped by owner in ascending order.
pub fn mis_to_rebel(h: &Graph) -> Result<ReducedInstance> {
    require_valid(h)?;
    let nh = h.n();
    let total = nh + 2 * h.m();
    let mut edges: Vec<(NodeId, NodeId)> = h.edges().collect();
    let mut roles: Vec<Role> = (0..nh).map(Role::Original).collect();
    for u in h.nodes() {
        for _ in 0..h.degree(u) {
            edges.push((u, roles.len()));
            roles.push(Role::Pendant { owner: u });
        }
    }
    debug_assert_eq!(roles.len(), total);
    Ok(ReducedInstance {
        graph: Graph::from_edges(total, &edges)?,
        roles,
        params: ReductionParams::Mis {
            source_n: nh,
            source_m: h.m(),
        },
        sat: None,
    })
}

/// Pendants scheduled after their owner.
pub fn theta(instance: &ReducedInstance, schedule: &Schedule) -> Result<usize> {
    if schedule.len() != instance.graph.n() {
        return Err(Error::ScheduleMismatch(format!(
            "schedule has {} nodes, instance has {}",
            schedule.len(),
            instance.graph.n()
        )));
    }
    Ok(instance
        .roles
        .iter()
        .enumerate()
        .filter(|(v, r)| match r {
            Role::Pendant { owner } => schedule.position(*v) > schedule.position(*owner),
            _ => false,
        })
        .count())
}

/// Node ids of the gadget for variable `var`.
#[derive(Clone, Copy, Debug)]
pub struct GadgetLayout {
    pub base: NodeId,
    pub l: usize,
}

impl GadgetLayout {
    pub const A: usize = 0;
    pub const B: usize = 2;
    pub const C: usize = 4;
    pub const D: usize = 13;

    pub fn a(&self, j: usize) -> NodeId {
        self.base + Self::A + j
    }

    pub fn b(&self, j: usize) -> NodeId {
        self.base + Self::B + j
    }

    /// `k` in `0..9`, i.e. `c_{k+1}`.
    pub fn c(&self, k: usize) -> NodeId {
        self.base + Self::C + k
    }

    /// `d_{k+1, j+1}`.
    pub fn d(&self, k: usize, j: usize) -> NodeId {
        self.base + Self::D + k * self.l + j
    }

    pub fn size(l: usize) -> usize {
        13 + 9 * l
    }
}

fn sat_layout(inst: &SatInstance) -> (usize, usize) {
    let l = 10 * inst.num_vars() + inst.num_clauses();
    let gadget_base = 2 * inst.num_vars() + inst.num_clauses();
    (l, gadget_base)
}

pub fn gadget_layout(inst: &SatInstance, var: usize) -> GadgetLayout {
    let (l, base) = sat_layout(inst);
    GadgetLayout {
        base: base + var * GadgetLayout::size(l),
        l,
    }
}

/// Literal nodes first (`x_i = 2i`, `not x_i = 2i + 1`), clause nodes
/// next, then one gadget per variable laid out as `A, B, C, D`.
pub fn sat_to_rebel(inst: &SatInstance) -> Result<ReducedInstance> {
    let nv = inst.num_vars();
    let m = inst.num_clauses();
    let (l, gadget_base) = sat_layout(inst);
    let total = m + (15 + 9 * l) * nv;
    let mut roles = Vec::with_capacity(total);
    for var in 0..nv {
        roles.push(Role::Literal(Literal::pos(var)));
        roles.push(Role::Literal(Literal::neg(var)));
    }
    roles.extend((0..m).map(Role::Clause));
    let mut edges = Vec::new();
    for (j, clause) in inst.clauses().iter().enumerate() {
        for lit in clause {
            edges.push((lit.code(), 2 * nv + j));
        }
    }
    for var in 0..nv {
        let g = gadget_layout(inst, var);
        debug_assert_eq!(g.base, roles.len());
        debug_assert!(g.base >= gadget_base);
        for (part, count) in [
            (GadgetPart::A, 2),
            (GadgetPart::B, 2),
            (GadgetPart::C, 9),
            (GadgetPart::D, 9 * l),
        ] {
            roles.extend((0..count).map(|index| Role::Gadget { var, part, index }));
        }
        let x = Literal::pos(var).code();
        let nx = Literal::neg(var).code();
        for t in g.base..g.base + 13 {
            edges.push((x, t));
            edges.push((nx, t));
        }
        for k in 0..9 {
            edges.push((g.b(0), g.c(k)));
            edges.push((g.b(1), g.c(k)));
            edges.push((g.c(k), g.c((k + 1) % 9)));
            for j in 0..l {
                edges.push((g.c(k), g.d(k, j)));
            }
        }
    }
    debug_assert_eq!(roles.len(), total);
    Ok(ReducedInstance {
        graph: Graph::from_edges(total, &edges)?,
        roles,
        params: ReductionParams::Sat {
            num_vars: nv,
            num_clauses: m,
            l,
        },
        sat: Some(inst.clone()),
    })
}

/// True literals, all clauses, then per gadget: `A, B`, `c_1..c_8`, the
/// false literal, `c_9`, `D`. Ids ascend within each step.
pub fn gadget_witness_schedule(
    instance: &ReducedInstance,
    assignment: &[bool],
) -> Result<Schedule> {
    let Some(inst) = instance.sat.as_ref() else {
        return Err(Error::Param(
            "witness schedule needs a SAT reduction".into(),
        ));
    };
    let nv = inst.num_vars();
    if assignment.len() != nv {
        return Err(Error::Param(format!(
            "assignment has {} values, instance has {nv} variables",
            assignment.len()
        )));
    }
    let truth = |var: usize| {
        if assignment[var] {
            Literal::pos(var)
        } else {
            Literal::neg(var)
        }
    };
    let mut order: Vec<NodeId> = (0..nv).map(|v| truth(v).code()).collect();
    order.extend(2 * nv..2 * nv + inst.num_clauses());
    for var in 0..nv {
        let g = gadget_layout(inst, var);
        order.extend([g.a(0), g.a(1), g.b(0), g.b(1)]);
        order.extend((0..8).map(|k| g.c(k)));
        let false_lit = Literal {
            var,
            negated: !truth(var).negated,
        };
        order.push(false_lit.code());
        order.push(g.c(8));
        order.extend((0..9).flat_map(|k| (0..g.l).map(move |j| g.d(k, j))));
    }
    Schedule::new(order)
}

/// `(5 + 9L)N`, the gadget part of the witness `N` count.
pub fn gadget_n_offset(instance: &ReducedInstance) -> Option<usize> {
    match instance.params {
        ReductionParams::Sat { num_vars, l, .. } => Some((5 + 9 * l) * num_vars),
        ReductionParams::Mis { .. } => None,
    }
}

/// `|N(H)| + 2|F(H)|` or `M + (15 + 9L)N`.
pub fn expected_node_count(params: ReductionParams) -> usize {
    match params {
        ReductionParams::Mis { source_n, source_m } => source_n + 2 * source_m,
        ReductionParams::Sat {
            num_vars,
            num_clauses,
            l,
        } => num_clauses + (15 + 9 * l) * num_vars,
    }
}

/// A random 3-OCC instance as generated for the gadget checks, also
/// picking `N` and `M` in `1..=max_vars`, `1..=max_clauses`.
pub fn random_small_3occ(max_vars: usize, max_clauses: usize, seed: u64) -> Result<SatInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    random_3occ(nv, m, rng.gen())
}
