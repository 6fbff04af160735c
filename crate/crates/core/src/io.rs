//! Flat-file formats.
//!
//! Edge list: first non-comment line `n m`, then `m` lines `u v`; `#`
//! starts a comment. Node tokens that are all integers in `0..n` are used
//! as ids directly. Anything else is treated as labels: the distinct labels
//! are sorted (numerically when all are integers) and numbered in that
//! order, and the labels are kept for output.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::cut::{Cut, MoveLog, Side};
use crate::dynamics::{Outcome, Schedule};
use crate::equilibrium::IterationStats;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::peeling::{LayerSide, PeelingDecomposition};

/// An edge list as read, before simplicity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdgeList {
    pub n: usize,
    pub edges: Vec<(NodeId, NodeId)>,
    pub labels: Option<Vec<String>>,
}

impl RawEdgeList {
    pub fn into_graph(self) -> Result<Graph> {
        let g = Graph::from_edges(self.n, &self.edges)?;
        match self.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(l) => {
                let body = l.split('#').next().unwrap_or("").trim().to_string();
                (!body.is_empty()).then_some(Ok((i + 1, body)))
            }
        })
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<RawEdgeList> {
    let mut lines = content_lines(reader);
    let (hline, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| perr(1, "missing `n m` header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(perr(hline, "header must be `n m`"));
    }
    let n: usize = head[0]
        .parse()
        .map_err(|_| perr(hline, format!("bad node count `{}`", head[0])))?;
    let m: usize = head[1]
        .parse()
        .map_err(|_| perr(hline, format!("bad edge count `{}`", head[1])))?;
    let mut raw: Vec<(String, String, usize)> = Vec::with_capacity(m);
    for item in lines {
        let (lineno, body) = item?;
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(perr(lineno, "edge line must be `u v`"));
        }
        if raw.len() == m {
            return Err(perr(lineno, format!("more than the announced {m} edges")));
        }
        raw.push((toks[0].to_string(), toks[1].to_string(), lineno));
    }
    if raw.len() != m {
        return Err(perr(
            hline,
            format!("header announces {m} edges, found {}", raw.len()),
        ));
    }
    let as_id = |s: &str| s.parse::<usize>().ok().filter(|&x| x < n);
    if raw
        .iter()
        .all(|(a, b, _)| as_id(a).is_some() && as_id(b).is_some())
    {
        let edges = raw
            .iter()
            .map(|(a, b, _)| (as_id(a).unwrap(), as_id(b).unwrap()))
            .collect();
        return Ok(RawEdgeList {
            n,
            edges,
            labels: None,
        });
    }
    let mut labels: Vec<String> = raw
        .iter()
        .flat_map(|(a, b, _)| [a.clone(), b.clone()])
        .collect();
    labels.sort();
    labels.dedup();
    if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<i64>().unwrap());
    }
    if labels.len() != n {
        return Err(perr(
            hline,
            format!(
                "header announces {n} nodes, edges use {} distinct labels",
                labels.len()
            ),
        ));
    }
    let index: HashMap<&str, NodeId> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let edges = raw
        .iter()
        .map(|(a, b, _)| (index[a.as_str()], index[b.as_str()]))
        .collect();
    Ok(RawEdgeList {
        n,
        edges,
        labels: Some(labels),
    })
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    parse_edge_list(reader)?.into_graph()
}

pub fn read_edge_list_str(text: &str) -> Result<Graph> {
    read_edge_list(text.as_bytes())
}

/// Canonical form: header, then edges `u < v` in ascending order, written
/// with the graph's labels when it has them.
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.n(), graph.m());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{} {}", graph.label(u), graph.label(v));
    }
    out
}

fn label_index(graph: &Graph) -> HashMap<String, NodeId> {
    graph.nodes().map(|v| (graph.label(v), v)).collect()
}

/// One node label per line, in schedule order.
pub fn read_schedule<R: BufRead>(reader: R, graph: &Graph) -> Result<Schedule> {
    let index = label_index(graph);
    let mut order = Vec::with_capacity(graph.n());
    for item in content_lines(reader) {
        let (lineno, body) = item?;
        let v = index.get(body.as_str()).copied().ok_or_else(|| {
            Error::ScheduleMismatch(format!("line {lineno}: unknown node `{body}`"))
        })?;
        order.push(v);
    }
    if order.len() != graph.n() {
        return Err(Error::ScheduleMismatch(format!(
            "schedule lists {} nodes, graph has {}",
            order.len(),
            graph.n()
        )));
    }
    Schedule::new(order)
}

pub fn write_schedule(graph: &Graph, schedule: &Schedule) -> String {
    let mut out = String::new();
    for &v in schedule.order() {
        let _ = writeln!(out, "{}", graph.label(v));
    }
    out
}

/// `node,position,decision`, one row per node in id order.
pub fn outcome_csv(graph: &Graph, schedule: &Schedule, outcome: &Outcome) -> String {
    let mut out = String::from("node,position,decision\n");
    for v in graph.nodes() {
        let _ = writeln!(
            out,
            "{},{},{}",
            graph.label(v),
            schedule.position(v),
            outcome.decision(v)
        );
    }
    out
}

/// `node side` lines with side `1` or `2`.
pub fn write_cut(graph: &Graph, cut: &Cut) -> String {
    let mut out = String::new();
    for v in graph.nodes() {
        let _ = writeln!(out, "{} {}", graph.label(v), cut.side(v).index());
    }
    out
}

pub fn read_cut<R: BufRead>(reader: R, graph: &Graph) -> Result<Cut> {
    let index = label_index(graph);
    let mut side = vec![None; graph.n()];
    for item in content_lines(reader) {
        let (lineno, body) = item?;
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(perr(lineno, "cut line must be `node side`"));
        }
        let v = *index
            .get(toks[0])
            .ok_or_else(|| perr(lineno, format!("unknown node `{}`", toks[0])))?;
        let s = match toks[1] {
            "1" => Side::S1,
            "2" => Side::S2,
            other => return Err(perr(lineno, format!("side must be 1 or 2, got `{other}`"))),
        };
        if side[v].replace(s).is_some() {
            return Err(perr(lineno, format!("node `{}` listed twice", toks[0])));
        }
    }
    let side: Option<Vec<Side>> = side.into_iter().collect();
    let side = side.ok_or_else(|| Error::Param("cut file does not cover every node".into()))?;
    Ok(Cut::from_sides(graph, side))
}

/// `step,node,type,cut_size`.
pub fn movelog_csv(graph: &Graph, log: &MoveLog) -> String {
    let mut out = String::from("step,node,type,cut_size\n");
    for (i, r) in log.moves.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            graph.label(r.node),
            r.kind,
            r.cut_size_after
        );
    }
    out
}

/// `node,layer,side` with side `X` or `Y`.
pub fn decomposition_csv(graph: &Graph, d: &PeelingDecomposition) -> String {
    let mut out = String::from("node,layer,side\n");
    for v in graph.nodes() {
        let (layer, side) = d.layer_of[v];
        let s = match side {
            LayerSide::X => 'X',
            LayerSide::Y => 'Y',
        };
        let _ = writeln!(out, "{},{},{}", graph.label(v), layer, s);
    }
    out
}

/// `iter,cut_size,s1,s2,moves_type1,moves_type2`.
pub fn trace_csv(trace: &[IterationStats]) -> String {
    let mut out = String::from("iter,cut_size,s1,s2,moves_type1,moves_type2\n");
    for t in trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            t.iter, t.cut_size, t.s1, t.s2, t.moves_type1, t.moves_type2
        );
    }
    out
}
