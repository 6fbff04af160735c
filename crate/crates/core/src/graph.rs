//! Simple undirected graphs with dense 0-based node ids.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Dense node index in `0..n`.
pub type NodeId = usize;

/// Immutable simple undirected graph stored as sorted adjacency lists.
///
/// Optional string labels are carried through from input files so that
/// output can be written back in the caller's vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    m: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and out-of-range ids.
    /// Connectivity is not required here; see [`validate`].
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        let report = check_simple(n, edges);
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            m: edges.len(),
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n() {
            return Err(Error::Param(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.n()
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of neighbors of `v` inside `set`.
    pub fn degree_into(&self, v: NodeId, set: &NodeSet) -> usize {
        self.adj[v].iter().filter(|&&u| set.contains(u)).count()
    }

    pub fn is_independent(&self, set: &NodeSet) -> bool {
        set.iter()
            .all(|v| self.adj[v].iter().all(|&u| !set.contains(u)))
    }

    /// Connected components as a per-node component index, plus the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().1 == 1
    }

    /// Subgraph induced by `keep`, with nodes renumbered in ascending order.
    pub fn induced(&self, keep: &NodeSet) -> Graph {
        let ids: Vec<NodeId> = keep.iter().collect();
        let mut remap = vec![usize::MAX; self.n()];
        for (i, &v) in ids.iter().enumerate() {
            remap[v] = i;
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| keep.contains(u) && keep.contains(v))
            .map(|(u, v)| (remap[u], remap[v]))
            .collect();
        Graph::from_edges(ids.len(), &edges).expect("induced subgraph of a simple graph is simple")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    TooSmall { n: usize },
    NodeOutOfRange { u: NodeId, v: NodeId },
    SelfLoop { node: NodeId },
    ParallelEdge { u: NodeId, v: NodeId },
    Asymmetric { u: NodeId, v: NodeId },
    DegreeMismatch { node: NodeId },
    Disconnected { components: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::TooSmall { n } => write!(f, "need at least 2 nodes, got {n}"),
            Issue::NodeOutOfRange { u, v } => {
                write!(f, "edge {u}-{v} references a node out of range")
            }
            Issue::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Issue::ParallelEdge { u, v } => write!(f, "parallel edge {u}-{v}"),
            Issue::Asymmetric { u, v } => write!(f, "adjacency not symmetric for {u}-{v}"),
            Issue::DegreeMismatch { node } => write!(f, "degree bookkeeping broken at node {node}"),
            Issue::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
        }
    }
}

/// Structural problems found in an edge list or graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        !self
            .issues
            .iter()
            .any(|i| matches!(i, Issue::Disconnected { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn check_simple(n: usize, edges: &[(NodeId, NodeId)]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen = HashSet::new();
    for &(u, v) in edges {
        if u >= n || v >= n {
            report.issues.push(Issue::NodeOutOfRange { u, v });
        } else if u == v {
            report.issues.push(Issue::SelfLoop { node: u });
        } else if !seen.insert((u.min(v), u.max(v))) {
            report.issues.push(Issue::ParallelEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
    }
    report
}

/// Full check of a raw edge list: simplicity, size and connectivity.
pub fn validate_edges(n: usize, edges: &[(NodeId, NodeId)]) -> ValidationReport {
    let mut report = check_simple(n, edges);
    if report.is_valid() {
        let g = Graph::from_edges(n, edges).expect("checked above");
        report.issues.extend(validate(&g).issues);
    } else if n < 2 {
        report.issues.push(Issue::TooSmall { n });
    }
    report
}

/// Checks everything the scheduling algorithms rely on: simplicity,
/// symmetric adjacency, `n >= 2` and connectivity.
pub fn validate(graph: &Graph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = graph.n();
    if n < 2 {
        report.issues.push(Issue::TooSmall { n });
    }
    let mut degree_sum = 0;
    for v in graph.nodes() {
        let list = graph.neighbors(v);
        degree_sum += list.len();
        for (i, &u) in list.iter().enumerate() {
            if u == v {
                report.issues.push(Issue::SelfLoop { node: v });
            } else if i > 0 && list[i - 1] == u {
                report.issues.push(Issue::ParallelEdge {
                    u: v.min(u),
                    v: v.max(u),
                });
            } else if !graph.has_edge(u, v) {
                report.issues.push(Issue::Asymmetric { u: v, v: u });
            }
        }
    }
    if degree_sum != 2 * graph.m() {
        report.issues.push(Issue::DegreeMismatch { node: 0 });
    }
    if n > 0 {
        let (_, count) = graph.components();
        if count > 1 {
            report
                .issues
                .push(Issue::Disconnected { components: count });
        }
    }
    report
}

/// Fails with [`Error::InvalidGraph`] unless the graph is a connected simple graph on at least 2 nodes.
pub fn require_valid(graph: &Graph) -> Result<()> {
    let report = validate(graph);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidGraph(report))
    }
}
