//! Batch runs described by a JSON spec, written as one CSV row per
//! (graph, repetition, algorithm).
//!
//! ```json
//! {
//!   "graphs": [
//!     {"file": "graphs/k4.el"},
//!     {"kind": "star", "n": 10},
//!     {"kind": "random_connected", "n": 40, "p": 0.1, "seed": 7}
//!   ],
//!   "algorithms": ["alg1", "alg5"],
//!   "repetitions": 2,
//!   "output": "results.csv"
//! }
//! ```
//!
//! Repetition `r` of a random generator uses `seed + r`; other graphs are
//! simply rerun. Relative file paths resolve against the spec's directory.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{is_regret_proof, simulate};
use crate::error::{Error, Result};
use crate::generate::GraphSpec;
use crate::graph::Graph;
use crate::io::read_edge_list;
use crate::schedulers::{alpha_if_small, Algorithm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    File { file: PathBuf },
    Generated(GraphSpec),
}

impl GraphSource {
    fn for_repetition(&self, rep: usize) -> GraphSource {
        match self {
            GraphSource::Generated(GraphSpec::RandomConnected { n, p, seed }) => {
                GraphSource::Generated(GraphSpec::RandomConnected {
                    n: *n,
                    p: *p,
                    seed: seed.wrapping_add(rep as u64),
                })
            }
            other => other.clone(),
        }
    }

    fn name(&self) -> String {
        match self {
            GraphSource::File { file } => file.display().to_string(),
            GraphSource::Generated(spec) => spec.to_string(),
        }
    }

    fn load(&self, base: &Path) -> Result<Graph> {
        match self {
            GraphSource::File { file } => {
                let path = base.join(file);
                let f = File::open(&path).map_err(|e| Error::File {
                    path: path.display().to_string(),
                    err: e,
                })?;
                read_edge_list(BufReader::new(f)).map_err(|e| match e {
                    Error::Io(err) => Error::File {
                        path: path.display().to_string(),
                        err,
                    },
                    other => Error::Param(format!("{}: {other}", path.display())),
                })
            }
            GraphSource::Generated(spec) => spec.build(),
        }
    }
}

fn all_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub graphs: Vec<GraphSource>,
    #[serde(default = "all_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<ExperimentSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<ExperimentSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::File {
            path: path.display().to_string(),
            err: e,
        })?;
        ExperimentSpec::from_json(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub seed: Option<u64>,
    pub alg: Algorithm,
    pub count_y: usize,
    pub count_n: usize,
    pub bound_required: usize,
    pub bound_met: bool,
    pub regret_proof: bool,
    pub runtime_ms: Option<u128>,
}

pub const CSV_HEADER: &str =
    "graph,n,m,seed,alg,countY,countN,bound_required,bound_met,regret_proof,runtime_ms";

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.graph.replace(',', ";"),
            r.n,
            r.m,
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.alg,
            r.count_y,
            r.count_n,
            r.bound_required,
            r.bound_met,
            r.regret_proof,
            r.runtime_ms.map(|t| t.to_string()).unwrap_or_default()
        );
    }
    out
}

struct Instance {
    name: String,
    seed: Option<u64>,
    graph: Graph,
    alpha: Option<usize>,
}

/// Runs every job, in parallel, returning rows ordered by graph, then
/// repetition, then the spec's algorithm order. Wall-clock times are
/// recorded only when `timing` is set, so that the default output is
/// reproducible byte for byte.
pub fn run_experiment(
    spec: &ExperimentSpec,
    base: &Path,
    timing: bool,
) -> Result<Vec<ExperimentRow>> {
    let sources: Vec<GraphSource> = spec
        .graphs
        .iter()
        .flat_map(|g| (0..spec.repetitions).map(move |r| g.for_repetition(r)))
        .collect();
    let instances: Vec<Instance> = sources
        .par_iter()
        .map(|src| {
            let graph = src.load(base)?;
            Ok(Instance {
                name: src.name(),
                seed: match src {
                    GraphSource::Generated(s) => s.seed(),
                    GraphSource::File { .. } => None,
                },
                alpha: alpha_if_small(&graph),
                graph,
            })
        })
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, Algorithm)> = (0..instances.len())
        .flat_map(|i| spec.algorithms.iter().map(move |&a| (i, a)))
        .collect();
    jobs.par_iter()
        .map(|&(i, alg)| {
            let inst = &instances[i];
            let start = Instant::now();
            let schedule = alg.run(&inst.graph)?;
            let elapsed = start.elapsed().as_millis();
            let outcome = simulate(&inst.graph, &schedule)?;
            let required = alg.required(inst.graph.n(), inst.alpha);
            Ok(ExperimentRow {
                graph: inst.name.clone(),
                n: inst.graph.n(),
                m: inst.graph.m(),
                seed: inst.seed,
                alg,
                count_y: outcome.count_y(),
                count_n: outcome.count_n(),
                bound_required: required,
                bound_met: outcome.count(alg.objective()) >= required,
                regret_proof: is_regret_proof(&inst.graph, &schedule)?.0,
                runtime_ms: timing.then_some(elapsed),
            })
        })
        .collect()
}
