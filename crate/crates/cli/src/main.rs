use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rebel_core::dynamics::{is_regret_proof, simulate, Decision, Schedule};
use rebel_core::equilibrium::{algorithm4_traced, algorithm5_traced, default_initial_cut};
use rebel_core::experiment::{rows_to_csv, run_experiment, ExperimentSpec};
use rebel_core::generate::{GeneratorKind, GraphSpec};
use rebel_core::graph::{validate, Graph};
use rebel_core::io;
use rebel_core::mis::greedy_maximal_independent_set;
use rebel_core::oracle::{audit, brute_force};
use rebel_core::peeling::{peel, schedule_n_with};
use rebel_core::reductions::{
    expected_node_count, gadget_n_offset, gadget_witness_schedule, mis_to_rebel, random_3occ,
    sat_bruteforce, sat_to_rebel, ReducedInstance, ReductionParams, SatInstance,
};
use rebel_core::schedulers::{alpha_if_small, Algorithm};

/// Prints to stdout; a closed pipe is not an error for a report line.
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

/// Exit status when a run completes but its guarantee does not hold.
const GUARANTEE_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rebel-sched",
    version,
    about = "Marketing schedules for rebel consumers on social networks"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "REBEL_SCHED_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (edge list) or a random 3-OCC MAX-2SAT instance (DIMACS).
    Gen {
        /// star, complete, wheel, path, triangle-chain, random, or sat
        kind: String,
        /// n (or k for triangle-chain; n p for random; vars clauses for sat)
        params: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a scheduler, the exhaustive oracle, or a full audit on a graph.
    Run {
        algorithm: RunMode,
        graph: PathBuf,
        /// Write the schedule here (one node per line).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write node,position,decision here.
        #[arg(long)]
        outcome: Option<PathBuf>,
        /// Per-iteration CSV for alg4 / alg5.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Layer CSV for alg2.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        /// Initial cut file for alg4 (lines `node side`).
        #[arg(long)]
        cut: Option<PathBuf>,
        /// Which optimum's schedule `brute` writes.
        #[arg(long, value_enum, default_value_t = Objective::Y)]
        objective: Objective,
        /// Report the audit as CSV instead of text.
        #[arg(long)]
        csv: bool,
        /// Measure and print wall-clock time.
        #[arg(long)]
        timing: bool,
    },
    /// Validate a graph, and simulate a schedule on it when one is given.
    Check {
        graph: PathBuf,
        schedule: Option<PathBuf>,
        /// Write the decisions CSV here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a hardness instance: pendant construction or 2SAT gadget.
    Reduce {
        kind: ReduceKind,
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Node roles as JSON lines.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// (sat) Write the witness schedule for an optimal assignment.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Run a batch described by a JSON spec and write CSV.
    Experiment {
        spec: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Fill the runtime_ms column.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RunMode {
    Alg1,
    Alg2,
    Alg4,
    Alg5,
    Brute,
    Audit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Y,
    N,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    Mis,
    Sat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { kind, params, out } => cmd_gen(&kind, &params, cli.seed, out.as_deref()),
        Command::Run {
            algorithm,
            graph,
            out,
            outcome,
            trace,
            decomposition,
            cut,
            objective,
            csv,
            timing,
        } => {
            let g = load_graph(&graph)?;
            let opts = RunOptions {
                out,
                outcome,
                trace,
                decomposition,
                cut,
                timing,
            };
            match algorithm {
                RunMode::Brute => cmd_brute(&g, objective, &opts),
                RunMode::Audit => cmd_audit(&g, csv),
                RunMode::Alg1 => cmd_run(&g, Algorithm::Alg1, &opts),
                RunMode::Alg2 => cmd_run(&g, Algorithm::Alg2, &opts),
                RunMode::Alg4 => cmd_run(&g, Algorithm::Alg4, &opts),
                RunMode::Alg5 => cmd_run(&g, Algorithm::Alg5, &opts),
            }
        }
        Command::Check {
            graph,
            schedule,
            out,
        } => cmd_check(&graph, schedule.as_deref(), out.as_deref()),
        Command::Reduce {
            kind,
            input,
            out,
            cert,
            witness,
        } => cmd_reduce(
            kind,
            &input,
            out.as_deref(),
            cert.as_deref(),
            witness.as_deref(),
        ),
        Command::Experiment { spec, out, timing } => cmd_experiment(&spec, out.as_deref(), timing),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn write_file(path: Option<&Path>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn load_graph(path: &Path) -> Result<Graph> {
    io::read_edge_list(open(path)?).with_context(|| format!("reading {}", path.display()))
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T> {
    let raw = params
        .get(i)
        .with_context(|| format!("missing parameter <{what}>"))?;
    raw.parse()
        .map_err(|_| anyhow::anyhow!("bad value `{raw}` for <{what}>"))
}

fn expect_params(params: &[String], count: usize, usage: &str) -> Result<()> {
    if params.len() != count {
        bail!("usage: rebel-sched gen {usage}");
    }
    Ok(())
}

fn cmd_gen(kind: &str, params: &[String], seed: u64, out: Option<&Path>) -> Result<ExitCode> {
    if kind == "sat" {
        expect_params(params, 2, "sat <vars> <clauses>")?;
        let inst = random_3occ(
            param(params, 0, "vars")?,
            param(params, 1, "clauses")?,
            seed,
        )?;
        emit(out, &inst.to_dimacs())?;
        return Ok(ExitCode::SUCCESS);
    }
    let spec = match kind.parse::<GeneratorKind>()? {
        GeneratorKind::Star => {
            expect_params(params, 1, "star <n>")?;
            GraphSpec::Star {
                n: param(params, 0, "n")?,
            }
        }
        GeneratorKind::Complete => {
            expect_params(params, 1, "complete <n>")?;
            GraphSpec::Complete {
                n: param(params, 0, "n")?,
            }
        }
        GeneratorKind::Wheel => {
            expect_params(params, 1, "wheel <n>")?;
            GraphSpec::Wheel {
                n: param(params, 0, "n")?,
            }
        }
        GeneratorKind::Path => {
            expect_params(params, 1, "path <n>")?;
            GraphSpec::Path {
                n: param(params, 0, "n")?,
            }
        }
        GeneratorKind::TriangleChain => {
            expect_params(params, 1, "triangle-chain <k>")?;
            GraphSpec::TriangleChain {
                k: param(params, 0, "k")?,
            }
        }
        GeneratorKind::Random => {
            expect_params(params, 2, "random <n> <p>")?;
            GraphSpec::RandomConnected {
                n: param(params, 0, "n")?,
                p: param(params, 1, "p")?,
                seed,
            }
        }
    };
    emit(out, &io::write_edge_list(&spec.build()?))?;
    Ok(ExitCode::SUCCESS)
}

struct RunOptions {
    out: Option<PathBuf>,
    outcome: Option<PathBuf>,
    trace: Option<PathBuf>,
    decomposition: Option<PathBuf>,
    cut: Option<PathBuf>,
    timing: bool,
}

fn cmd_run(g: &Graph, alg: Algorithm, opts: &RunOptions) -> Result<ExitCode> {
    if opts.trace.is_some() && !matches!(alg, Algorithm::Alg4 | Algorithm::Alg5) {
        bail!("--trace is only available for alg4 and alg5");
    }
    if opts.decomposition.is_some() && alg != Algorithm::Alg2 {
        bail!("--decomposition is only available for alg2");
    }
    if opts.cut.is_some() && alg != Algorithm::Alg4 {
        bail!("--cut is only available for alg4");
    }
    let start = Instant::now();
    let schedule = match alg {
        Algorithm::Alg2 => {
            rebel_core::graph::require_valid(g)?;
            let decomp = peel(g, &greedy_maximal_independent_set(g))?;
            if let Some(p) = &opts.decomposition {
                write_file(Some(p), &io::decomposition_csv(g, &decomp))?;
            }
            schedule_n_with(g, &decomp)
        }
        Algorithm::Alg4 => {
            let initial = match &opts.cut {
                Some(p) => {
                    io::read_cut(open(p)?, g).with_context(|| format!("reading {}", p.display()))?
                }
                None => default_initial_cut(g),
            };
            let run = algorithm4_traced(g, initial)?;
            write_file(opts.trace.as_deref(), &io::trace_csv(&run.trace))?;
            run.schedule
        }
        Algorithm::Alg5 => {
            let run = algorithm5_traced(g, default_initial_cut(g))?;
            write_file(opts.trace.as_deref(), &io::trace_csv(&run.trace))?;
            run.schedule
        }
        Algorithm::Alg1 => alg.run(g)?,
    };
    let elapsed = start.elapsed();
    let outcome = simulate(g, &schedule)?;
    let (regret_proof, _) = is_regret_proof(g, &schedule)?;
    let alpha = alpha_if_small(g);
    let required = alg.required(g.n(), alpha);
    let count = outcome.count(alg.objective());
    let ok = count >= required && (!alg.claims_regret_proof() || regret_proof);

    write_file(opts.out.as_deref(), &io::write_schedule(g, &schedule))?;
    write_file(
        opts.outcome.as_deref(),
        &io::outcome_csv(g, &schedule, &outcome),
    )?;
    let mut line = format!(
        "n={} m={} algorithm={} countY={} countN={} regret_proof={} required{}={} bound_met={}",
        g.n(),
        g.m(),
        alg,
        outcome.count_y(),
        outcome.count_n(),
        regret_proof,
        alg.objective(),
        required,
        count >= required
    );
    if opts.timing {
        line.push_str(&format!(" runtime_ms={:.3}", elapsed.as_secs_f64() * 1e3));
    }
    say!("{line}");
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("guarantee failed for {alg}");
        Ok(ExitCode::from(GUARANTEE_FAILED))
    }
}

fn cmd_brute(g: &Graph, objective: Objective, opts: &RunOptions) -> Result<ExitCode> {
    let start = Instant::now();
    let r = brute_force(g)?;
    let elapsed = start.elapsed();
    let (schedule, outcome) = match objective {
        Objective::Y => (&r.argmax_y, &r.argmax_y_outcome),
        Objective::N => (&r.argmax_n, &r.argmax_n_outcome),
    };
    write_file(opts.out.as_deref(), &io::write_schedule(g, schedule))?;
    write_file(
        opts.outcome.as_deref(),
        &io::outcome_csv(g, schedule, outcome),
    )?;
    let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let mut line = format!(
        "n={} m={} algorithm=brute optY={} optN={} regret_proof_exists={} best_regret_proof_Y={} best_regret_proof_N={}",
        g.n(),
        g.m(),
        r.opt_y,
        r.opt_n,
        r.regret_proof_exists,
        show(r.best_regret_proof_y),
        show(r.best_regret_proof_n)
    );
    if opts.timing {
        line.push_str(&format!(" runtime_ms={:.3}", elapsed.as_secs_f64() * 1e3));
    }
    say!("{line}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_audit(g: &Graph, csv: bool) -> Result<ExitCode> {
    let report = audit(g);
    if csv {
        emit(None, &report.to_csv())?;
    } else {
        emit(None, &report.to_text())?;
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(GUARANTEE_FAILED)
    })
}

fn cmd_check(graph: &Path, schedule: Option<&Path>, out: Option<&Path>) -> Result<ExitCode> {
    let raw = io::parse_edge_list(open(graph)?)
        .with_context(|| format!("reading {}", graph.display()))?;
    let report = rebel_core::graph::validate_edges(raw.n, &raw.edges);
    if !report.is_valid() {
        bail!("{}: invalid graph: {report}", graph.display());
    }
    let g = raw.into_graph()?;
    debug_assert!(validate(&g).is_valid());
    let Some(sched_path) = schedule else {
        say!("n={} m={} valid=true connected=true", g.n(), g.m());
        return Ok(ExitCode::SUCCESS);
    };
    let s: Schedule = io::read_schedule(open(sched_path)?, &g)
        .with_context(|| format!("reading {}", sched_path.display()))?;
    let outcome = simulate(&g, &s)?;
    let (stable, violators) = is_regret_proof(&g, &s)?;
    emit(out, &io::outcome_csv(&g, &s, &outcome))?;
    let names: Vec<String> = violators.iter().map(|v| g.label(v)).collect();
    let summary = format!(
        "countY={} countN={} regret_proof={} regretting=[{}]",
        outcome.count_y(),
        outcome.count_n(),
        stable,
        names.join(" ")
    );
    if out.is_some() {
        say!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(
    kind: ReduceKind,
    input: &Path,
    out: Option<&Path>,
    cert: Option<&Path>,
    witness: Option<&Path>,
) -> Result<ExitCode> {
    let inst: ReducedInstance = match kind {
        ReduceKind::Mis => {
            if witness.is_some() {
                bail!("--witness applies to sat reductions only");
            }
            mis_to_rebel(&load_graph(input)?)?
        }
        ReduceKind::Sat => {
            let sat = SatInstance::read_dimacs(open(input)?)
                .with_context(|| format!("reading {}", input.display()))?;
            sat_to_rebel(&sat)?
        }
    };
    emit(out, &io::write_edge_list(&inst.graph))?;
    if let Some(p) = cert {
        let mut text = inst.certificate_lines().join("\n");
        text.push('\n');
        fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?;
    }
    let expected = expected_node_count(inst.params);
    let mut line = match inst.params {
        ReductionParams::Mis { source_n, source_m } => format!(
            "reduction=mis source_n={source_n} source_m={source_m} n={} m={} expected_n={expected}",
            inst.graph.n(),
            inst.graph.m()
        ),
        ReductionParams::Sat {
            num_vars,
            num_clauses,
            l,
        } => format!(
            "reduction=sat N={num_vars} M={num_clauses} L={l} n={} m={} expected_n={expected}",
            inst.graph.n(),
            inst.graph.m()
        ),
    };
    if let Some(p) = witness {
        let sat = inst.sat.as_ref().expect("sat reduction");
        let (opt, assignment) = sat_bruteforce(sat)?;
        let s = gadget_witness_schedule(&inst, &assignment)?;
        let count_n = simulate(&inst.graph, &s)?.count(Decision::N);
        let offset = gadget_n_offset(&inst).expect("sat reduction");
        write_file(Some(p), &io::write_schedule(&inst.graph, &s))?;
        line.push_str(&format!(
            " optI={opt} witness_countN={count_n} expected_countN={}",
            opt + offset
        ));
        if count_n != opt + offset {
            bail!(
                "witness schedule yields {count_n} N decisions, expected {}",
                opt + offset
            );
        }
    }
    if out.is_some() {
        say!("{line}");
    } else {
        eprintln!("{line}");
    }
    if inst.graph.n() != expected {
        bail!(
            "reduced instance has {} nodes, expected {expected}",
            inst.graph.n()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(spec_path: &Path, out: Option<&Path>, timing: bool) -> Result<ExitCode> {
    let spec = ExperimentSpec::load(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let rows = run_experiment(&spec, base, timing)?;
    let csv = rows_to_csv(&rows);
    let target = out
        .map(Path::to_path_buf)
        .or_else(|| spec.output.as_ref().map(|o| base.join(o)));
    emit(target.as_deref(), &csv)?;
    if rows
        .iter()
        .all(|r| r.bound_met && (!r.alg.claims_regret_proof() || r.regret_proof))
    {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("some rows miss their guarantee");
        Ok(ExitCode::from(GUARANTEE_FAILED))
    }
}
