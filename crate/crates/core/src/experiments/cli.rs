use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use super::record::ExperimentConfig;
use super::runs::run_experiment;
use crate::certify::{check_AN, check_strong_core};
use crate::decompose::{attached_forest, kernel, two_core_map};
use crate::error::{Error, Result};
use crate::genmodels::{
    sample_cnm, sample_cnm_mindeg, sample_gnm, sample_gnp, sample_pairing, DegreeSequence,
};
use crate::mixing::{mixing_time_detail, simulate_walk, stationary, uniform_mixing_time};
use crate::multigraph::{giant_component_map, Multigraph};
use crate::strip::{severe_strip, StripParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GATES: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "coremix", version, about = "Random-graph cores, stripping, certification and mixing times")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Gnm,
    Cnm,
    CnmMindeg,
    Pairing,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MixMode {
    Exact,
    Uniform,
    Simulate,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a random multigraph and write it as an edge list.
    Sample {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Minimum degree for `cnm-mindeg`.
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated degree sequence for `pairing`.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        /// Use the `d`-regular sequence on `n` vertices for `pairing`.
        #[arg(long)]
        regular: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Giant, 2-core and kernel sizes with path and tree histograms.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Severe stripping with threshold N.
    Strip {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "N", default_value_t = 32)]
        n_param: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON lines, one record per step.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Edge list of the reduced core, on the input's vertex ids.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether G is an α-decorated expander around the given B.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Whitespace-separated vertex ids; `#` starts a comment.
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strip, then certify the reduced core.
    StrongCore {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "N", default_value_t = 32)]
        n_param: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mixing time of the simple random walk.
    Mix {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: MixMode,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Work on the largest component instead of requiring a connected input.
        #[arg(long)]
        giant: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configured experiment.
    Experiment {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        config: PathBuf,
        /// Output stem; `<stem>.json` and `<stem>.csv` are written.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that map to exit code 2.
struct ConfigError(String);

enum Failure {
    Config(String),
    Run(Error),
    Gates(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(msg)) => {
            eprintln!("coremix: configuration error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Gates(msg)) => {
            eprintln!("coremix: {msg}");
            EXIT_GATES
        }
        Err(Failure::Run(e)) => {
            eprintln!("coremix: {e}");
            EXIT_FAILURE
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn emit_json(value: &impl serde::Serialize, out: Option<&Path>) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?, out)
}

fn read_graph(path: &Path) -> Result<Multigraph> {
    Multigraph::read_edge_list(path)
}

fn read_vertex_set(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let v = tok
                .parse()
                .map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("{}: bad vertex id {tok:?}", path.display()),
                })?;
            out.push(v);
        }
    }
    Ok(out)
}

fn histogram(values: impl IntoIterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

fn need<T>(value: Option<T>, flag: &str, model: &str) -> std::result::Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError(format!("--{flag} is required for model {model}")))
}

fn sample(model: Model, args: SampleArgs) -> std::result::Result<Multigraph, Failure> {
    let SampleArgs {
        n,
        m,
        p,
        k,
        degrees,
        regular,
        seed,
    } = args;
    Ok(match model {
        Model::Gnp => sample_gnp(need(n, "n", "gnp")?, need(p, "p", "gnp")?, seed)?,
        Model::Gnm => sample_gnm(need(n, "n", "gnm")?, need(m, "m", "gnm")?, seed)?,
        Model::Cnm => sample_cnm(need(n, "n", "cnm")?, need(m, "m", "cnm")?, seed)?,
        Model::CnmMindeg => sample_cnm_mindeg(
            need(n, "n", "cnm-mindeg")?,
            need(m, "m", "cnm-mindeg")?,
            need(k, "k", "cnm-mindeg")?,
            seed,
        )?,
        Model::Pairing => {
            let seq = match (degrees, regular) {
                (Some(d), None) => d,
                (None, Some(d)) => vec![d; need(n, "n", "pairing with --regular")?],
                _ => {
                    return Err(Failure::Config(
                        "model pairing needs exactly one of --degrees and --regular".into(),
                    ))
                }
            };
            sample_pairing(&DegreeSequence(seq), seed)?
        }
    })
}

struct SampleArgs {
    n: Option<usize>,
    m: Option<usize>,
    p: Option<f64>,
    k: Option<usize>,
    degrees: Option<Vec<usize>>,
    regular: Option<usize>,
    seed: u64,
}

fn decompose_report(g: &Multigraph) -> Result<Value> {
    let giant = giant_component_map(g).graph;
    let core = two_core_map(&giant);
    let mut report = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "giant_vertices": giant.vertex_count(),
        "giant_edges": giant.edge_count(),
        "core_vertices": core.graph.vertex_count(),
        "core_edges": core.graph.edge_count(),
    });
    if core.graph.vertex_count() > 0 {
        let k = kernel(&core.graph)?;
        let forest = attached_forest(&giant, &core)?;
        report["kernel_vertices"] = json!(k.kernel.vertex_count());
        report["kernel_edges"] = json!(k.kernel.edge_count());
        report["dropped_cycles"] = json!(k.dropped_cycles.len());
        report["path_length_histogram"] = json!(histogram(k.path_map.iter().map(Vec::len)));
        report["tree_size_histogram"] = json!(histogram(forest.tree_size.iter().copied()));
    }
    Ok(report)
}

fn graph_for_mixing(path: &Path, giant: bool) -> Result<Multigraph> {
    let g = read_graph(path)?;
    if giant {
        return Ok(giant_component_map(&g).graph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g)
}

fn run(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Sample {
            model,
            n,
            m,
            p,
            k,
            degrees,
            regular,
            seed,
            out,
        } => {
            let g = sample(
                model,
                SampleArgs {
                    n,
                    m,
                    p,
                    k,
                    degrees,
                    regular,
                    seed,
                },
            )?;
            emit(&g.to_edge_list(), out.as_deref())?;
        }
        Command::Decompose { input, out } => {
            let g = read_graph(&input)?;
            emit_json(&decompose_report(&g)?, out.as_deref())?;
        }
        Command::Strip {
            input,
            n_param,
            seed,
            trace,
            out,
        } => {
            let g = read_graph(&input)?;
            let mut params = StripParams::new(n_param, seed);
            params.record_steps = trace.is_some();
            let (reduced, tr) = severe_strip(&g, &params)?;
            if let Some(path) = trace {
                let mut lines = String::new();
                for step in &tr.steps {
                    lines.push_str(&serde_json::to_string(step).map_err(Error::from)?);
                    lines.push('\n');
                }
                std::fs::write(path, lines).map_err(Error::from)?;
            }
            if let Some(path) = &out {
                // reduced core on the input's vertex ids
                let mut keep_e = vec![false; g.edge_count()];
                for &e in &reduced.edge_map {
                    keep_e[e] = true;
                }
                let mut on_input = Multigraph::new(g.vertex_count());
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    if keep_e[e] {
                        on_input.add_edge(u, v)?;
                    }
                }
                on_input.write_edge_list(path)?;
            }
            let summary = json!({
                "N": n_param,
                "seed": seed,
                "steps": tr.step_count,
                "kernel_vertices": tr.kernel_vertices,
                "kernel_edges": tr.kernel_edges,
                "initial_red_edges": tr.initial_red_edges,
                "initial_red_vertices": tr.initial_red_vertices,
                "surviving_kernel_vertices": tr.surviving_kernel_vertices,
                "surviving_kernel_edges": tr.surviving_kernel_edges,
                "reduced_vertices": reduced.graph.vertex_count(),
                "reduced_edges": reduced.graph.edge_count(),
                "reduced_vertex_ids": reduced.vertex_map,
            });
            emit_json(&summary, None)?;
        }
        Command::Certify { input, b, alpha, out } => {
            let g = read_graph(&input)?;
            let b = read_vertex_set(&b)?;
            let cert = check_AN(&g, &b, alpha)?;
            emit_json(&cert, out.as_deref())?;
        }
        Command::StrongCore {
            input,
            n_param,
            alpha,
            seed,
            out,
        } => {
            let g = read_graph(&input)?;
            let cert = check_strong_core(&g, n_param, alpha, seed)?;
            emit_json(&cert, out.as_deref())?;
        }
        Command::Mix {
            input,
            mode,
            eps,
            steps,
            seed,
            start,
            giant,
            out,
        } => {
            let g = graph_for_mixing(&input, giant)?;
            let report = match mode {
                MixMode::Exact => {
                    let h = mixing_time_detail(&g)?;
                    json!({
                        "mode": "exact",
                        "vertices": g.vertex_count(),
                        "H": h.value,
                        "start": h.start,
                        "halting_state": h.halting_state,
                    })
                }
                MixMode::Uniform => json!({
                    "mode": "uniform",
                    "vertices": g.vertex_count(),
                    "eps": eps,
                    "U": uniform_mixing_time(&g, eps)?,
                }),
                MixMode::Simulate => {
                    let walk = simulate_walk(&g, start, steps, &[start], seed)?;
                    let pi = stationary(&g)?;
                    let mut visits = vec![0usize; g.vertex_count()];
                    for &v in &walk.trajectory[1..] {
                        visits[v] += 1;
                    }
                    let tv = 0.5
                        * visits
                            .iter()
                            .zip(&pi)
                            .map(|(&c, &p)| (c as f64 / steps.max(1) as f64 - p).abs())
                            .sum::<f64>();
                    let gaps = walk.gaps();
                    let mean_return = (!gaps.is_empty()).then(|| gaps.iter().sum::<usize>() as f64 / gaps.len() as f64);
                    json!({
                        "mode": "simulate",
                        "vertices": g.vertex_count(),
                        "start": start,
                        "steps": steps,
                        "seed": seed,
                        "final_vertex": walk.trajectory.last(),
                        "returns_to_start": gaps.len(),
                        "mean_return_time": mean_return,
                        "expected_return_time": 1.0 / pi[start],
                        "occupation_tv_distance": tv,
                    })
                }
            };
            emit_json(&report, out.as_deref())?;
        }
        Command::Experiment { name, config, out } => {
            let cfg = ExperimentConfig::read(&config).map_err(|e| ConfigError(format!("{}: {e}", config.display())))?;
            if let Some(name) = name.filter(|n| *n != cfg.name) {
                return Err(Failure::Config(format!(
                    "--name {name:?} does not match the config's experiment {:?}",
                    cfg.name
                )));
            }
            let record = run_experiment(&cfg).map_err(|e| match e {
                Error::InvalidParameter(msg) => Failure::Config(msg),
                other => Failure::Run(other),
            })?;
            let stem = out.or_else(|| cfg.output.clone());
            match stem {
                Some(stem) => {
                    let (json_path, csv_path) = record.write(&stem)?;
                    eprintln!("wrote {} and {}", json_path.display(), csv_path.display());
                }
                None => emit(&record.to_json()?, None)?,
            }
            for g in &record.gates {
                eprintln!(
                    "gate {} in [{}, {}]: value {} -> {}",
                    g.gate.metric,
                    g.gate.min.map_or("-inf".into(), |v| v.to_string()),
                    g.gate.max.map_or("inf".into(), |v| v.to_string()),
                    g.value.map_or("missing".into(), |v| v.to_string()),
                    if g.pass { "PASS" } else { "FAIL" }
                );
            }
            if !record.passed_gates() {
                let failed = record.gates.iter().filter(|g| !g.pass).count();
                return Err(Failure::Gates(format!("{failed} acceptance gate(s) failed")));
            }
        }
    }
    Ok(())
}
