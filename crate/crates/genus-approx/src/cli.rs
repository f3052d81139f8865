//! Command-line front end.
//!
//! Exit codes: 0 for a drawing or feasible result, 1 for usage and I/O
//! errors, 2 for a sound rejection or a failed verification.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::EmbeddingRecord;
use crate::genusdraw::{draw_euler, draw_orientable, GenusCertificate, PipelineConfig};
use crate::graphcore::{parse_edge_list, Graph, GraphError};
use crate::oracle::{
    exact_crossing_number, exact_edge_planarization, exact_euler_genus, exact_orientable_genus,
    exact_vertex_planarization, OracleBudget,
};
use crate::reductions::{
    crossing_number_drawing, edge_planarization, vertex_planarization, CrossingDrawing, Decision,
    PlanarizationResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "genus-approx", version, about = "Approximate genus, crossing number and planarization of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input file; standard input when absent.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Pipeline setting override, `key=value` with a JSON value.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw with bounded Euler genus, or reject.
    Genus(Budget),
    /// Draw on an orientable surface of bounded genus, or reject.
    OrientableGenus(Budget),
    /// Draw in the plane with crossings, or reject.
    Crossing(Budget),
    /// Delete vertices until planar, or reject.
    PlanarizeVertices(Budget),
    /// Delete edges until planar, or reject.
    PlanarizeEdges(Budget),
    /// Re-check a report written by another subcommand.
    Verify {
        /// Edge list the report should describe; needed for rejections.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Exact value by exhaustive search (small graphs only).
    Oracle {
        #[arg(value_enum)]
        quantity: Quantity,
        #[arg(long, default_value_t = OracleBudget::default().max_states)]
        max_states: u64,
    },
}

#[derive(Debug, Args)]
pub struct Budget {
    #[arg(long)]
    pub budget: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Quantity {
    EulerGenus,
    OrientableGenus,
    CrossingNumber,
    VertexPlanarization,
    EdgePlanarization,
}

/// Everything a subcommand writes: the effective settings and the result.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Genus(Envelope<GenusCertificate>),
    OrientableGenus(Envelope<GenusCertificate>),
    Crossing(Envelope<Decision<CrossingDrawing>>),
    PlanarizeVertices(Envelope<Decision<PlanarizationResult>>),
    PlanarizeEdges(Envelope<Decision<PlanarizationResult>>),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub budget: usize,
    pub config: PipelineConfig,
    pub result: T,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("input graph: {0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Pipeline(String),
}

/// Outcome of a successful run: the text to write and the exit code.
struct Written {
    text: String,
    code: i32,
}

pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdin) {
        Ok(w) => {
            let written = match &cli.io.output {
                Some(path) => std::fs::write(path, &w.text),
                None => stdout.write_all(w.text.as_bytes()),
            };
            match written {
                Ok(()) => w.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn read_input(cli: &Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    match &cli.io.input {
        Some(path) => text = std::fs::read_to_string(path)?,
        None => {
            stdin.read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn config(cli: &Cli) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig::default();
    for pair in &cli.io.set {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got {pair:?}")))?;
        cfg.set(key.trim(), value.trim()).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(cfg)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Written, CliError> {
    let cfg = config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.io.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let input = read_input(cli, stdin)?;
    pool.install(|| {
        match &cli.command {
            Command::Verify { graph } => verify(&input, graph.as_ref()),
            Command::Oracle { quantity, max_states } => oracle(&parse_edge_list(&input)?, *quantity, *max_states),
            cmd => pipeline(cmd, &parse_edge_list(&input)?, &cfg),
        }
    })
}

fn pipeline(cmd: &Command, g: &Graph, cfg: &PipelineConfig) -> Result<Written, CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::Pipeline(e.to_string());
    let (report, drawn) = match cmd {
        Command::Genus(Budget { budget }) | Command::OrientableGenus(Budget { budget }) => {
            let cert = if matches!(cmd, Command::Genus(_)) {
                draw_euler(g, *budget, cfg)
            } else {
                draw_orientable(g, *budget, cfg)
            }
            .map_err(|e| fail(&e))?;
            let drawn = cert.is_drawn();
            let env = Envelope {
                budget: *budget,
                config: *cfg,
                result: cert,
            };
            let report = match cmd {
                Command::Genus(_) => Report::Genus(env),
                _ => Report::OrientableGenus(env),
            };
            (report, drawn)
        }
        Command::Crossing(Budget { budget }) => {
            let d = crossing_number_drawing(g, *budget, cfg).map_err(|e| fail(&e))?;
            let drawn = !d.is_rejected();
            (
                Report::Crossing(Envelope {
                    budget: *budget,
                    config: *cfg,
                    result: d,
                }),
                drawn,
            )
        }
        Command::PlanarizeVertices(Budget { budget }) | Command::PlanarizeEdges(Budget { budget }) => {
            let d = if matches!(cmd, Command::PlanarizeVertices(_)) {
                vertex_planarization(g, *budget, cfg)
            } else {
                edge_planarization(g, *budget, cfg)
            }
            .map_err(|e| fail(&e))?;
            let drawn = !d.is_rejected();
            let env = Envelope {
                budget: *budget,
                config: *cfg,
                result: d,
            };
            let report = match cmd {
                Command::PlanarizeVertices(_) => Report::PlanarizeVertices(env),
                _ => Report::PlanarizeEdges(env),
            };
            (report, drawn)
        }
        Command::Verify { .. } | Command::Oracle { .. } => unreachable!("handled by execute"),
    };
    Ok(Written {
        text: json(&report),
        code: if drawn { EXIT_OK } else { EXIT_REJECTED },
    })
}

fn verdict(ok: bool, what: &str) -> Written {
    Written {
        text: format!("{}: {what}\n", if ok { "ok" } else { "invalid" }),
        code: if ok { EXIT_OK } else { EXIT_REJECTED },
    }
}

/// Checks a report on its own and, when `graph` is given, against that graph.
fn verify(text: &str, graph: Option<&PathBuf>) -> Result<Written, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("report is not JSON: {e}")))?;
    let g = graph
        .map(|p| std::fs::read_to_string(p).map_err(CliError::from).and_then(|t| Ok(parse_edge_list(&t)?)))
        .transpose()?;
    let report: Report = match serde_json::from_value(value) {
        Ok(r) => r,
        Err(e) => return Ok(verdict(false, &format!("malformed report ({e})"))),
    };
    let needs_graph = |what: &str| CliError::Usage(format!("verifying a {what} needs --graph"));
    let ok = match &report {
        Report::Genus(env) | Report::OrientableGenus(env) => {
            let cert = &env.result;
            match (&g, &cert.embedding) {
                (Some(g), _) => cert.verify(g),
                (None, Some(rec)) => standalone_embedding(rec, cert),
                (None, None) => return Err(needs_graph("rejection")),
            }
        }
        Report::Crossing(env) => match (&g, &env.result) {
            (Some(g), Decision::Feasible(d)) => d.verify(g),
            (None, Decision::Feasible(d)) => {
                d.embedding.euler_genus() == 0 && d.embedding.embeds(&d.planarized) && d.smoothed().is_ok()
            }
            (Some(g), Decision::Rejected(r)) => r.verify(g),
            (None, Decision::Rejected(_)) => return Err(needs_graph("rejection")),
        },
        Report::PlanarizeVertices(env) | Report::PlanarizeEdges(env) => match (&g, &env.result) {
            (Some(g), Decision::Feasible(d)) => d.verify(g),
            (None, Decision::Feasible(d)) => d.witness.euler_genus() == 0,
            (Some(g), Decision::Rejected(r)) => r.verify(g),
            (None, Decision::Rejected(_)) => return Err(needs_graph("rejection")),
        },
    };
    let orientable_ok = match &report {
        Report::OrientableGenus(env) => !env.result.is_drawn() || env.result.orientable == Some(true),
        _ => true,
    };
    Ok(verdict(ok && orientable_ok, "report re-checked"))
}

fn standalone_embedding(rec: &EmbeddingRecord, cert: &GenusCertificate) -> bool {
    rec.to_embedding()
        .is_ok_and(|e| Some(e.euler_genus()) == cert.genus && Some(e.is_orientable()) == cert.orientable)
}

fn oracle(g: &Graph, quantity: Quantity, max_states: u64) -> Result<Written, CliError> {
    let budget = OracleBudget {
        max_states,
        timeout: None,
    };
    let value = match quantity {
        Quantity::EulerGenus => exact_euler_genus(g, &budget),
        Quantity::OrientableGenus => exact_orientable_genus(g, &budget),
        Quantity::CrossingNumber => exact_crossing_number(g, &budget),
        Quantity::VertexPlanarization => exact_vertex_planarization(g, &budget),
        Quantity::EdgePlanarization => exact_edge_planarization(g, &budget),
    }
    .map_err(|e| CliError::Pipeline(format!("oracle refused: {e}")))?;
    Ok(Written {
        text: format!("{value}\n"),
        code: EXIT_OK,
    })
}
