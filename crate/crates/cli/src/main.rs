//! `hamgraph` command-line interface.
//!
//! Every command prints one JSON document (or CSV with `--format csv`) on
//! stdout. Failures print `{"error": {...}}` on stderr and exit with 2 for
//! invalid input, 1 for I/O problems.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hamgraph::exec::Exec;
use hamgraph::fracmatch::{
    check_duality, fmn_half, fvcn_half, graph_peninsula, half_integral_perfect_matching,
    is_bipartite, uniquely_half_covered,
};
use hamgraph::graphon::{analyze, Graphon};
use hamgraph::hamilton::{classify, ClassifyConfig, PosaConfig};
use hamgraph::harness::{self, ExperimentConfig, JOBS_ENV};
use hamgraph::{pathsys, rational, sampler, Error, FiniteGraph};

#[derive(Parser)]
#[command(name = "hamgraph", version, about = "Hamiltonicity of graphon random graphs")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads (defaults to the HAMGRAPH_JOBS environment variable).
    #[arg(long, env = JOBS_ENV, global = true)]
    jobs: Option<usize>,
    /// Node budget of the exact Hamiltonicity search.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Condition report and predicted regime of a graphon.
    Analyze {
        /// Graphon file (.json or .toml), or `preset:<name>`.
        graphon: String,
    },
    /// Sample G(n, W): edge list plus a `.types.json` sidecar.
    Sample {
        graphon: String,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Output edge-list path; the edge list goes to stdout when omitted.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Classify a graph as Hamiltonian, not Hamiltonian or unknown.
    Test {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Half-integral cover, matching and peninsula certificates of a graph.
    Certify { graph: PathBuf },
    /// Run a Monte Carlo campaign from a TOML config.
    Experiment {
        config: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Path system covering the low-degree vertices of a graph.
    Pathsys {
        graph: PathBuf,
        #[arg(long)]
        alpha: String,
    },
}

fn load_graphon(spec: &str) -> Result<Graphon, Error> {
    match spec.strip_prefix("preset:") {
        Some(name) => harness::preset(name),
        None => Graphon::load(spec),
    }
}

fn load_graph(path: &Path) -> Result<FiniteGraph, Error> {
    FiniteGraph::parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Rows of `key,value` for a JSON object; nested values stay JSON.
fn to_csv(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (k, val) in map {
            let text = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k},\"{}\"\n", text.replace('"', "\"\"")));
        }
    }
    out
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Analyze { graphon } => {
            let report = analyze(&load_graphon(graphon)?)?;
            Ok(Output::Json(serde_json::to_value(report).unwrap()))
        }
        Command::Sample { graphon, n, seed, trial, o } => {
            let g = load_graphon(graphon)?;
            let s = sampler::sample_graph(&g, *n, *seed, *trial)?;
            match o {
                Some(path) => {
                    s.save(path)?;
                    Ok(Output::Json(json!({
                        "edges": path,
                        "types": sampler::sidecar_path(path),
                        "n": s.n(),
                        "m": s.graph.edge_count(),
                        "seed": seed,
                        "trial_index": trial,
                    })))
                }
                None => Ok(Output::Text(s.graph.to_edge_list())),
            }
        }
        Command::Test { graph, seed, restarts } => {
            let g = load_graph(graph)?;
            let config = ClassifyConfig {
                budget: cli.budget,
                posa: PosaConfig {
                    seed: *seed,
                    restarts: restarts.unwrap_or(PosaConfig::default().restarts),
                    ..PosaConfig::default()
                },
            };
            let verdict = classify(&g, &config)?;
            verdict.validate(&g)?;
            Ok(Output::Json(serde_json::to_value(verdict).unwrap()))
        }
        Command::Certify { graph } => {
            let g = load_graph(graph)?;
            let exec = Exec::default();
            let cover = fvcn_half(&g);
            let matching = fmn_half(&g)?;
            let uhc = uniquely_half_covered(&g, exec)?;
            Ok(Output::Json(json!({
                "n": g.n(),
                "fvcn": cover,
                "fmn": matching,
                "duality": check_duality(&g)?,
                "bipartite": is_bipartite(&g),
                "uniquely_half_covered": uhc.uniquely_half_covered,
                "peninsula": graph_peninsula(&g, exec)?,
                "perfect_matching": half_integral_perfect_matching(&g)?,
            })))
        }
        Command::Experiment { config, o } => {
            let cfg = ExperimentConfig::load(config)?;
            let run = harness::run_experiment(cfg, o.as_deref(), cli.jobs)?;
            match cli.format {
                Format::Csv => Ok(Output::Text(
                    String::from_utf8(harness::trials_to_csv(&run.records)?).unwrap(),
                )),
                Format::Json => Ok(Output::Json(serde_json::to_value(&run.report).unwrap())),
            }
        }
        Command::Pathsys { graph, alpha } => {
            let g = load_graph(graph)?;
            let alpha = rational::parse(alpha).map_err(Error::InvalidArgument)?;
            let report = pathsys::low_degree_path_system(&g, &alpha)?;
            Ok(Output::Json(serde_json::to_value(report).unwrap()))
        }
    }
}

fn error_object(e: &Error) -> Value {
    let mut obj = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::InvalidGraphon { position, .. } | Error::InvalidConfig { position, .. } = e {
        obj["position"] = json!(position);
    }
    json!({ "error": obj })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Ok(Output::Json(v)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&v).unwrap()),
                Format::Csv => print!("{}", to_csv(&v)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_object(&e));
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
