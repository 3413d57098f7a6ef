//! `ptwalk` — pseudo-Hermitian quantum-walk centrality from the command line.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` mathematical
//! precondition failure (graph not pseudo-Hermitian, generator budget
//! exhausted, ...).

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptwalk::centrality::{parse_methods, GraphAnalysis, Method};
use ptwalk::graphcore::format::{read_graph, GraphFormat};
use ptwalk::graphcore::{
    complete_laplacian_direct, hamiltonian, weights_from_hermitized, DirectedGraph,
};
use ptwalk::numfmt::sig15;
use ptwalk::spectral::{build_eta, classify, eigen_biorthonormal, hermitize};
use ptwalk::stats::run_ensemble;
use ptwalk::walk::{trajectory, WalkMode, WalkState};
use serde::Serialize;

use config::EnsembleConfig;

#[derive(Parser)]
#[command(
    name = "ptwalk",
    version,
    about = "Pseudo-Hermitian quantum-walk centrality on directed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a graph's Hamiltonian as hermitian, pseudo_hermitian or broken.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Write the classification and metric η as JSON to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score every vertex with one or more centrality methods.
    Centrality {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated methods (eta_ctqw, ctqw, pagerank, eigenvector) or `all`.
        #[arg(long, default_value = "all")]
        methods: String,
        /// Output file; `.json` selects JSON, anything else CSV (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump the vertex probabilities of a walk from the uniform state.
    Walk {
        #[command(flatten)]
        input: InputArgs,
        /// `eta` (unitary, hermitized) or `nonunitary`.
        #[arg(long, default_value = "eta")]
        mode: String,
        /// Final time.
        #[arg(long = "t-max", default_value_t = 10.0)]
        t_max: f64,
        /// Time step.
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        /// Output CSV file (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the ensemble experiments described by a JSON config.
    Ensemble {
        /// Config file.
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed of every ensemble.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for the reports.
        #[arg(long)]
        output: PathBuf,
    },
    /// Map a pseudo-Hermitian graph to its equivalent undirected weighted graph.
    Map {
        #[command(flatten)]
        input: InputArgs,
        /// Output JSON file (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Graph file (edge list or JSON).
    #[arg(long)]
    input: PathBuf,
    /// Input format: `edgelist` or `json` (guessed from the extension if omitted).
    #[arg(long)]
    format: Option<String>,
}

impl InputArgs {
    fn read(&self) -> Result<DirectedGraph, CliError> {
        let format = self
            .format
            .as_deref()
            .map(str::parse::<GraphFormat>)
            .transpose()?;
        Ok(read_graph(&self.input, format)?)
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Precondition(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<ptwalk::Error> for CliError {
    fn from(e: ptwalk::Error) -> Self {
        if e.is_precondition_failure() {
            CliError::Precondition(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn write_output(path: Option<&Path>, content: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn is_json(path: Option<&Path>) -> bool {
    path.and_then(|p| p.extension())
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), sig15)
}

#[derive(Serialize)]
struct CheckReport {
    class: &'static str,
    max_imag: f64,
    rcond: Option<f64>,
    asymmetry: f64,
    reason: Option<String>,
    eta: Option<Vec<Vec<f64>>>,
}

fn cmd_check(input: &InputArgs, output: Option<&Path>) -> CliResult {
    let g = input.read()?;
    let h = hamiltonian(&g);
    let c = classify(&h);
    println!("class: {}", c.class.as_str());
    println!("max_imag: {}", sig15(c.max_imag));
    println!("rcond: {}", fmt_opt(c.rcond));
    println!("asymmetry: {}", sig15(c.asymmetry));
    if let Some(reason) = &c.reason {
        println!("reason: {reason}");
    }
    if let Some(path) = output {
        let eta = if c.class.admits_metric() {
            let ed = build_eta(&eigen_biorthonormal(&h)?)?;
            let m = ed.eta_real();
            Some(m.row_iter().map(|r| r.iter().copied().collect()).collect())
        } else {
            None
        };
        let report = CheckReport {
            class: c.class.as_str(),
            max_imag: c.max_imag,
            rcond: c.rcond,
            asymmetry: c.asymmetry,
            reason: c.reason.clone(),
            eta,
        };
        write_output(Some(path), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    if c.class.admits_metric() {
        Ok(())
    } else {
        Err(CliError::Precondition(format!(
            "graph is not pseudo-Hermitian: {}",
            c.reason.unwrap_or_else(|| "broken classification".into())
        )))
    }
}

#[derive(Serialize)]
struct MethodScores {
    method: Method,
    scores: Vec<f64>,
    ranks: Vec<usize>,
    degenerate: bool,
}

#[derive(Serialize)]
struct CentralityReport {
    n: usize,
    results: Vec<MethodScores>,
}

fn cmd_centrality(input: &InputArgs, methods: &str, output: Option<&Path>) -> CliResult {
    let methods = parse_methods(methods)?;
    let g = input.read()?;
    let analysis = GraphAnalysis::new(&g);
    let mut results = Vec::new();
    for &m in &methods {
        let s = analysis.scores(m).map_err(|e| {
            let msg = format!("{m} centrality unavailable: {e}");
            match CliError::from(e) {
                CliError::Precondition(_) => CliError::Precondition(msg),
                CliError::Usage(_) => CliError::Usage(msg),
            }
        })?;
        results.push(MethodScores {
            method: m,
            scores: s.scores().to_vec(),
            ranks: s.ranks().to_vec(),
            degenerate: s.is_degenerate(),
        });
    }
    let text = if is_json(output) {
        let report = CentralityReport { n: g.n(), results };
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["vertex", "score", "rank", "method"])?;
        for r in &results {
            for (v, (s, rank)) in r.scores.iter().zip(&r.ranks).enumerate() {
                w.write_record([
                    (v + 1).to_string(),
                    sig15(*s),
                    rank.to_string(),
                    r.method.to_string(),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        String::from_utf8(bytes).expect("CSV output is UTF-8")
    };
    write_output(output, &text)
}

fn cmd_walk(
    input: &InputArgs,
    mode: &str,
    t_max: f64,
    dt: f64,
    output: Option<&Path>,
) -> CliResult {
    let mode: WalkMode = mode.parse()?;
    if dt <= 0.0 || !dt.is_finite() || !t_max.is_finite() || t_max < 0.0 {
        return Err(CliError::Usage(format!(
            "invalid time grid: need dt > 0 and t_max >= 0, got dt = {dt}, t_max = {t_max}"
        )));
    }
    let g = input.read()?;
    let h = hamiltonian(&g);
    let traj = trajectory(&h, mode, &WalkState::uniform(g.n()), t_max, dt)?;
    write_output(output, &traj.to_csv_string())
}

#[derive(Serialize)]
struct MapReport {
    n: usize,
    weights: Vec<Vec<f64>>,
    residual: f64,
}

fn cmd_map(input: &InputArgs, output: Option<&Path>) -> CliResult {
    let g = input.read()?;
    let h = hamiltonian(&g);
    let ed = build_eta(&eigen_biorthonormal(&h)?)?;
    let ht = hermitize(&h, &ed)?;
    let wg = weights_from_hermitized(&ht)?;
    let residual = (complete_laplacian_direct(&wg) - ht.matrix()).amax();
    let report = MapReport {
        n: g.n(),
        weights: wg
            .weights()
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
        residual,
    };
    write_output(output, &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn cmd_ensemble(config: &Path, seed: Option<u64>, output: &Path) -> CliResult {
    let text = fs::read_to_string(config)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", config.display())))?;
    let cfg: EnsembleConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", config.display())))?;
    let runs = cfg.runs(seed)?;
    fs::create_dir_all(output)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", output.display())))?;
    for run in &runs {
        println!(
            "ensemble {}: family {} n {} count {} master seed {}",
            run.name, run.spec.family, run.spec.n, run.options.count, run.spec.seed
        );
        let report = run_ensemble(&run.spec, &run.options)?;
        let base = output.join(&run.name);
        write_output(
            Some(&base.with_extension("json")),
            &(report.to_json()? + "\n"),
        )?;
        write_output(
            Some(&output.join(format!("{}_profiles.csv", run.name))),
            &report.profiles_csv(),
        )?;
        write_output(
            Some(&output.join(format!("{}_agreement.csv", run.name))),
            &report.agreement_csv(),
        )?;
        if let Some(pair) = report.agreement_for(Method::Pagerank, Method::EtaCtqw) {
            let means: Vec<String> = pair
                .reports
                .iter()
                .map(|r| format!("{:.3}", r.mean))
                .collect();
            println!(
                "  pagerank/eta_ctqw top-k agreement (k = 1..): {}",
                means.join(" ")
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Check { input, output } => cmd_check(&input, output.as_deref()),
        Command::Centrality {
            input,
            methods,
            output,
        } => cmd_centrality(&input, &methods, output.as_deref()),
        Command::Walk {
            input,
            mode,
            t_max,
            dt,
            output,
        } => cmd_walk(&input, &mode, t_max, dt, output.as_deref()),
        Command::Ensemble {
            config,
            seed,
            output,
        } => cmd_ensemble(&config, seed, &output),
        Command::Map { input, output } => cmd_map(&input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
