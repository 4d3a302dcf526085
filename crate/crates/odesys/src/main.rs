use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use odesys::document::{from_json_str, load_problem, ProblemDocument};
use odesys::runner::{auto_compare, diagnostics_jsonl, execute, Method, ResultDocument};
use odesys::service::{self, AppState};
use odesys::store::{write_atomic, Store, STORE_DIR_ENV};
use odesys::{bundled, tables};
use odesys_core::baselines::{evaluate_alternatives, MethodLabel};
use odesys_core::cases::wind::{self, WindParams};
use odesys_core::error::SolverError;
use odesys_core::{GaConfig, HookRegistry, Problem};
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "odesys", version, about = "Preference-based multi-objective design optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a problem with one method and write result.json.
    Run(RunArgs),
    /// Tabulate and rank alternatives on aggregated preference.
    Compare(CompareArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
    /// Simulate an anchor-installation fleet and print its event log.
    Des(DesArgs),
    /// Check a problem document without running anything.
    Validate {
        /// Path to a problem document, or a bundled problem name.
        problem: String,
    },
}

#[derive(Args)]
struct GaArgs {
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Population size.
    #[arg(long)]
    pop: Option<usize>,
    /// Maximum number of generations.
    #[arg(long)]
    gens: Option<usize>,
    /// Relevance threshold P* on the first-pass score.
    #[arg(long)]
    p_star: Option<f64>,
    /// Generations without improvement before stopping.
    #[arg(long)]
    stall: Option<usize>,
}

impl GaArgs {
    fn config(&self) -> GaConfig {
        let mut c = GaConfig::with_seed(self.rng_seed);
        if let Some(p) = self.pop {
            c.population_size = p;
        }
        if let Some(g) = self.gens {
            c.max_generations = g;
        }
        if let Some(p) = self.p_star {
            c.relevance_threshold = p;
        }
        if let Some(s) = self.stall {
            c.stall_limit = s;
        }
        c
    }
}

#[derive(Args)]
struct RunArgs {
    /// Path to a problem document, or a bundled problem name.
    problem: String,
    /// imap, minmax, sodo:<objective>[:min|:max] or brute[:<divisions>].
    #[arg(long, default_value = "imap")]
    method: String,
    #[command(flatten)]
    ga: GaArgs,
    /// JSON file holding an array of design vectors for the initial population.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Output directory for result.json and diagnostics.jsonl.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Path to a problem document, or a bundled problem name.
    problem: String,
    /// JSON file: an array of {"method": "...", "x": [...]}.
    #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
    alternatives: Option<PathBuf>,
    /// Run the SODO baselines, min-max and IMAP first.
    #[arg(long)]
    auto: bool,
    #[command(flatten)]
    ga: GaArgs,
    /// Output directory for comparison.csv and plot.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: String,
    /// Store directory; defaults to $ODESYS_STORE_DIR or ./odesys-store.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Runs that may be queued or executing at once.
    #[arg(long, default_value_t = service::DEFAULT_QUEUE_CAPACITY)]
    queue: usize,
}

#[derive(Args)]
struct DesArgs {
    /// Vessel counts per class: small OCV, large OCV, barge.
    #[arg(long, value_delimiter = ',', required = true)]
    fleet: Vec<u32>,
    /// Problem document whose exogenous parameters override the defaults.
    #[arg(long)]
    problem: Option<String>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command failed, mapped onto the exit code.
enum Failure {
    Input(String),
    Infeasible(String),
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NoFeasiblePoint => Self::Infeasible(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn input<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read_problem(reference: &str) -> Result<(ProblemDocument, Problem), Failure> {
    let text = match fs::read_to_string(reference) {
        Ok(text) => text,
        Err(e) => match bundled::find(Path::new(reference).file_name().and_then(|n| n.to_str()).unwrap_or(reference)) {
            Some(text) if !Path::new(reference).exists() => text.to_string(),
            _ => return Err(Failure::Input(format!("{reference}: {e}"))),
        },
    };
    load_problem(&text, &HookRegistry::with_builtins()).map_err(|e| {
        Failure::Input(format!("{reference}: [{}] {e}", e.code()))
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    write_atomic(path, bytes).map_err(input(path.display()))
}

fn cmd_run(args: RunArgs) -> CliResult {
    let (doc, problem) = read_problem(&args.problem)?;
    let method: Method = args.method.parse().map_err(Failure::Input)?;
    let config = args.ga.config();
    config.validate()?;
    let seeds: Vec<Vec<f64>> = match &args.seeds {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(input(path.display()))?;
            from_json_str(&text).map_err(input(path.display()))?
        }
        None => Vec::new(),
    };
    let result = execute(&problem, &method, &config, &seeds)?;
    let document = ResultDocument::new(&problem, &doc.hash(), &method, &config, &result);
    write_file(&args.out.join("result.json"), &document.to_bytes())?;
    write_file(&args.out.join("diagnostics.jsonl"), &diagnostics_jsonl(&result.history))?;
    println!("{}", document.summary());
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Alternative {
    method: MethodLabel,
    x: Vec<f64>,
}

fn cmd_compare(args: CompareArgs) -> CliResult {
    let (doc, problem) = read_problem(&args.problem)?;
    let table = if args.auto {
        let config = args.ga.config();
        config.validate()?;
        let (table, runs) = auto_compare(&problem, &doc, &config)?;
        for run in &runs {
            log::info!("{} finished after {} generations", run.method, run.result.generations);
        }
        table
    } else {
        let path = args.alternatives.expect("clap requires --alternatives without --auto");
        let text = fs::read_to_string(&path).map_err(input(path.display()))?;
        let alternatives: Vec<Alternative> = from_json_str(&text).map_err(input(path.display()))?;
        let alternatives: Vec<(MethodLabel, Vec<f64>)> = alternatives.into_iter().map(|a| (a.method, a.x)).collect();
        evaluate_alternatives(&problem, &alternatives)?
    };
    let csv = tables::comparison_csv(&table);
    write_file(&args.out.join("comparison.csv"), csv.as_bytes())?;
    write_file(&args.out.join("plot.csv"), tables::plot_csv(&problem, &table).as_bytes())?;
    print!("{csv}");
    Ok(())
}

fn cmd_serve(args: ServeArgs) -> CliResult {
    let store = match &args.store {
        Some(dir) => Store::open(dir),
        None => Store::from_env(),
    }
    .map_err(input(format!("store (set {STORE_DIR_ENV} or --store)")))?;
    if args.queue == 0 {
        return Err(Failure::Input("--queue must be at least 1".into()));
    }
    let runtime = tokio::runtime::Runtime::new().map_err(input("runtime"))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&args.addr).await.map_err(input(&args.addr))?;
        let addr = listener.local_addr().map_err(input(&args.addr))?;
        println!("listening on http://{addr} (store {})", store.root().display());
        service::serve(listener, AppState::with_capacity(store, args.queue)).await.map_err(input("server"))
    })
}

fn cmd_des(args: DesArgs) -> CliResult {
    let params = match &args.problem {
        Some(reference) => {
            let (doc, _) = read_problem(reference)?;
            let exogenous = odesys_core::problem::Exogenous(doc.exogenous);
            WindParams::from_lookup(|name| exogenous.get(name))
        }
        None => WindParams::default(),
    };
    params.validate().map_err(Failure::Input)?;
    let des = odesys_core::cases::wind::des::run_des(&args.fleet, &params.vessels, params.anchors)
        .map_err(input("fleet"))?;
    let csv = tables::des_log_csv(&des, &params.vessels);
    match &args.out {
        Some(path) => write_file(path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    eprintln!(
        "duration {} days, {} anchors, min_vessels {}",
        wind::project_duration(&des),
        des.installed,
        wind::min_vessels(&args.fleet)
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with 2 on usage errors, which is reserved for infeasibility.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Serve(args) => cmd_serve(args),
        Command::Des(args) => cmd_des(args),
        Command::Validate { problem } => read_problem(&problem).map(|(doc, p)| {
            println!("{}: {} variables, {} objectives, {} criteria, hash {}", p.name(), p.dimension(), p.objectives().len(), p.criteria().len(), doc.hash());
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Infeasible(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
