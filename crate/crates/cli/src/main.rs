//! `symris`: batch front-end for symmetric random induced states.
//!
//! Exit codes: 0 success, 2 usage or config error, 3 numerical failure,
//! 4 I/O error.

mod commands;
mod config;
mod svg;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(m: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: m.into(),
        }
    }

    pub fn numerical(m: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: m.into(),
        }
    }

    pub fn io(m: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: m.into(),
        }
    }
}

impl From<symris::Error> for CliError {
    fn from(e: symris::Error) -> Self {
        use symris::Error as E;
        fn code(e: &E) -> u8 {
            match e {
                E::Eigensolver { .. } | E::Other(_) => 3,
                E::Trial { source, .. } => code(source),
                _ => 2,
            }
        }
        Self {
            code: code(&e),
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "symris",
    version,
    about = "Random induced states of symmetric qubits: PPT and separability statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome probabilities across an ancilla grid.
    Scan(Common),
    /// Classify one state from a JSON file or from the generator.
    Classify(ClassifyArgs),
    /// Hilbert-Schmidt geometry of the generated states.
    Geometry(GeometryArgs),
    /// Phase boundaries across several register sizes.
    PhaseDiagram(PhaseArgs),
    /// Empirical probabilities along the checkpoint schedule.
    Convergence(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// MI (qubit ancilla) or MII (qudit ancilla).
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    n_qubits: Option<usize>,
    /// Ancilla grid: `12`, `1..40`, `10..200:10` or a comma list.
    #[arg(long)]
    ancilla: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tau_ppt: Option<f64>,
    #[arg(long)]
    eps_sep: Option<f64>,
    #[arg(long)]
    eps_ent: Option<f64>,
    /// Iteration budget of the separability search.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args, Clone)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    /// State file (`{"n_qubits": N, "matrix": [[[re, im], ...], ...]}`).
    #[arg(long)]
    state: Option<PathBuf>,
    /// Trial index when drawing from the generator.
    #[arg(long)]
    trial: Option<u64>,
}

#[derive(Args, Clone)]
struct GeometryArgs {
    #[command(flatten)]
    common: Common,
    /// States per ancilla value.
    #[arg(long)]
    sample: Option<usize>,
    /// `be` (bound entangled only) or `all`, for the pairwise and Dicke PDFs.
    #[arg(long)]
    keep: Option<String>,
    /// Ancilla value for the pairwise and Dicke PDFs.
    #[arg(long)]
    focus: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Args, Clone)]
struct PhaseArgs {
    #[command(flatten)]
    common: Common,
    /// Register sizes, e.g. `4,5,6`.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// Existing `probabilities.csv` files from `scan`, one per register size.
    #[arg(long, value_delimiter = ',')]
    scans: Option<Vec<PathBuf>>,
    /// Boundary models to fit: `linear`, `quadratic` or both.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
}

fn resolve(command: &str, c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.command = command.to_string();
    if let Some(m) = &c.method {
        cfg.method = m
            .parse()
            .map_err(|e: symris::Error| CliError::usage(e.to_string()))?;
    }
    macro_rules! set {
        ($($field:ident).+ <- $v:expr) => {
            if let Some(v) = $v.clone() {
                cfg.$($field).+ = v;
            }
        };
    }
    set!(n_qubits <- c.n_qubits);
    set!(ancilla <- c.ancilla);
    set!(trials <- c.trials);
    set!(seed <- c.seed);
    set!(workers <- c.workers);
    set!(out <- c.out);
    set!(tau_ppt <- c.tau_ppt);
    set!(separability.eps_sep <- c.eps_sep);
    set!(separability.eps_ent <- c.eps_ent);
    set!(separability.budget <- c.budget);
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.command {
        Command::Scan(c) => resolve("scan", c)?,
        Command::Convergence(c) => resolve("convergence", c)?,
        Command::Classify(a) => {
            let mut cfg = resolve("classify", &a.common)?;
            if a.state.is_some() {
                cfg.state = a.state.clone();
            }
            if let Some(t) = a.trial {
                cfg.trial = t;
            }
            cfg
        }
        Command::Geometry(a) => {
            let mut cfg = resolve("geometry", &a.common)?;
            if let Some(v) = a.sample {
                cfg.sample = v;
            }
            if let Some(v) = &a.keep {
                cfg.keep = v.clone();
            }
            if a.focus.is_some() {
                cfg.focus = a.focus;
            }
            if let Some(v) = a.bins {
                cfg.bins = v;
            }
            cfg
        }
        Command::PhaseDiagram(a) => {
            let mut cfg = resolve("phase-diagram", &a.common)?;
            if let Some(v) = &a.n_list {
                cfg.n_list = v.clone();
            }
            if let Some(v) = &a.scans {
                cfg.scans = v.clone();
            }
            if let Some(v) = &a.models {
                cfg.fit_models = v
                    .iter()
                    .map(|m| match m.to_ascii_lowercase().as_str() {
                        "linear" => Ok(symris::phases::BoundaryModel::Linear),
                        "quadratic" => Ok(symris::phases::BoundaryModel::Quadratic),
                        other => Err(CliError::usage(format!("unknown model '{other}'"))),
                    })
                    .collect::<Result<_, _>>()?;
            }
            cfg
        }
    };
    cfg.validate()?;
    if cfg.workers > 0 {
        // sizes the pool used by the geometry kernels; trial loops build their own
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global()
            .map_err(|e| CliError::numerical(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Scan(_) => commands::scan(&cfg),
        Command::Classify(_) => commands::classify(&cfg),
        Command::Geometry(_) => commands::geometry(&cfg),
        Command::PhaseDiagram(_) => commands::phase_diagram(&cfg),
        Command::Convergence(_) => commands::convergence(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
