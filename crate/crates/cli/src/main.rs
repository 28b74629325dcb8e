use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use flcc::config::{ConfigError, ExperimentConfig, ModeName};
use flcc::flcc::FlccDims;
use flcc::sim::{
    bounds_csv, format_sig6, parse_grid, run_campaign, run_roundtrip, sweep_thresholds,
    thresholds_csv, AdversaryKind, BoundSweep, PruneMode, RoundtripConfig,
};
use flcc::{FlccError, FrsError, FrsParams, PrimeField};

#[derive(Parser)]
#[command(
    name = "flcc",
    version,
    about = "FRS list decoding and folded Lagrange coded computing experiments",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Adversary thresholds of LCC and FLCC over a grid of folding parameters.
    Thresholds(ThresholdArgs),
    /// Success-probability lower bounds for random side information.
    Bounds(BoundArgs),
    /// Monte Carlo campaign over the full protocol.
    Simulate(SimulateArgs),
    /// Encode, corrupt, list-decode and prune on the bare FRS code.
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
#[allow(non_snake_case)]
struct ThresholdArgs {
    #[arg(long = "N")]
    N: usize,
    #[arg(long = "K")]
    K: usize,
    #[arg(long = "T")]
    T: usize,
    #[arg(long = "S")]
    S: usize,
    #[arg(long = "D2")]
    D2: usize,
    /// Folding parameters, e.g. `1,100,10000` or `1:64:8`.
    #[arg(long = "m")]
    m: String,
    /// Write the CSV here as well.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Ours,
    Gr2016,
    Saraf,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    l: Option<u64>,
    /// Grid of side-information sizes (`ours`, `saraf`).
    #[arg(long)]
    t: Option<String>,
    /// Block length (`saraf`).
    #[arg(long)]
    n: Option<u64>,
    /// Grid of evaluation counts (`gr2016`).
    #[arg(long)]
    evals: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[allow(non_snake_case)]
struct SimulateArgs {
    /// JSON experiment description; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long = "N")]
    N: Option<usize>,
    #[arg(long = "K")]
    K: Option<usize>,
    #[arg(long = "T")]
    T: Option<usize>,
    #[arg(long = "S")]
    S: Option<usize>,
    #[arg(long = "A")]
    A: Option<usize>,
    #[arg(long = "m")]
    m: Option<usize>,
    #[arg(long = "D2")]
    D2: Option<usize>,
    /// identity, square or gram.
    #[arg(long)]
    job: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    t: Option<u64>,
    /// uniform_random, symbol_burst or aliasing.
    #[arg(long)]
    adversary: Option<AdversaryKind>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    consistency_check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Deterministic,
    Probabilistic,
}

#[derive(Clone, Copy, ValueEnum)]
enum PruneArg {
    Deterministic,
    Random,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    errors: usize,
    #[arg(long, default_value_t = 0)]
    erasures: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = AdversaryKind::Aliasing)]
    adversary: AdversaryKind,
    #[arg(long, value_enum, default_value_t = PruneArg::Deterministic)]
    prune: PruneArg,
    /// Random side-information points when `--prune random`.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Flcc(#[from] FlccError),
    #[error(transparent)]
    Frs(#[from] FrsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A silent error inside the guarantee: a bug, not a usage problem.
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 2,
            _ => 1,
        }
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        })?;
    }
    Ok(())
}

fn grid(flag: &str, spec: Option<&str>) -> Result<Vec<u64>, CliError> {
    let spec = spec.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))?;
    parse_grid(spec).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn required<T>(flag: &str, v: Option<T>) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this bound")))
}

fn thresholds(a: ThresholdArgs) -> Result<String, CliError> {
    let folds: Vec<usize> = grid("m", Some(&a.m))?
        .into_iter()
        .map(|m| m as usize)
        .collect();
    let base = FlccDims {
        workers: a.N,
        batch: a.K,
        privacy: a.T,
        stragglers: a.S,
        adversaries: 0,
        fold: 1,
        degree: a.D2,
    };
    if folds.contains(&0) {
        return Err(CliError::Usage(
            "--m: folding parameters must be at least 1".into(),
        ));
    }
    let rows = sweep_thresholds(&base, &folds)?;
    let csv = thresholds_csv(&rows);
    write_out(&a.out, &csv)?;
    Ok(match a.format {
        Format::Csv => csv,
        Format::Table => {
            let mut t = format!(
                "{:>7} {:>5} {:>9} {:>10} {:>10} {:>6} {:>8} {:>8}\n",
                "m", "s*", "a(s*)", "FLCC", "FLCC_rad", "LCC", "ratio", "extra"
            );
            for r in &rows {
                t.push_str(&format!(
                    "{:>7} {:>5} {:>9} {:>10} {:>10} {:>6} {:>8} {:>8}\n",
                    r.fold,
                    r.s_star,
                    format_sig6(r.a_s_star_f64()),
                    r.paper,
                    r.exact,
                    r.lcc,
                    format_sig6(r.ratio_paper()),
                    format_sig6(r.normalized_extra_f64()),
                ));
            }
            t
        }
    })
}

fn bounds(a: BoundArgs) -> Result<String, CliError> {
    let sweep = match a.which {
        Which::Ours => BoundSweep::Ours {
            q: required("q", a.q)?,
            k: a.k,
            l: required("l", a.l)?,
            t: grid("t", a.t.as_deref())?,
        },
        Which::Gr2016 => BoundSweep::Gr2016 {
            q: required("q", a.q)?,
            k: a.k,
            evals: grid("evals", a.evals.as_deref())?,
        },
        Which::Saraf => BoundSweep::Saraf {
            n: required("n", a.n)?,
            k: a.k,
            l: required("l", a.l)?,
            t: grid("t", a.t.as_deref())?,
        },
    };
    let csv = bounds_csv(&sweep);
    write_out(&a.out, &csv)?;
    Ok(csv)
}

fn experiment(a: &SimulateArgs) -> Result<ExperimentConfig, CliError> {
    let mut c = match &a.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let need = |flag: &str, v: Option<usize>| {
                v.ok_or_else(|| CliError::Usage(format!("--{flag} is required without --config")))
            };
            let skeleton = serde_json::json!({
                "N": need("N", a.N)?, "K": need("K", a.K)?, "D2": need("D2", a.D2)?,
            });
            serde_json::from_value(skeleton).map_err(ConfigError::from)?
        }
    };
    macro_rules! set {
        ($field:ident, $value:expr) => {
            if let Some(v) = $value {
                c.$field = v;
            }
        };
    }
    set!(q, a.q);
    set!(workers, a.N);
    set!(batch, a.K);
    set!(privacy, a.T);
    set!(stragglers, a.S);
    set!(adversaries, a.A);
    set!(fold, a.m);
    set!(degree, a.D2);
    set!(job, a.job.clone());
    set!(adversary, a.adversary);
    set!(trials, a.trials);
    set!(seed, a.seed);
    set!(rows, a.rows);
    set!(cols, a.cols);
    if let Some(mode) = a.mode {
        c.mode = match mode {
            ModeArg::Deterministic => ModeName::Deterministic,
            ModeArg::Probabilistic => ModeName::Probabilistic,
        };
    }
    if a.t.is_some() {
        c.t = a.t;
    }
    if a.out.is_some() {
        c.output = a.out.clone();
    }
    c.consistency_check |= a.consistency_check;
    Ok(c)
}

fn simulate(a: SimulateArgs) -> Result<String, CliError> {
    let cfg = experiment(&a)?;
    let sim = cfg.to_sim()?;
    let summary = run_campaign(&sim, cfg.trials, cfg.seed)?;
    let mut doc = serde_json::to_value(&summary).expect("summary serializes");
    doc["config"] = serde_json::to_value(&cfg).expect("config serializes");
    let text = pretty(&doc);
    write_out(&cfg.output, &text)?;
    if summary.silent_errors > 0 {
        eprintln!(
            "!!! {} SILENT ERRORS within the guarantee !!!",
            summary.silent_errors
        );
        print!("{text}");
        return Err(CliError::Invariant(format!(
            "{} silent errors with {} adversaries (guarantee {})",
            summary.silent_errors, cfg.adversaries, summary.guarantee
        )));
    }
    Ok(text)
}

fn roundtrip(a: RoundtripArgs) -> Result<String, CliError> {
    let field = PrimeField::new(a.q).map_err(|e| CliError::Usage(format!("--q: {e}")))?;
    let params = FrsParams::new(field, a.n, a.m, a.k)?;
    let prune = match (a.prune, a.t) {
        (PruneArg::Deterministic, _) => PruneMode::Deterministic,
        (PruneArg::Random, Some(t)) => PruneMode::Random { t },
        (PruneArg::Random, None) => return Err(CliError::Usage("--prune random needs --t".into())),
    };
    let cfg = RoundtripConfig {
        params,
        s: a.s,
        errors: a.errors,
        erasures: a.erasures,
        adversary: a.adversary,
        prune,
    };
    let stats = run_roundtrip(&cfg, a.trials, a.seed)?;
    let mut doc = serde_json::to_value(&stats).expect("stats serialize");
    doc["config"] = serde_json::json!({
        "q": a.q, "m": a.m, "n": a.n, "k": a.k, "s": a.s,
        "errors": a.errors, "erasures": a.erasures, "adversary": a.adversary,
        "prune": prune,
    });
    let text = pretty(&doc);
    write_out(&a.out, &text)?;
    if !stats.within_guarantee {
        eprintln!(
            "note: {} errors exceed the decoding radius {}; out of guarantee",
            a.errors, stats.radius
        );
    }
    if stats.silent_errors > 0 {
        print!("{text}");
        return Err(CliError::Invariant(format!(
            "{} silent errors within the decoding radius",
            stats.silent_errors
        )));
    }
    Ok(text)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Thresholds(a) => thresholds(a),
        Command::Bounds(a) => bounds(a),
        Command::Simulate(a) => simulate(a),
        Command::Roundtrip(a) => roundtrip(a),
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
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
