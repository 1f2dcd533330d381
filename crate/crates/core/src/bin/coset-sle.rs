//! Command-line front end: `params`, `crossing` and `mc`.
//!
//! Results go to stdout (or `--out`), errors to stderr as one JSON object.
//! Exit codes: 0 success, 2 usage or domain error, 3 numerical failure,
//! 1 I/O failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use coset_sle::algebra::{model_params, Family};
use coset_sle::crossing::{crossing_grid, crossing_probability, parse_grid, write_grid_csv};
use coset_sle::driving::{DriftMode, NoiseMode};
use coset_sle::io::{append_samples_csv, write_json, RunManifest};
use coset_sle::mc::{run_experiment, ExperimentConfig, ExperimentKind};
use coset_sle::numerics::DfConfig;
use coset_sle::partition::TwoSleChannel;
use coset_sle::{Error, Result};

const SEED_ENV: &str = "COSET_SLE_SEED";

#[derive(Parser)]
#[command(name = "coset-sle", version, about = "Multiple SLE for coset WZW models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print kappa, tau and the central charge of a model.
    Params(ModelArgs),
    /// Crossing probabilities at one cross ratio (JSON) or on a grid (CSV).
    Crossing(CrossingArgs),
    /// Run a Monte-Carlo experiment.
    Mc(Box<McArgs>),
}

#[derive(Args)]
struct ModelArgs {
    /// parafermion or su2k
    #[arg(long)]
    model: String,
    #[arg(long)]
    level: u32,
}

#[derive(Args)]
struct CrossingArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Cross ratio in (0, 1).
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    x: Option<f64>,
    /// Grid `A:B:S`; writes CSV.
    #[arg(long)]
    grid: Option<String>,
    /// Dotsenko-Fateev cutoff epsilon.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Upper limit of the Dotsenko-Fateev v integral.
    #[arg(long)]
    vmax: Option<f64>,
    /// Gauss-Legendre nodes per panel and axis.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct McArgs {
    /// two-sle, three-sle, bessel or prob-martingale
    #[arg(long)]
    experiment: Option<String>,
    /// JSON file with an experiment configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, requires = "model")]
    level: Option<u32>,
    #[arg(long)]
    samples: Option<u64>,
    /// First sample index, to extend an earlier run.
    #[arg(long)]
    offset: Option<u64>,
    /// Falls back to the config file, then to COSET_SLE_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Result JSON path; a manifest goes next to it. Stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append per-sample outcomes to this CSV.
    #[arg(long)]
    samples_csv: Option<PathBuf>,
    /// identity, fused or unphysical (2-SLE experiments).
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    allow_unphysical: bool,
    /// Cross ratio for 3-SLE experiments.
    #[arg(long)]
    x: Option<f64>,
    /// Initial tips, comma separated.
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<f64>>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    adaptive_c: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_steps: Option<u64>,
    /// Switch off the partition-function drift.
    #[arg(long)]
    zero_drift: bool,
    /// Switch off the Brownian noise.
    #[arg(long)]
    no_noise: bool,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
}

fn family(args: &ModelArgs) -> Result<Family> {
    let f = Family::from_name(&args.model, args.level)?;
    model_params(f)?;
    Ok(f)
}

fn df_config(cutoff: Option<f64>, vmax: Option<f64>, nodes: Option<usize>, base: DfConfig) -> Result<DfConfig> {
    let mut cfg = base;
    if let Some(e) = cutoff {
        cfg.cutoff_epsilon = e;
    }
    if let Some(v) = vmax {
        cfg.v_max = v;
    }
    if let Some(m) = nodes {
        cfg.nodes_per_axis = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_json(value: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn params(args: &ModelArgs) -> Result<()> {
    let m = model_params(family(args)?)?;
    print_json(&json!({
        "model": m.family.name(),
        "level": m.level(),
        "kappa": m.kappa,
        "tau": m.tau,
        "central_charge": m.central_charge,
        "kappa_exact": m.kappa_exact().to_string(),
        "tau_exact": m.tau_exact().to_string(),
        "central_charge_exact": m.central_charge_exact().to_string(),
        "bcc_weight": m.bcc_weight(),
        "fused_weight": m.fused_weight(),
    }))
}

fn crossing(args: &CrossingArgs) -> Result<()> {
    let model = model_params(family(&args.model)?)?;
    let cfg = df_config(args.cutoff, args.vmax, args.nodes, DfConfig::default())?;
    match (&args.grid, args.x) {
        (Some(grid), _) => {
            let rows = crossing_grid(&model, &parse_grid(grid)?, &cfg)?;
            write_grid_csv(&rows, std::io::stdout().lock())
        }
        (None, Some(x)) => print_json(&serde_json::to_value(crossing_probability(&model, x, &cfg)?)?),
        (None, None) => Err(Error::domain("either --x or --grid is required")),
    }
}

/// Defaults, then the config file, then flags.
fn effective_config(args: &McArgs) -> Result<ExperimentConfig> {
    let file: Option<Value> = match &args.config {
        Some(path) => Some(serde_json::from_str(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let mut cfg: ExperimentConfig = match &file {
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::domain(format!("invalid config file: {e}")))?,
        None => ExperimentConfig::default(),
    };
    let seed_in_file = file.as_ref().is_some_and(|v| v.get("seed").is_some());
    if let Some(name) = &args.experiment {
        cfg.experiment = ExperimentKind::from_name(name)?;
        if args.config.is_none() && cfg.experiment == ExperimentKind::ThreeSle {
            cfg = ExperimentConfig::three_sle(cfg.model, cfg.cross_ratio);
        }
    }
    if let Some(model) = &args.model {
        let level = args
            .level
            .ok_or_else(|| Error::domain("--model needs --level"))?;
        cfg.model = Family::from_name(model, level)?;
    }
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if let Some(v) = args.offset {
        cfg.sample_offset = v;
    }
    match (args.seed, seed_in_file) {
        (Some(s), _) => cfg.seed = s,
        (None, true) => {}
        (None, false) => {
            if let Ok(s) = std::env::var(SEED_ENV) {
                cfg.seed = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::domain(format!("{SEED_ENV}={s} is not an unsigned integer")))?;
            }
        }
    }
    if let Some(v) = args.jobs {
        cfg.jobs = v;
    }
    if let Some(c) = &args.channel {
        cfg.channel = TwoSleChannel::from_name(c)?;
    }
    if args.allow_unphysical {
        cfg.allow_unphysical = true;
    }
    if let Some(x) = args.x {
        cfg.cross_ratio = x;
        cfg.positions.clear();
    }
    if let Some(p) = &args.positions {
        cfg.positions = p.clone();
    }
    if let Some(v) = args.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = args.dt {
        cfg.dt = v;
    }
    if let Some(v) = args.adaptive_c {
        cfg.adaptive_c = v;
    }
    if let Some(v) = args.epsilon {
        cfg.epsilon_collision = Some(v);
    }
    if let Some(v) = args.max_steps {
        cfg.max_steps = v;
    }
    if args.zero_drift {
        cfg.drift = DriftMode::Zeroed;
    }
    if args.no_noise {
        cfg.noise = NoiseMode::Off;
    }
    cfg.df = df_config(args.cutoff, None, args.nodes, cfg.df)?;
    cfg.validate()?;
    Ok(cfg)
}

fn mc(args: &McArgs) -> Result<()> {
    let cfg = effective_config(args)?;
    if let Some(out) = &args.out {
        let mut outputs = vec![out.clone()];
        outputs.extend(args.samples_csv.iter().cloned());
        let command: Vec<String> = std::env::args().collect();
        RunManifest::new(&command.join(" "), &cfg, Some(cfg.seed), outputs)?.write(&RunManifest::path_for(out))?;
    }
    let (record, outcomes) = run_experiment(&cfg)?;
    if let Some(path) = &args.samples_csv {
        append_samples_csv(path, cfg.sample_offset, &outcomes)?;
    }
    match &args.out {
        Some(out) => write_json(out, &record),
        None => print_json(&serde_json::to_value(&record)?),
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({ "error": { "kind": kind, "message": message, "exit_code": code } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim(), 2),
    };
    let result = match &cli.command {
        Command::Params(a) => params(a),
        Command::Crossing(a) => crossing(a),
        Command::Mc(a) => mc(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string(), e.exit_code() as u8),
    }
}
