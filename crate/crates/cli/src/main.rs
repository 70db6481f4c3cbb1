//! Batch experiment runner: selects a case study and inference algorithm,
//! runs it, and writes posterior draws plus a summary for external
//! plotting.
//!
//! Exit codes: 0 success, 1 runtime inference error, 2 configuration error.

mod config;
mod output;
mod runner;

use clap::{Args, Parser, Subcommand};
use config::{ExperimentConfig, Study};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "stocond", about = "Experiment runner for inference with stochastic conditioning", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write draws plus a summary.
    Run(RunArgs),
    /// Check a configuration and list violations without running.
    Validate(RunArgs),
    /// Golden-data maintenance.
    Golden {
        #[command(subcommand)]
        action: GoldenAction,
    },
}

#[derive(Subcommand)]
enum GoldenAction {
    /// Regenerate the committed golden data files from their seeds.
    Regenerate {
        /// Output directory for the regenerated files.
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` configuration file; flags override file entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    study: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    draws: Option<u32>,
    #[arg(long = "burn-in")]
    burn_in: Option<u32>,
    /// Monte Carlo draws per log-likelihood estimate.
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: $STOCOND_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Draws file format: csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long = "step-size")]
    step_size: Option<f64>,
    #[arg(long)]
    friction: Option<f64>,
    #[arg(long)]
    leapfrog: Option<u32>,
    #[arg(long = "grad-draws")]
    grad_draws: Option<u32>,
    #[arg(long)]
    thin: Option<u32>,
    #[arg(long = "proposal-scale")]
    proposal_scale: Option<f64>,
    #[arg(long)]
    particles: Option<u32>,
    #[arg(long)]
    iterations: Option<u32>,
    #[arg(long)]
    batch: Option<u32>,
    #[arg(long = "learning-rate")]
    learning_rate: Option<f64>,
    #[arg(long = "lake-size")]
    lake_size: Option<u32>,
    #[arg(long)]
    temperature: Option<f64>,
    /// Summary-table sample for the population study: 1 or 2.
    #[arg(long)]
    sample: Option<u8>,
    #[arg(long)]
    days: Option<u32>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "predictive-reps")]
    predictive_reps: Option<u32>,
    #[arg(long)]
    episodes: Option<u32>,
}

impl RunArgs {
    /// Merge the config file (if any) and flag overrides into a full
    /// configuration. Returns the config and whether `study` was given.
    fn build(&self) -> Result<(ExperimentConfig, bool), String> {
        let mut cfg = ExperimentConfig::default();
        let mut study_given = false;
        if let Some(path) = &self.config {
            let before = cfg.study;
            cfg.apply_file(path)?;
            // Any study key in the file counts as provided.
            study_given = std::fs::read_to_string(path)
                .map(|t| t.lines().any(|l| l.trim_start().starts_with("study")))
                .unwrap_or(false)
                || cfg.study != before;
        }
        macro_rules! set {
            ($field:ident, $key:literal) => {
                if let Some(v) = &self.$field {
                    cfg.apply_kv($key, &v.to_string())?;
                }
            };
        }
        if let Some(study) = &self.study {
            cfg.apply_kv("study", study)?;
            study_given = true;
        }
        set!(variant, "variant");
        set!(algorithm, "algorithm");
        set!(draws, "draws");
        set!(burn_in, "burn_in");
        set!(n, "N");
        set!(seed, "seed");
        set!(format, "format");
        set!(step_size, "step_size");
        set!(friction, "friction");
        set!(leapfrog, "leapfrog");
        set!(grad_draws, "grad_draws");
        set!(thin, "thin");
        set!(proposal_scale, "proposal_scale");
        set!(particles, "particles");
        set!(iterations, "iterations");
        set!(batch, "batch");
        set!(learning_rate, "learning_rate");
        set!(lake_size, "lake_size");
        set!(temperature, "temperature");
        set!(sample, "sample");
        set!(days, "days");
        set!(theta, "theta");
        set!(predictive_reps, "predictive_reps");
        set!(episodes, "episodes");
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        Ok((cfg, study_given))
    }
}

fn violations_of(cfg: &ExperimentConfig, study_given: bool) -> Vec<String> {
    let mut violations = Vec::new();
    if !study_given {
        violations.push("missing required flag: --study".to_string());
    }
    violations.extend(cfg.validate());
    // SGHMC needs a differentiable target; the sailing rollout is not.
    if study_given
        && cfg.study == Study::Sailing
        && cfg.algorithm == config::Algorithm::Sghmc
    {
        violations.push(
            "the sailing study has a non-differentiable likelihood; use pmmh, is or bbvi"
                .to_string(),
        );
    }
    violations
}

fn cmd_run(args: &RunArgs) -> ExitCode {
    let (cfg, study_given) = match args.build() {
        Ok(v) => v,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    let violations = violations_of(&cfg, study_given);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("configuration error: {v}");
        }
        return ExitCode::from(2);
    }
    match runner::execute(&cfg) {
        Ok(result) => {
            if result.stuck {
                eprintln!("warning: chain accepted no proposals over the full run");
            }
            match output::write_outputs(&result, &cfg.out, cfg.format, runner::config_echo(&cfg))
            {
                Ok((draws, summary)) => {
                    println!("draws:   {}", draws.display());
                    println!("summary: {}", summary.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("output error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("inference error: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_validate(args: &RunArgs) -> ExitCode {
    let (cfg, study_given) = match args.build() {
        Ok(v) => v,
        Err(e) => {
            println!("{e}");
            return ExitCode::from(2);
        }
    };
    let violations = violations_of(&cfg, study_given);
    if violations.is_empty() {
        println!("configuration ok");
        ExitCode::SUCCESS
    } else {
        for v in &violations {
            println!("{v}");
        }
        ExitCode::from(2)
    }
}

fn cmd_golden_regenerate(out: &PathBuf) -> ExitCode {
    use stocond::studies::{commute, sailing};
    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("cannot create {}: {e}", out.display());
        return ExitCode::from(1);
    }
    let data = commute::simulate_commute(
        commute::GOLDEN_DAYS,
        commute::GOLDEN_PARAMS,
        false,
        &mut stocond::RandomSource::new(commute::GOLDEN_SEED),
    );
    let commute_path = out.join("commute_golden.csv");
    if let Err(e) = std::fs::write(&commute_path, data.to_csv()) {
        eprintln!("cannot write {}: {e}", commute_path.display());
        return ExitCode::from(1);
    }
    println!("wrote {}", commute_path.display());
    let mut table = String::from("lake,expected_start_cost\n");
    for lake in [25usize, 50, 100] {
        match sailing::value_iteration(lake, &sailing::SailingParams::default(), 1e-9, 100_000) {
            Ok(vt) => {
                table.push_str(&format!("{},{}\n", lake, vt.expected_start_cost()));
                println!("lake {lake}: optimal expected start cost {}", vt.expected_start_cost());
            }
            Err(e) => {
                eprintln!("value iteration failed for lake {lake}: {e}");
                return ExitCode::from(1);
            }
        }
    }
    let sailing_path = out.join("sailing_optimal_costs.csv");
    if let Err(e) = std::fs::write(&sailing_path, table) {
        eprintln!("cannot write {}: {e}", sailing_path.display());
        return ExitCode::from(1);
    }
    println!("wrote {}", sailing_path.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Golden { action } => match action {
            GoldenAction::Regenerate { out } => cmd_golden_regenerate(out),
        },
    }
}
