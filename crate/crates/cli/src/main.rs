use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use predreg::dgp::{gen_sample, DgpConfig};
use predreg::experiment::MethodSettings;
use predreg::{InterceptMode, WeightSpec};
use predreg_cli::commands::{load_sample, run_ci, run_simulate, run_test, write_reports, SimulateOptions};
use predreg_cli::series::SeriesFile;

#[derive(Parser)]
#[command(name = "predreg", version, about = "Empirical-likelihood inference for predictive regressions")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Known,
    Unknown,
}

impl From<Mode> for InterceptMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Known => InterceptMode::KnownIntercept,
            Mode::Unknown => InterceptMode::UnknownIntercept,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Test H0: beta = beta0 on a date,y,x CSV file.
    Test {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta0: f64,
        /// Significance level.
        #[arg(long, default_value_t = 0.10)]
        level: f64,
        #[arg(long, value_enum, default_value = "unknown")]
        mode: Mode,
        /// Weight exponent h in w(t) = (1 + |t|^h)^(1/h).
        #[arg(long, default_value_t = 2.0)]
        h: f64,
        /// Print JSON instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Confidence interval for beta, with the least-squares slope and sigma_V/sigma_U.
    Ci {
        file: PathBuf,
        /// Confidence level.
        #[arg(long, default_value_t = 0.90)]
        level: f64,
        #[arg(long, value_enum, default_value = "unknown")]
        mode: Mode,
        #[arg(long, default_value_t = 2.0)]
        h: f64,
        /// AR order of the predictor errors for the sigma ratio.
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a size/power grid and write <out>.tsv and <out>.json.
    Simulate {
        grid: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Bootstrap resamples for the NA method.
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        /// AR order the bootstrap fits.
        #[arg(long, default_value_t = 1)]
        lag_order: usize,
        #[arg(long, default_value_t = 2.0)]
        h: f64,
        /// Also print the reports as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Write one seeded sample of the simulation design as a date,y,x CSV.
    Generate {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[arg(long, default_value_t = 4.0)]
        nu: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b1: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring thread pool")?;
    }
    match cli.command {
        Command::Test { file, beta0, level, mode, h, json } => {
            let sample = load_sample(&file)?;
            let out = run_test(&sample, beta0, level, mode.into(), WeightSpec::new(h)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                print!("{}", out.text());
            }
        }
        Command::Ci { file, level, mode, h, p, json } => {
            let sample = load_sample(&file)?;
            let out = run_ci(&sample, level, mode.into(), WeightSpec::new(h)?, p)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                print!("{}", out.text());
            }
        }
        Command::Simulate { grid, reps, seed, out, resamples, lag_order, h, json } => {
            let text = std::fs::read_to_string(&grid).with_context(|| format!("reading {}", grid.display()))?;
            let settings = MethodSettings { weight: WeightSpec::new(h)?, resamples, lag_order };
            let reports = run_simulate(&text, &SimulateOptions { reps, seed, settings })?;
            let (tsv, js) = write_reports(&out, &reports)?;
            if json {
                println!("{}", predreg_cli::report::to_json(&reports));
            } else {
                print!("{}", predreg_cli::report::to_tsv(&reports));
            }
            eprintln!("wrote {} and {}", tsv.display(), js.display());
        }
        Command::Generate { a, phi, nu, b1, n, seed, out } => {
            let sample = gen_sample(&DgpConfig::table_cell(a, phi, nu, b1, n).with_seed(seed))?;
            let file = std::fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            SeriesFile::from_sample(&sample).write_csv(file)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
