use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use predreg::baseline::{fit_full_model, lse_beta};
use predreg::el::{confidence_set, el_test_at_significance, log_el_ratio, Statistic};
use predreg::experiment::{cell_seed, run_methods, ExperimentReport, MethodSettings};
use predreg::{InterceptMode, RegressionSample, WeightSpec};
use serde::Serialize;

use crate::grid::parse_grid;
use crate::report::{to_json, to_tsv};
use crate::series::SeriesFile;

pub fn mode_name(mode: InterceptMode) -> &'static str {
    match mode {
        InterceptMode::KnownIntercept => "known",
        InterceptMode::UnknownIntercept => "unknown",
    }
}

pub fn load_sample(path: &Path) -> Result<RegressionSample> {
    let file = SeriesFile::read(path)?;
    file.to_sample().with_context(|| format!("{}", path.display()))
}

fn aligned(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|p| p.0.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestOutput {
    pub n: usize,
    pub beta0: f64,
    /// Significance level.
    pub level: f64,
    pub mode: &'static str,
    pub h: f64,
    pub statistic: Statistic,
    pub p_value: f64,
    pub critical_value: f64,
    pub reject: bool,
    pub lambda: Option<f64>,
}

impl TestOutput {
    pub fn text(&self) -> String {
        aligned(&[
            ("n", self.n.to_string()),
            ("beta0", self.beta0.to_string()),
            ("level", self.level.to_string()),
            ("mode", self.mode.to_string()),
            ("h", self.h.to_string()),
            ("statistic", self.statistic.to_string()),
            ("p_value", self.p_value.to_string()),
            ("critical_value", self.critical_value.to_string()),
            ("decision", if self.reject { "reject".into() } else { "accept".into() }),
        ])
    }
}

pub fn run_test(sample: &RegressionSample, beta0: f64, level: f64, mode: InterceptMode, weight: WeightSpec) -> Result<TestOutput> {
    let decision = el_test_at_significance(sample, beta0, level, weight, mode)?;
    let detail = log_el_ratio(sample, beta0, weight, mode)?;
    Ok(TestOutput {
        n: sample.n(),
        beta0,
        level,
        mode: mode_name(mode),
        h: weight.h(),
        statistic: decision.statistic,
        p_value: decision.p_value,
        critical_value: decision.critical_value,
        reject: decision.reject,
        lambda: detail.lambda,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CiOutput {
    pub n: usize,
    /// Confidence level.
    pub level: f64,
    pub mode: &'static str,
    pub h: f64,
    pub lower: f64,
    pub upper: f64,
    pub estimate: f64,
    pub disconnected: bool,
    pub degenerate: bool,
    pub beta_lse: f64,
    pub sigma_ratio: f64,
}

impl CiOutput {
    pub fn text(&self) -> String {
        aligned(&[
            ("n", self.n.to_string()),
            ("level", self.level.to_string()),
            ("mode", self.mode.to_string()),
            ("h", self.h.to_string()),
            ("interval", format!("[{}, {}]", self.lower, self.upper)),
            ("estimate", self.estimate.to_string()),
            ("disconnected", self.disconnected.to_string()),
            ("degenerate", self.degenerate.to_string()),
            ("beta_lse", self.beta_lse.to_string()),
            ("sigma_v/sigma_u", self.sigma_ratio.to_string()),
        ])
    }
}

pub fn run_ci(sample: &RegressionSample, level: f64, mode: InterceptMode, weight: WeightSpec, lag_order: usize) -> Result<CiOutput> {
    let cs = confidence_set(sample, level, weight, mode)?;
    let fit = fit_full_model(sample, lag_order)?;
    Ok(CiOutput {
        n: sample.n(),
        level,
        mode: mode_name(mode),
        h: weight.h(),
        lower: cs.lower,
        upper: cs.upper,
        estimate: cs.estimate,
        disconnected: cs.disconnected_flag,
        degenerate: cs.degenerate,
        beta_lse: lse_beta(sample)?,
        sigma_ratio: fit.sigma_ratio(),
    })
}

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub reps: usize,
    pub seed: u64,
    pub settings: MethodSettings,
}

/// Runs every cell of a grid. Validation of the grid and options happens
/// before any simulation starts.
pub fn run_simulate(grid_text: &str, opts: &SimulateOptions) -> Result<Vec<ExperimentReport>> {
    if opts.reps < 100 {
        bail!("--reps must be at least 100, got {}", opts.reps);
    }
    if opts.settings.resamples < 100 {
        bail!("--resamples must be at least 100, got {}", opts.settings.resamples);
    }
    let grid = parse_grid(grid_text)?;
    let mut out = Vec::new();
    for line in &grid {
        let seed = cell_seed(opts.seed, &line.cell);
        out.extend(run_methods(&line.cell, &line.methods, line.level, opts.reps, seed, &opts.settings)?);
    }
    Ok(out)
}

/// `<prefix>.tsv` and `<prefix>.json`.
pub fn output_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let base = prefix.to_string_lossy();
    let base = base.strip_suffix(".tsv").or_else(|| base.strip_suffix(".json")).unwrap_or(&base).to_string();
    (PathBuf::from(format!("{base}.tsv")), PathBuf::from(format!("{base}.json")))
}

pub fn write_reports(prefix: &Path, reports: &[ExperimentReport]) -> Result<(PathBuf, PathBuf)> {
    let (tsv, json) = output_paths(prefix);
    std::fs::write(&tsv, to_tsv(reports)).with_context(|| format!("writing {}", tsv.display()))?;
    std::fs::write(&json, to_json(reports)).with_context(|| format!("writing {}", json.display()))?;
    Ok((tsv, json))
}
