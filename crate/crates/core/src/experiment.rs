//! Monte Carlo size/power experiments over DGP cells.
//!
//! Replication `r` of a cell draws everything (the sample and any bootstrap
//! seed) from [`stream_rng`]`(cell_seed, r)`. Results are collected in
//! replication order and reduced with integer counts, so a report depends
//! only on its inputs, not on scheduling or thread count. All methods in a
//! cell see the same samples.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::bootstrap_lse_test;
use crate::dgp::{stream_rng, Dgp, DgpConfig};
use crate::el::el_test_at_significance;
use crate::{Error, InterceptMode, RegressionSample, Result, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Empirical likelihood on the levels (intercept known).
    #[serde(rename = "EL1")]
    El1,
    /// Empirical likelihood on half-sample differences (intercept unknown).
    #[serde(rename = "EL2")]
    El2,
    /// Residual bootstrap of the least-squares slope.
    #[serde(rename = "NA")]
    Bootstrap,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::El1, Method::El2, Method::Bootstrap];

    pub fn name(self) -> &'static str {
        match self {
            Method::El1 => "EL1",
            Method::El2 => "EL2",
            Method::Bootstrap => "NA",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EL1" => Ok(Method::El1),
            "EL2" => Ok(Method::El2),
            "NA" | "BOOT" | "BOOTSTRAP" => Ok(Method::Bootstrap),
            other => Err(Error::invalid(format!("unknown method {other:?} (expected EL1, EL2 or NA)"))),
        }
    }
}

/// A design point `(a, phi, nu, b1, n)` of the simulation tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub a: f64,
    pub phi: f64,
    pub nu: f64,
    pub b1: f64,
    pub n: usize,
}

impl Cell {
    pub fn new(a: f64, phi: f64, nu: f64, b1: f64, n: usize) -> Self {
        Self { a, phi, nu, b1, n }
    }

    pub fn config(&self) -> DgpConfig {
        DgpConfig::table_cell(self.a, self.phi, self.nu, self.b1, self.n)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{}) n={}", self.a, self.phi, self.nu, self.b1, self.n)
    }
}

/// Seed for `cell` derived from a run seed and the cell's parameters, so a
/// cell gets the same replications whichever grid it appears in.
pub fn cell_seed(seed: u64, cell: &Cell) -> u64 {
    fn mix(mut z: u64) -> u64 {
        // SplitMix64 finaliser.
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    [cell.a.to_bits(), cell.phi.to_bits(), cell.nu.to_bits(), cell.b1.to_bits(), cell.n as u64]
        .into_iter()
        .fold(mix(seed), |h, v| mix(h ^ v))
}

/// Everything a method needs besides the sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSettings {
    pub weight: WeightSpec,
    /// Bootstrap resamples per replication.
    pub resamples: usize,
    /// AR order used by the bootstrap's model fit.
    pub lag_order: usize,
}

impl Default for MethodSettings {
    fn default() -> Self {
        Self { weight: WeightSpec::default(), resamples: 1000, lag_order: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub a: f64,
    pub phi: f64,
    pub nu: f64,
    pub b1: f64,
    pub n: usize,
    pub method: String,
    /// Significance level of the test.
    pub level: f64,
    pub replications: usize,
    pub rejections: usize,
    /// Rejections over the replications that completed.
    pub frequency: f64,
    /// `sqrt(p (1 - p) / R)` over completed replications.
    pub se: f64,
    /// Replications whose test returned an error; excluded from the frequency.
    pub anomalies: usize,
}

impl ExperimentReport {
    fn from_outcomes(cell: &Cell, method: &str, level: f64, outcomes: &[Option<bool>]) -> Self {
        let anomalies = outcomes.iter().filter(|o| o.is_none()).count();
        let rejections = outcomes.iter().filter(|o| **o == Some(true)).count();
        let valid = outcomes.len() - anomalies;
        let (frequency, se) = if valid == 0 {
            (0.0, 0.0)
        } else {
            let p = rejections as f64 / valid as f64;
            (p, (p * (1.0 - p) / valid as f64).sqrt())
        };
        Self {
            a: cell.a,
            phi: cell.phi,
            nu: cell.nu,
            b1: cell.b1,
            n: cell.n,
            method: method.to_string(),
            level,
            replications: outcomes.len(),
            rejections,
            frequency,
            se,
            anomalies,
        }
    }
}

/// Runs `rule` on `replications` samples of `cell` and tallies rejections.
///
/// `rule` gets the sample and the replication's generator (positioned just
/// after the sample draw) for any randomness of its own. Errors are counted
/// as anomalies.
pub fn run_with<F>(cell: &Cell, replications: usize, seed: u64, name: &str, level: f64, rule: F) -> Result<ExperimentReport>
where
    F: Fn(&RegressionSample, &mut rand_chacha::ChaCha8Rng) -> Result<bool> + Sync,
{
    if replications < 100 {
        return Err(Error::invalid(format!("need at least 100 replications, got {replications}")));
    }
    let dgp = Dgp::new(cell.config())?;
    let outcomes: Vec<Option<bool>> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r);
            let sample = dgp.sample_with(&mut rng);
            rule(&sample, &mut rng).ok()
        })
        .collect();
    Ok(ExperimentReport::from_outcomes(cell, name, level, &outcomes))
}

/// Decision of `method` for `H0: beta = 0` at significance `level`.
pub fn method_rejects<R: Rng>(
    method: Method,
    sample: &RegressionSample,
    level: f64,
    settings: &MethodSettings,
    rng: &mut R,
) -> Result<bool> {
    match method {
        Method::El1 => Ok(el_test_at_significance(sample, 0.0, level, settings.weight, InterceptMode::KnownIntercept)?.reject),
        Method::El2 => Ok(el_test_at_significance(sample, 0.0, level, settings.weight, InterceptMode::UnknownIntercept)?.reject),
        Method::Bootstrap => {
            let boot_seed = rng.random::<u64>();
            Ok(bootstrap_lse_test(sample, 0.0, settings.lag_order, level, settings.resamples, boot_seed)?.reject)
        }
    }
}

/// Rejection frequency of `method` testing `beta = 0` at significance
/// `level` over `replications` seeded draws of `cell`.
pub fn run_experiment(
    cell: &Cell,
    method: Method,
    level: f64,
    replications: usize,
    seed: u64,
    settings: &MethodSettings,
) -> Result<ExperimentReport> {
    crate::el::check_level(level)?;
    run_with(cell, replications, seed, method.name(), level, |s, rng| method_rejects(method, s, level, settings, rng))
}

/// Runs several methods on the same replications of `cell`.
pub fn run_methods(
    cell: &Cell,
    methods: &[Method],
    level: f64,
    replications: usize,
    seed: u64,
    settings: &MethodSettings,
) -> Result<Vec<ExperimentReport>> {
    crate::el::check_level(level)?;
    if replications < 100 {
        return Err(Error::invalid(format!("need at least 100 replications, got {replications}")));
    }
    let dgp = Dgp::new(cell.config())?;
    let outcomes: Vec<Vec<Option<bool>>> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r);
            let sample = dgp.sample_with(&mut rng);
            methods
                .iter()
                .map(|&m| {
                    // Each method gets its own child so adding a method never
                    // changes another's randomness.
                    let mut mrng = stream_rng(rng.random::<u64>() ^ (m as u64), r);
                    method_rejects(m, &sample, level, settings, &mut mrng).ok()
                })
                .collect()
        })
        .collect();
    Ok(methods
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let column: Vec<Option<bool>> = outcomes.iter().map(|row| row[k]).collect();
            ExperimentReport::from_outcomes(cell, m.name(), level, &column)
        })
        .collect())
}
