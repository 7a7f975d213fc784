//! Weighted empirical likelihood for the predictive-regression slope.
//!
//! For a hypothesised slope `beta` the score of pair `t` is
//!
//! ```text
//! z_t(beta) = (Y_t - beta X_{t-1}) * X_{t-1} / w(X_{t-1})
//! ```
//!
//! (on the half-sample differences when the intercept is unknown), and the
//! log-EL ratio is `l(beta) = 2 sum_t log(1 + lambda z_t)` with `lambda`
//! from [`solve_lagrange`]. When zero is outside the convex hull of the
//! scores the statistic is [`Statistic::OutsideHull`], which rejects at every
//! level and never belongs to a confidence set.

mod dual;
mod interval;

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::chi2::{chi_square_isf, chi_square_quantile, chi_square_sf};
use crate::{Error, InterceptMode, RegressionSample, Result, WeightSpec};

pub use dual::{solve_lagrange, DualSolution};
pub use interval::{confidence_set, el_estimate, ConfidenceSet, SCAN_POINTS};

/// Scores `z_t(beta)` for one hypothesised slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub z: Vec<f64>,
    pub mode: InterceptMode,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Evaluates the weighted scores at `beta`.
pub fn weighted_scores(
    sample: &RegressionSample,
    beta: f64,
    weight: WeightSpec,
    mode: InterceptMode,
) -> Result<ScoreVector> {
    if !beta.is_finite() {
        return Err(Error::invalid(format!("beta must be finite, got {beta}")));
    }
    let (x, y) = sample.pairs(mode)?;
    Ok(ScoreVector { z: scores_from_pairs(&x, &y, beta, weight), mode })
}

pub(crate) fn scores_from_pairs(x: &[f64], y: &[f64], beta: f64, weight: WeightSpec) -> Vec<f64> {
    x.iter()
        .zip(y)
        .map(|(&xt, &yt)| (yt - beta * xt) * weight.damp(xt))
        .collect()
}

/// Value of the log-EL ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistic {
    Finite(f64),
    /// Zero lies outside the convex hull of the scores.
    OutsideHull,
}

impl Statistic {
    /// The statistic as a float, `+inf` outside the hull.
    pub fn value(&self) -> f64 {
        match *self {
            Statistic::Finite(v) => v,
            Statistic::OutsideHull => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Statistic::Finite(_))
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Finite(v) => write!(f, "{v}"),
            Statistic::OutsideHull => f.write_str("inf"),
        }
    }
}

impl Serialize for Statistic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Statistic::Finite(v) => s.serialize_f64(v),
            Statistic::OutsideHull => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Statistic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Statistic::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Statistic::OutsideHull),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unexpected statistic {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElResult {
    pub statistic: Statistic,
    /// Lagrange multiplier; `None` outside the hull.
    pub lambda: Option<f64>,
    pub hull_ok: bool,
    pub p_value: f64,
    pub mode: InterceptMode,
}

/// Statistic for already-computed scores.
pub fn el_from_scores(scores: &ScoreVector) -> Result<ElResult> {
    let solution = solve_lagrange(&scores.z)?;
    Ok(match solution {
        DualSolution::OutsideHull => ElResult {
            statistic: Statistic::OutsideHull,
            lambda: None,
            hull_ok: false,
            p_value: 0.0,
            mode: scores.mode,
        },
        DualSolution::Interior { lambda, .. } => {
            let stat = if lambda == 0.0 {
                0.0
            } else {
                let s: f64 = scores.z.iter().map(|&z| (lambda * z).ln_1p()).sum();
                // Rounding can leave a tiny negative sum at the minimiser.
                (2.0 * s).max(0.0)
            };
            ElResult {
                statistic: Statistic::Finite(stat),
                lambda: Some(lambda),
                hull_ok: true,
                p_value: chi_square_sf(stat),
                mode: scores.mode,
            }
        }
    })
}

/// `l(beta)`: the log-EL ratio at `beta` with its chi-square p-value.
pub fn log_el_ratio(
    sample: &RegressionSample,
    beta: f64,
    weight: WeightSpec,
    mode: InterceptMode,
) -> Result<ElResult> {
    el_from_scores(&weighted_scores(sample, beta, weight, mode)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDecision {
    pub reject: bool,
    pub statistic: Statistic,
    pub p_value: f64,
    /// The chi-square critical value the statistic was compared with.
    pub critical_value: f64,
}

/// Tests `H0: beta = beta0` at confidence level `confidence`
/// (e.g. 0.90 compares the statistic with the 90% chi-square quantile).
pub fn el_test(
    sample: &RegressionSample,
    beta0: f64,
    confidence: f64,
    weight: WeightSpec,
    mode: InterceptMode,
) -> Result<TestDecision> {
    check_level(confidence)?;
    let r = log_el_ratio(sample, beta0, weight, mode)?;
    let critical_value = chi_square_quantile(confidence);
    Ok(decide(&r, critical_value))
}

/// Same as [`el_test`] but parameterised by the significance level
/// (the size of the test), e.g. 0.10.
pub fn el_test_at_significance(
    sample: &RegressionSample,
    beta0: f64,
    significance: f64,
    weight: WeightSpec,
    mode: InterceptMode,
) -> Result<TestDecision> {
    check_level(significance)?;
    let r = log_el_ratio(sample, beta0, weight, mode)?;
    Ok(decide(&r, chi_square_isf(significance)))
}

fn decide(r: &ElResult, critical_value: f64) -> TestDecision {
    TestDecision {
        reject: r.statistic.value() > critical_value,
        statistic: r.statistic,
        p_value: r.p_value,
        critical_value,
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("level must lie in (0, 1), got {level}")))
    }
}
