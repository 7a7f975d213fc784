//! Confidence sets `{beta : l(beta) <= chi2_{1,level}}`.
//!
//! The search starts at the root of the weighted estimating equation
//! `sum_t (Y_t - beta X_{t-1}) X_{t-1} / w(X_{t-1}) = 0`, where the scores
//! average to zero and `l = 0`. From there it steps outward (doubling) until
//! `l` exceeds the quantile, then brackets the crossing on each side. A
//! uniform scan around the result checks that the set really is an interval.

use serde::{Deserialize, Serialize};

use super::{check_level, el_from_scores, scores_from_pairs, ScoreVector};
use crate::chi2::chi_square_quantile;
use crate::{Error, InterceptMode, RegressionSample, Result, WeightSpec};

/// Number of points in the verification scan.
pub const SCAN_POINTS: usize = 512;

const ENDPOINT_TOL: f64 = 1e-10;
const SCAN_TOL: f64 = 1e-8;
const MAX_DOUBLINGS: usize = 2000;
const MAX_REFINE: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSet {
    /// Confidence level `b`.
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    /// Root of the weighted estimating equation, where `l = 0`.
    pub estimate: f64,
    /// The scan found a point inside `[lower, upper]` with `l` above the
    /// quantile, or a point outside with `l` below it: the set is not a
    /// single interval.
    pub disconnected_flag: bool,
    /// Every score vanishes at the estimate (a noiseless fit), so the set
    /// collapses to that single point.
    pub degenerate: bool,
}

impl ConfidenceSet {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, beta: f64) -> bool {
        self.lower <= beta && beta <= self.upper
    }
}

struct Profile<'a> {
    x: &'a [f64],
    y: &'a [f64],
    weight: WeightSpec,
    mode: InterceptMode,
}

impl Profile<'_> {
    fn stat(&self, beta: f64) -> Result<f64> {
        let z = scores_from_pairs(self.x, self.y, beta, self.weight);
        let r = el_from_scores(&ScoreVector { z, mode: self.mode })?;
        Ok(r.statistic.value())
    }
}

fn estimate_from_pairs(x: &[f64], y: &[f64], weight: WeightSpec) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&xt, &yt) in x.iter().zip(y) {
        let d = weight.damp(xt);
        num += yt * d;
        den += xt * d;
    }
    if den == 0.0 {
        return Err(Error::Degenerate("every predictor value used by the scores is zero".into()));
    }
    Ok(num / den)
}

/// Root of the weighted estimating equation; the statistic is zero there.
pub fn el_estimate(sample: &RegressionSample, weight: WeightSpec, mode: InterceptMode) -> Result<f64> {
    let (x, y) = sample.pairs(mode)?;
    estimate_from_pairs(&x, &y, weight)
}

/// Empirical-likelihood confidence set for the slope at level `confidence`.
pub fn confidence_set(
    sample: &RegressionSample,
    confidence: f64,
    weight: WeightSpec,
    mode: InterceptMode,
) -> Result<ConfidenceSet> {
    check_level(confidence)?;
    let (x, y) = sample.pairs(mode)?;
    let q = chi_square_quantile(confidence);
    let estimate = estimate_from_pairs(&x, &y, weight)?;
    let profile = Profile { x: &x, y: &y, weight, mode };

    let l0 = profile.stat(estimate)?;
    if !(l0 <= q) {
        return Err(Error::Degenerate(format!("statistic at the estimate is {l0}")));
    }

    // Sandwich-type scale for the first outward step.
    let z0 = scores_from_pairs(&x, &y, estimate, weight);
    let den: f64 = x.iter().map(|&xt| xt * weight.damp(xt)).sum();
    let spread = z0.iter().map(|z| z * z).sum::<f64>().sqrt() / den.abs();
    if spread == 0.0 {
        return Ok(ConfidenceSet {
            level: confidence,
            lower: estimate,
            upper: estimate,
            estimate,
            disconnected_flag: false,
            degenerate: true,
        });
    }
    let step = (spread * q.sqrt()).max(f64::EPSILON * estimate.abs());

    let upper = crossing(&profile, estimate, l0 - q, step, q)?;
    let lower = crossing(&profile, estimate, l0 - q, -step, q)?;

    let width = upper - lower;
    let (lo, hi) = (lower - width, upper + width);
    let mut disconnected_flag = false;
    for i in 0..SCAN_POINTS {
        let beta = lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
        let l = profile.stat(beta)?;
        let inside = beta > lower && beta < upper;
        let outside = beta < lower || beta > upper;
        if (inside && l > q + SCAN_TOL) || (outside && l < q - SCAN_TOL) {
            disconnected_flag = true;
            break;
        }
    }

    Ok(ConfidenceSet { level: confidence, lower, upper, estimate, disconnected_flag, degenerate: false })
}

/// Walks from `start` in the direction of `step` until `l - q` turns
/// positive, then refines the sign change to `|l - q| <= ENDPOINT_TOL`.
fn crossing(profile: &Profile<'_>, start: f64, f_start: f64, step: f64, q: f64) -> Result<f64> {
    let (mut a, mut fa) = (start, f_start);
    let mut s = step;
    let (mut b, mut fb) = (start, f_start);
    let mut found = false;
    for _ in 0..MAX_DOUBLINGS {
        b = start + s;
        if !b.is_finite() {
            break;
        }
        fb = profile.stat(b)? - q;
        if fb > 0.0 {
            found = true;
            break;
        }
        a = b;
        fa = fb;
        s *= 2.0;
    }
    if !found {
        return Err(Error::Degenerate("confidence set is unbounded".into()));
    }

    // Illinois false position; plain bisection while the outer value is
    // infinite (outside the hull).
    let mut side = 0i8;
    for _ in 0..MAX_REFINE {
        let c = if fb.is_finite() {
            let c = b - fb * (b - a) / (fb - fa);
            if c.is_finite() && (c - a) * (c - b) < 0.0 {
                c
            } else {
                0.5 * (a + b)
            }
        } else {
            0.5 * (a + b)
        };
        if c == a || c == b {
            break;
        }
        let fc = profile.stat(c)? - q;
        if fc.abs() <= ENDPOINT_TOL {
            return Ok(c);
        }
        if fc > 0.0 {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 && fb.is_finite() {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    // Bracket collapsed to adjacent floats: return the better side.
    Ok(if fb.is_finite() && fb.abs() < fa.abs() { b } else { a })
}
