//! Least-squares baseline: the closed-form slope estimator, a full fit of
//! the two-equation model with AR(p) predictor errors, and a residual
//! bootstrap test built on them.
//!
//! The bootstrap is known to be inconsistent when the predictor is nearly
//! integrated or has infinite variance; it is here as the comparison method.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dgp::stream_rng;
use crate::{Error, RegressionSample, Result};

/// Least-squares slope of `Y_t` on `(1, X_{t-1})`.
pub fn lse_beta(sample: &RegressionSample) -> Result<f64> {
    lse_slope(sample.lagged_x(), sample.y())
}

pub(crate) fn lse_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    debug_assert_eq!(x.len(), y.len());
    if x.len() < 2 || x.iter().all(|&v| v == x[0]) {
        return Err(Error::Degenerate("predictor is constant".into()));
    }
    // Centred form of (n Sxy - Sx Sy) / (n Sxx - Sx^2).
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&xt, &yt) in x.iter().zip(y) {
        let dx = xt - mx;
        sxy += dx * (yt - my);
        sxx += dx * dx;
    }
    if !(sxx > 0.0) || !sxy.is_finite() {
        return Err(Error::Degenerate("predictor has no usable variation".into()));
    }
    Ok(sxy / sxx)
}

/// Ordinary least squares through a thin QR factorisation.
/// Returns the coefficients and residuals.
fn ols(design: &DMatrix<f64>, response: &DVector<f64>, what: &'static str) -> Result<(DVector<f64>, DVector<f64>)> {
    let qr = design.clone().qr();
    let r = qr.r();
    let diag_max = r.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(diag_max > 0.0) || r.diagonal().iter().any(|v| v.abs() <= 1e-12 * diag_max) {
        return Err(Error::RankDeficient(what));
    }
    let qtb = qr.q().transpose() * response;
    let coef = r.solve_upper_triangular(&qtb).ok_or(Error::RankDeficient(what))?;
    let resid = response - design * &coef;
    Ok((coef, resid))
}

fn with_intercept(x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), 2, |i, j| if j == 0 { 1.0 } else { x[i] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LseFit {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub theta_hat: f64,
    pub phi_hat: f64,
    pub b_hat: Vec<f64>,
    /// `U_1..U_n` residuals of the `Y` equation.
    pub u_resid: Vec<f64>,
    /// `V_{p+1}..V_n` residuals of the AR(p) error fit.
    pub v_resid: Vec<f64>,
    pub sigma_u_hat: f64,
    pub sigma_v_hat: f64,
}

impl LseFit {
    pub fn lag_order(&self) -> usize {
        self.b_hat.len()
    }

    /// `sigma_V / sigma_U`.
    pub fn sigma_ratio(&self) -> f64 {
        self.sigma_v_hat / self.sigma_u_hat
    }

    /// Time-aligned residual pairs `(U_t, V_t)` for `t = p+1..n`.
    pub fn residual_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u_resid[self.lag_order()..].iter().copied().zip(self.v_resid.iter().copied())
    }
}

/// Fits `Y_t` on `(1, X_{t-1})`, `X_t` on `(1, X_{t-1})`, then an AR(p)
/// without intercept to the `X`-equation residuals.
///
/// Residual standard deviations use `SSR / (rows - parameters)`.
pub fn fit_full_model(sample: &RegressionSample, p: usize) -> Result<LseFit> {
    let n = sample.n();
    if n <= p + 3 {
        return Err(Error::invalid(format!("need n > p + 3 (n = {n}, p = {p})")));
    }
    let xlag = sample.lagged_x();
    let design = with_intercept(xlag);

    let (cy, u) = ols(&design, &DVector::from_column_slice(sample.y()), "Y equation")?;
    let (cx, e) = ols(&design, &DVector::from_column_slice(&sample.x()[1..]), "X equation")?;

    let (b_hat, v_resid) = if p == 0 {
        (Vec::new(), e.as_slice().to_vec())
    } else {
        let rows = n - p;
        let lags = DMatrix::from_fn(rows, p, |i, j| e[p + i - 1 - j]);
        let target = DVector::from_fn(rows, |i, _| e[p + i]);
        let (b, v) = ols(&lags, &target, "AR error equation")?;
        (b.as_slice().to_vec(), v.as_slice().to_vec())
    };

    let sigma = |r: &[f64], params: usize| (r.iter().map(|v| v * v).sum::<f64>() / (r.len() - params) as f64).sqrt();
    let sigma_u_hat = sigma(u.as_slice(), 2);
    let sigma_v_hat = if p == 0 { sigma(&v_resid, 2) } else { sigma(&v_resid, p) };

    Ok(LseFit {
        alpha_hat: cy[0],
        beta_hat: cy[1],
        theta_hat: cx[0],
        phi_hat: cx[1],
        b_hat,
        u_resid: u.as_slice().to_vec(),
        v_resid,
        sigma_u_hat,
        sigma_v_hat,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapDecision {
    pub reject: bool,
    /// Least-squares slope of the observed sample.
    pub beta_hat: f64,
    /// Acceptance region for `beta0`: the bootstrap slope quantiles
    /// reflected about the estimate, `[2 b - q_{1-s/2}, 2 b - q_{s/2}]`.
    pub lower: f64,
    pub upper: f64,
    pub resamples: usize,
    /// Resamples whose regenerated predictor was unusable; excluded.
    pub degenerate_resamples: usize,
}

impl BootstrapDecision {
    /// More than 1% of resamples had to be discarded.
    pub fn excessive_degeneracy(&self) -> bool {
        self.degenerate_resamples * 100 > self.resamples
    }
}

/// Residual-bootstrap test of `H0: beta = beta0` at significance level
/// `significance`.
///
/// Resamples `(U_t, V_t)` pairs jointly, `n - 1` at a time, regenerates
/// `(X*, Y*)` through the fitted model from `X*_0 = X_0` (pre-sample errors
/// zero), and re-estimates the slope on the pairs `(X*_{t-1}, Y*_t)`,
/// `t = 2..n-1`. The spread of `beta* - beta_hat` stands in for that of
/// `beta_hat - beta`, so `H0` is rejected when `beta_hat - beta0` falls
/// outside `[q_{s/2} - beta_hat, q_{1-s/2} - beta_hat]`. Resample `j` draws
/// from [`stream_rng`]`(seed, j)`, so the result is independent of thread
/// count.
pub fn bootstrap_lse_test(
    sample: &RegressionSample,
    beta0: f64,
    p: usize,
    significance: f64,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapDecision> {
    crate::el::check_level(significance)?;
    if resamples < 100 {
        return Err(Error::invalid(format!("need at least 100 resamples, got {resamples}")));
    }
    let fit = fit_full_model(sample, p)?;
    let beta_hat = lse_beta(sample)?;
    let pairs: Vec<(f64, f64)> = fit.residual_pairs().collect();
    let n = sample.n();
    let x0 = sample.x()[0];

    let draws: Vec<Option<f64>> = (0..resamples as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, j);
            regenerate_slope(&fit, &pairs, n, x0, &mut rng)
        })
        .collect();

    let mut slopes: Vec<f64> = draws.iter().flatten().copied().collect();
    let degenerate_resamples = resamples - slopes.len();
    if slopes.len() < 2 {
        return Err(Error::Degenerate("every bootstrap resample was degenerate".into()));
    }
    slopes.sort_by(f64::total_cmp);
    let q_lo = percentile(&slopes, 0.5 * significance);
    let q_hi = percentile(&slopes, 1.0 - 0.5 * significance);
    let lower = 2.0 * beta_hat - q_hi;
    let upper = 2.0 * beta_hat - q_lo;
    Ok(BootstrapDecision {
        reject: beta0 < lower || beta0 > upper,
        beta_hat,
        lower,
        upper,
        resamples,
        degenerate_resamples,
    })
}

fn regenerate_slope<R: Rng>(fit: &LseFit, pairs: &[(f64, f64)], n: usize, x0: f64, rng: &mut R) -> Option<f64> {
    let len = n - 1;
    let mut x = Vec::with_capacity(len + 1);
    let mut y = Vec::with_capacity(len);
    let mut errs: Vec<f64> = Vec::with_capacity(len);
    x.push(x0);
    for t in 1..=len {
        let (u, v) = pairs[rng.random_range(0..pairs.len())];
        let mut e = v;
        for (i, b) in fit.b_hat.iter().enumerate() {
            if let Some(prev) = errs.len().checked_sub(i + 1).map(|k| errs[k]) {
                e += b * prev;
            }
        }
        errs.push(e);
        let prev = x[t - 1];
        x.push(fit.theta_hat + fit.phi_hat * prev + e);
        y.push(fit.alpha_hat + fit.beta_hat * prev + u);
    }
    // X*_1..X*_{n-2} against Y*_2..Y*_{n-1}.
    let xs = &x[1..len];
    let ys = &y[1..len];
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return None;
    }
    lse_slope(xs, ys).ok()
}

/// Linear-interpolation sample quantile of sorted data.
fn percentile(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
