//! Synthetic predictive-regression samples.
//!
//! ```text
//! Y_t = alpha + (a / sqrt(n)) X_{t-1} + U_t
//! X_t = theta + phi X_{t-1} + e_t
//! e_t = b_1 e_{t-1} + ... + b_p e_{t-p} + V_t
//! ```
//!
//! `U_t ~ N(0, 1)` and `eps_t ~ t(nu)` are independent, and
//! `V_t = delta U_t + c eps_t` with `c = sqrt(1 - delta^2) / sqrt(nu / (nu - 2))`
//! when `nu > 2` (so `V` has unit variance and `corr(U, V) = delta`) and
//! `c = 1` when `nu <= 2`, where `eps` has infinite variance.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; stream
//! `k` of that key is an independent child generator (see [`stream_rng`]).
//! Samples are reproducible per seed with this crate, not bit-compatible with
//! other generators.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{Error, RegressionSample, Result};

/// Warm-up steps of the AR(p) error recursion before `e_1` is emitted.
pub const BURN_IN: usize = 500;

/// Child generator `stream` of the key `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpConfig {
    pub n: usize,
    /// Local-alternative coefficient; the slope is `a / sqrt(n)`.
    pub a: f64,
    pub alpha: f64,
    pub theta: f64,
    pub phi: f64,
    /// AR coefficients of the predictor error, `b_1..b_p`.
    pub b: Vec<f64>,
    pub nu: f64,
    pub delta: f64,
    pub x0: f64,
    pub seed: u64,
}

impl DgpConfig {
    /// The simulation design used for the size/power tables:
    /// `alpha = theta = 0`, `delta = -0.75`, `X_0 = 0`, `p = 1`.
    pub fn table_cell(a: f64, phi: f64, nu: f64, b1: f64, n: usize) -> Self {
        Self { n, a, alpha: 0.0, theta: 0.0, phi, b: vec![b1], nu, delta: -0.75, x0: 0.0, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// True slope `a / sqrt(n)`.
    pub fn beta(&self) -> f64 {
        self.a / (self.n as f64).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::invalid(format!("n must be at least 4, got {}", self.n)));
        }
        if !(self.nu > 0.0) || self.nu.is_nan() {
            return Err(Error::invalid(format!("nu must be positive, got {}", self.nu)));
        }
        if !(-1.0..=1.0).contains(&self.delta) {
            return Err(Error::invalid(format!("delta must lie in [-1, 1], got {}", self.delta)));
        }
        let scalars = [self.a, self.alpha, self.theta, self.phi, self.x0];
        if scalars.iter().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite DGP parameter"));
        }
        if !ar_is_stationary(&self.b) {
            return Err(Error::invalid(format!(
                "AR error coefficients {:?} are not stationary (some root of the characteristic polynomial lies on or outside the unit circle)",
                self.b
            )));
        }
        Ok(())
    }
}

/// Whether `e_t = sum_i b_i e_{t-i} + V_t` is stationary, i.e. every root
/// of `z^p - b_1 z^{p-1} - ... - b_p` lies strictly inside the unit circle.
/// Uses the Schur-Cohn step-down recursion on the reflection coefficients.
pub fn ar_is_stationary(b: &[f64]) -> bool {
    let mut a = b.to_vec();
    while let Some(&k) = a.last() {
        if k.abs() >= 1.0 {
            return false;
        }
        let p = a.len();
        let denom = 1.0 - k * k;
        let next: Vec<f64> = (0..p - 1).map(|j| (a[j] + k * a[p - 2 - j]) / denom).collect();
        a = next;
    }
    true
}

/// One Student-t(nu) draw, `Z / sqrt(G / nu)` with `G ~ chi2(nu)` drawn as
/// `Gamma(nu / 2, 2)`. Valid for any `nu > 0`.
pub fn gen_student_t<R: Rng + ?Sized>(nu: f64, rng: &mut R) -> f64 {
    let chi2 = Gamma::new(0.5 * nu, 2.0).expect("nu must be positive");
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let g = chi2.sample(rng);
        let t = z / (g / nu).sqrt();
        // g can underflow to zero for tiny shapes.
        if t.is_finite() {
            return t;
        }
    }
}

/// Draws `(U, V)`.
pub fn gen_innovation_pair<R: Rng + ?Sized>(config: &DgpConfig, rng: &mut R) -> (f64, f64) {
    let u: f64 = StandardNormal.sample(rng);
    let eps = gen_student_t(config.nu, rng);
    let v = if config.nu > 2.0 {
        let c = (1.0 - config.delta * config.delta).sqrt() / (config.nu / (config.nu - 2.0)).sqrt();
        config.delta * u + c * eps
    } else {
        config.delta * u + eps
    };
    (u, v)
}

/// A validated DGP.
#[derive(Debug, Clone)]
pub struct Dgp {
    config: DgpConfig,
}

impl Dgp {
    pub fn new(config: DgpConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }

    pub fn config(&self) -> &DgpConfig {
        &self.config
    }

    /// The sample determined by `config.seed`.
    pub fn sample(&self) -> RegressionSample {
        self.sample_with(&mut stream_rng(self.config.seed, 0))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> RegressionSample {
        let c = &self.config;
        let p = c.b.len();
        let beta = c.beta();
        // Ring buffer of the last p errors, most recent at `head`.
        let mut hist = vec![0.0; p];
        let mut head = 0usize;
        let mut next_error = |v: f64| {
            let mut e = v;
            for (i, bi) in c.b.iter().enumerate() {
                e += bi * hist[(head + p - i) % p.max(1)];
            }
            if p > 0 {
                head = (head + 1) % p;
                hist[head] = e;
            }
            e
        };
        for _ in 0..BURN_IN {
            let (_, v) = gen_innovation_pair(c, rng);
            next_error(v);
        }
        let mut x = Vec::with_capacity(c.n + 1);
        let mut y = Vec::with_capacity(c.n);
        x.push(c.x0);
        for t in 1..=c.n {
            let (u, v) = gen_innovation_pair(c, rng);
            let e = next_error(v);
            let prev = x[t - 1];
            x.push(c.theta + c.phi * prev + e);
            y.push(c.alpha + beta * prev + u);
        }
        // Heavy tails can overflow only for absurd parameter choices; the
        // constructor rejects non-finite values so surface it loudly.
        RegressionSample::new(x, y).expect("generated sample is finite")
    }
}

/// Convenience: validate `config` and draw its seeded sample.
pub fn gen_sample(config: &DgpConfig) -> Result<RegressionSample> {
    Ok(Dgp::new(config.clone())?.sample())
}
