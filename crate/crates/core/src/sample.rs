use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How the intercept of the `Y` equation is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterceptMode {
    /// `Y_t = beta * X_{t-1} + U_t`; scores use the levels directly.
    KnownIntercept,
    /// `Y_t = alpha + beta * X_{t-1} + U_t`; the intercept is removed by
    /// differencing the two halves of the sample at lag `m = floor(n / 2)`.
    UnknownIntercept,
}

impl InterceptMode {
    /// Smallest `n` the mode accepts.
    pub fn min_len(self) -> usize {
        match self {
            InterceptMode::KnownIntercept => 2,
            InterceptMode::UnknownIntercept => 4,
        }
    }
}

/// Paired observations `X_0, ..., X_n` and `Y_1, ..., Y_n`.
///
/// `x[t]` holds `X_t` and `y[t - 1]` holds `Y_t`, so the regression pairs
/// are `(x[i], y[i])` for `i = 0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl RegressionSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() + 1 {
            return Err(Error::invalid(format!(
                "x must have exactly one more entry than y (got {} and {})",
                x.len(),
                y.len()
            )));
        }
        if y.is_empty() {
            return Err(Error::invalid("sample is empty"));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("x[{i}] is not finite")));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("y[{i}] is not finite")));
        }
        Ok(Self { x, y })
    }

    /// Builds a sample from rows `(x_t, y_t)` observed at the same date.
    /// The first row's `y` is dropped since it has no lagged predictor.
    pub fn from_aligned_rows(rows: &[(f64, f64)]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::invalid("need at least two rows"));
        }
        let x = rows.iter().map(|r| r.0).collect();
        let y = rows[1..].iter().map(|r| r.1).collect();
        Self::new(x, y)
    }

    /// Number of regression pairs.
    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// `X_0, ..., X_n`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// `Y_1, ..., Y_n`.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `X_0, ..., X_{n-1}`, aligned with [`y`](Self::y).
    pub fn lagged_x(&self) -> &[f64] {
        &self.x[..self.n()]
    }

    /// Returns a copy with `c` added to every `Y_t`.
    pub fn shift_y(&self, c: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.y.iter().map(|v| v + c).collect())
    }

    /// Returns a copy with every `Y_t` multiplied by `s`.
    pub fn scale_y(&self, s: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.y.iter().map(|v| v * s).collect())
    }

    /// The regression pairs used by `mode`: levels `(X_{t-1}, Y_t)` for the
    /// known intercept, half-sample differences for the unknown intercept.
    pub(crate) fn pairs(&self, mode: InterceptMode) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n();
        if n < mode.min_len() {
            return Err(Error::invalid(format!(
                "{mode:?} needs n >= {}, got {n}",
                mode.min_len()
            )));
        }
        match mode {
            InterceptMode::KnownIntercept => Ok((self.lagged_x().to_vec(), self.y.clone())),
            InterceptMode::UnknownIntercept => {
                let m = n / 2;
                // Y~_t = Y_t - Y_{t+m}, X~_{t-1} = X_{t-1} - X_{t-1+m}, t = 1..m
                let xd = (0..m).map(|i| self.x[i] - self.x[i + m]).collect();
                let yd = (0..m).map(|i| self.y[i] - self.y[i + m]).collect();
                Ok((xd, yd))
            }
        }
    }
}
