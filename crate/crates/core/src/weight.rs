use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Weight family `w(t) = (1 + |t|^h)^(1/h)`.
///
/// Every member satisfies `w(t) >= max(1, |t|)` and `w(t) / |t| -> 1`, so
/// `t / w(t)` is bounded by one in magnitude. `h = 2` gives `sqrt(1 + t^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    h: f64,
}

impl WeightSpec {
    pub fn new(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("weight exponent must be positive and finite, got {h}")));
        }
        Ok(Self { h })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Evaluates `w(t)` without overflowing for large `|t|`.
    pub fn eval(&self, t: f64) -> f64 {
        let a = t.abs();
        if self.h == 2.0 {
            return 1.0f64.hypot(a);
        }
        if a <= 1.0 {
            (1.0 + a.powf(self.h)).powf(1.0 / self.h)
        } else {
            a * (1.0 + a.powf(-self.h)).powf(1.0 / self.h)
        }
    }

    /// `t / w(t)`, always in `[-1, 1]`.
    pub fn damp(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        (t / self.eval(t)).clamp(-1.0, 1.0)
    }
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self { h: 2.0 }
    }
}
