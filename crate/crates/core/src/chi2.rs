//! Chi-square distribution with one degree of freedom.
//!
//! With one degree of freedom the regularized incomplete gamma function
//! reduces to the error function: `P(chi2_1 <= x) = erf(sqrt(x / 2))`.
//! `erf`/`erfc` come from `libm` (accurate to about an ulp); the inverses
//! start from `statrs`' `erfc_inv`/`erf_inv` and are polished with Newton
//! steps on whichever tail is small, so both ends keep full relative
//! precision.

use statrs::function::erf as inverse;

const NEWTON_STEPS: usize = 4;

/// `P(chi2_1 > x)`. Returns 1 for `x <= 0`.
pub fn chi_square_sf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    libm::erfc((0.5 * x).sqrt())
}

/// `P(chi2_1 <= x)`.
pub fn chi_square_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    libm::erf((0.5 * x).sqrt())
}

fn density(x: f64) -> f64 {
    (-0.5 * x).exp() / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Inverse survival function: the `x` with `P(chi2_1 > x) = q`.
pub fn chi_square_isf(q: f64) -> f64 {
    if q.is_nan() || !(0.0..=1.0).contains(&q) {
        return f64::NAN;
    }
    if q == 0.0 {
        return f64::INFINITY;
    }
    if q == 1.0 {
        return 0.0;
    }
    if q > 0.5 {
        return lower_inverse(1.0 - q);
    }
    let r = inverse::erfc_inv(q);
    let mut x = 2.0 * r * r;
    for _ in 0..NEWTON_STEPS {
        let sf = chi_square_sf(x);
        if sf <= 0.0 || x <= 0.0 {
            break;
        }
        // Newton on log sf keeps relative accuracy deep in the tail.
        let step = (sf.ln() - q.ln()) * sf / density(x);
        let next = x + step;
        if !next.is_finite() || next <= 0.0 {
            break;
        }
        x = next;
        if step.abs() <= 1e-16 * x {
            break;
        }
    }
    x
}

/// Quantile function: the `x` with `P(chi2_1 <= x) = p`.
pub fn chi_square_quantile(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p < 0.5 {
        lower_inverse(p)
    } else {
        chi_square_isf(1.0 - p)
    }
}

// Inverts the cdf where `p` itself is the small tail.
fn lower_inverse(p: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    let r = inverse::erf_inv(p);
    let mut x = 2.0 * r * r;
    for _ in 0..NEWTON_STEPS {
        if x <= 0.0 {
            break;
        }
        let cdf = chi_square_cdf(x);
        let step = (p - cdf) / density(x);
        let next = x + step;
        if !next.is_finite() || next <= 0.0 {
            break;
        }
        x = next;
        if step.abs() <= 1e-16 * x {
            break;
        }
    }
    x
}
