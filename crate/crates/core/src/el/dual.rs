//! Root-finding for the one-dimensional empirical-likelihood dual.
//!
//! For scores `z_1..z_n` the multiplier solves
//! `g(lambda) = sum_t z_t / (1 + lambda z_t) = 0` on the open interval
//! `(-1 / max z, -1 / min z)`, where every weight `1 + lambda z_t` is
//! positive. `g` is strictly decreasing there and runs from `+inf` to
//! `-inf`, so a bracket plus Newton steps always converges.

use crate::{Error, Result};

pub(crate) const MAX_ITERATIONS: usize = 200;

/// Outcome of the dual solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualSolution {
    /// Zero lies inside the convex hull of the scores (or all scores are
    /// zero); `lambda` is the root of the dual equation.
    Interior { lambda: f64, iterations: usize },
    /// All scores weakly share one sign and are not all zero.
    OutsideHull,
}

impl DualSolution {
    pub fn hull_ok(&self) -> bool {
        matches!(self, DualSolution::Interior { .. })
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            DualSolution::Interior { lambda, .. } => Some(lambda),
            DualSolution::OutsideHull => None,
        }
    }
}

/// `g(lambda)` and its derivative.
fn dual_eval(z: &[f64], lambda: f64) -> (f64, f64) {
    let mut g = 0.0;
    let mut dg = 0.0;
    for &zt in z {
        let r = zt / (1.0 + lambda * zt);
        g += r;
        dg -= r * r;
    }
    (g, dg)
}

/// Solves for the Lagrange multiplier of the empirical-likelihood problem
/// with scores `z`.
///
/// On return `|g(lambda)| <= 1e-10 * n * max|z|`, unless the bracket has
/// shrunk to adjacent floating-point numbers first.
pub fn solve_lagrange(z: &[f64]) -> Result<DualSolution> {
    if z.is_empty() {
        return Err(Error::invalid("empty score vector"));
    }
    if let Some(i) = z.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("score {i} is not finite")));
    }
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let zmin = z.iter().copied().fold(f64::INFINITY, f64::min);
    if zmax == 0.0 && zmin == 0.0 {
        return Ok(DualSolution::Interior { lambda: 0.0, iterations: 0 });
    }
    if zmin >= 0.0 || zmax <= 0.0 {
        return Ok(DualSolution::OutsideHull);
    }

    let scale = zmax.max(-zmin);
    let tol = 1e-10 * z.len() as f64 * scale;
    // Newton converges quadratically, so keep going well past `tol` while
    // steps still move lambda; `tol` is what must hold when the budget ends.
    let tight = 1e-15 * z.len() as f64 * scale;

    // Open feasible interval, pulled in by a relative margin so no weight
    // 1 + lambda z_t is ever evaluated at or below zero.
    let lo_edge = -1.0 / zmax;
    let hi_edge = -1.0 / zmin;
    let eps = 1e-12 * (hi_edge - lo_edge);
    let mut lo = lo_edge + eps;
    let mut hi = hi_edge - eps;

    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for iter in 1..=MAX_ITERATIONS {
        let (g, dg) = dual_eval(z, lambda);
        residual = g.abs();
        if residual <= tight {
            return Ok(DualSolution::Interior { lambda, iterations: iter });
        }
        // g is decreasing: positive g means the root lies to the right.
        if g > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let newton = lambda - g / dg;
        let next = if dg < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let settled = (next - lambda).abs() <= 4.0 * f64::EPSILON * lambda.abs();
        if next <= lo || next >= hi || settled {
            if residual <= tol || next <= lo || next >= hi {
                return Ok(DualSolution::Interior { lambda, iterations: iter });
            }
        }
        lambda = next;
    }
    if residual <= tol {
        return Ok(DualSolution::Interior { lambda, iterations: MAX_ITERATIONS });
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisection_oracle(z: &[f64]) -> f64 {
        let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let zmin = z.iter().copied().fold(f64::INFINITY, f64::min);
        let (mut lo, mut hi) = (-1.0 / zmax, -1.0 / zmin);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let g: f64 = z.iter().map(|v| v / (1.0 + mid * v)).sum();
            if g > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn symmetric_scores_give_zero() {
        let s = solve_lagrange(&[1.0, -1.0]).unwrap();
        assert_eq!(s.lambda(), Some(0.0));
    }

    #[test]
    fn one_signed_scores_violate_hull() {
        assert_eq!(solve_lagrange(&[2.0, 2.0, 2.0]).unwrap(), DualSolution::OutsideHull);
        assert_eq!(solve_lagrange(&[0.0, 1.0, 3.0]).unwrap(), DualSolution::OutsideHull);
        assert_eq!(solve_lagrange(&[-1.0, 0.0]).unwrap(), DualSolution::OutsideHull);
    }

    #[test]
    fn all_zero_scores() {
        let s = solve_lagrange(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.lambda(), Some(0.0));
        assert!(s.hull_ok());
    }

    #[test]
    fn asymmetric_three_point_matches_bisection() {
        let z = [3.0, -1.0, -1.0];
        let oracle = bisection_oracle(&z);
        // 3/(1+3l) = 2/(1-l)  =>  l = 1/9
        assert!((oracle - 1.0 / 9.0).abs() < 1e-15);
        let lambda = solve_lagrange(&z).unwrap().lambda().unwrap();
        assert!((lambda - oracle).abs() < 1e-10, "{lambda} vs {oracle}");
    }

    #[test]
    fn heavy_tailed_scores_match_bisection() {
        let z = [1e8, -0.5, -0.2, 3.0, -1e-3, -7.0, 0.0, -2.0];
        let oracle = bisection_oracle(&z);
        let lambda = solve_lagrange(&z).unwrap().lambda().unwrap();
        assert!((lambda - oracle).abs() <= 1e-10 * oracle.abs().max(1e-8));
        for &v in &z {
            assert!(1.0 + lambda * v > 0.0);
        }
    }

    #[test]
    fn empty_and_nonfinite_rejected() {
        assert!(solve_lagrange(&[]).is_err());
        assert!(solve_lagrange(&[1.0, f64::NAN]).is_err());
    }
}
