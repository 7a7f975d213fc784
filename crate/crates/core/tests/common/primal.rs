//! Primal empirical-likelihood oracle.
//!
//! Maximises `sum_t log(n p_t)` over the simplex subject to
//! `sum_t p_t z_t = 0` with a feasible-start, equality-constrained Newton
//! method on the weights themselves. It never touches the one-dimensional
//! dual, so it checks the multiplier route independently.

/// `-2 max sum log(n p_t)`, or `None` when zero is not strictly inside the
/// hull of the scores (the problem has no interior feasible point).
pub fn primal_log_el_ratio(z: &[f64]) -> Option<f64> {
    let n = z.len();
    let pos = z.iter().filter(|&&v| v > 0.0).count();
    let neg = z.iter().filter(|&&v| v < 0.0).count();
    if pos == 0 && neg == 0 {
        return Some(0.0);
    }
    if pos == 0 || neg == 0 {
        return None;
    }

    // Feasible start: p_t proportional to 1/|z_t| on each sign class with the
    // class totals balanced so sum p z = 0; zero scores get a flat weight.
    let s_neg = 1.0;
    let s_pos = s_neg * neg as f64 / pos as f64;
    let mut p: Vec<f64> = z
        .iter()
        .map(|&v| {
            if v > 0.0 {
                s_pos / v
            } else if v < 0.0 {
                s_neg / -v
            } else {
                1.0
            }
        })
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);

    let objective = |p: &[f64]| -> f64 { -p.iter().map(|v| v.ln()).sum::<f64>() };
    for _ in 0..500 {
        // Normal equations of the KKT system: (A P^2 A^T) w = A p.
        let (mut m11, mut m12, mut m22) = (0.0, 0.0, 0.0);
        let (mut r1, mut r2) = (0.0, 0.0);
        for (&pt, &zt) in p.iter().zip(z) {
            let p2 = pt * pt;
            m11 += p2;
            m12 += p2 * zt;
            m22 += p2 * zt * zt;
            r1 += pt;
            r2 += pt * zt;
        }
        let det = m11 * m22 - m12 * m12;
        let w1 = (r1 * m22 - r2 * m12) / det;
        let w2 = (m11 * r2 - m12 * r1) / det;
        let step: Vec<f64> = p.iter().zip(z).map(|(&pt, &zt)| pt - pt * pt * (w1 + w2 * zt)).collect();
        let decrement: f64 = p.iter().zip(&step).map(|(pt, d)| (d / pt).powi(2)).sum();
        if decrement < 1e-26 {
            break;
        }
        let f0 = objective(&p);
        let slope = -decrement;
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = p.iter().zip(&step).map(|(a, d)| a + t * d).collect();
            if cand.iter().all(|&v| v > 0.0) && objective(&cand) <= f0 + 0.25 * t * slope {
                p = cand;
                break;
            }
            t *= 0.5;
            if t < 1e-20 {
                break;
            }
        }
    }
    Some(-2.0 * p.iter().map(|&v| (n as f64 * v).ln()).sum::<f64>())
}
