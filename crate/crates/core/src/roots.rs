//! Simultaneous polynomial root finding (Aberth-Ehrlich).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::C64;

pub const MAX_ITERATIONS: usize = 200;
/// A root is frozen once its update is below `STEP_TOL * (1 + |root|)`.
pub const STEP_TOL: f64 = 1e-13;

/// All `deg p` roots of `p`, with multiplicity.
///
/// Exact zero low-order coefficients are split off first as roots at the
/// origin, so forced zeros come back exactly.
pub fn poly_roots(p: &CPoly) -> Result<Vec<C64>> {
    let degree = match p.degree() {
        None => return Err(Error::Domain("the zero polynomial has no finite root set".into())),
        Some(0) => return Err(Error::Domain("constant polynomial has no roots".into())),
        Some(d) => d,
    };
    let coeffs = p.coeffs();
    let zeros = coeffs.iter().take_while(|c| **c == C64::new(0.0, 0.0)).count();
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    let reduced = CPoly::new(coeffs[zeros..].to_vec());
    if degree > zeros {
        roots.extend(aberth(&reduced));
    }
    Ok(roots)
}

/// Positive root of `|a_n| x^n - sum_{k<n} |a_k| x^k`, an upper bound on root moduli.
pub fn cauchy_bound(p: &CPoly) -> f64 {
    let coeffs = p.coeffs();
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let abs: Vec<f64> = coeffs[..n].iter().map(|c| c.norm() / lead).collect();
    if abs.iter().all(|&a| a == 0.0) {
        return 0.0;
    }
    let h = |x: f64| {
        // x^n - sum abs_k x^k, evaluated by Horner
        let mut acc = 1.0;
        for &a in abs.iter().rev() {
            acc = acc * x - a;
        }
        acc
    };
    let mut lo = 0.0;
    let mut hi = 1.0 + abs.iter().cloned().fold(0.0, f64::max);
    // h < 0 on (0, root) and > 0 beyond; bisect to full precision
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(p: &CPoly) -> Vec<C64> {
    let coeffs = p.coeffs();
    let n = coeffs.len() - 1;
    if n == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let radius = cauchy_bound(p);
    // offset keeps the starting points off any symmetry axis of real polynomials
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut frozen = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (pv, dpv) = eval_with_derivative(coeffs, z[i]);
            if pv == C64::new(0.0, 0.0) {
                frozen[i] = true;
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                all_done = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= STEP_TOL * (1.0 + z[i].norm()) {
                frozen[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}
