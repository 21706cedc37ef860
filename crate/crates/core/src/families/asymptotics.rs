use crate::error::{Error, Result};
use crate::families::{y_family, FamilyParams};
use crate::C64;

/// Roots with modulus at most this are counted as the forced zero root.
pub const ZERO_ROOT_TOL: f64 = 1e-8;

fn checked_root(params: FamilyParams, l: usize) -> Result<C64> {
    if l >= params.r() {
        return Err(Error::Domain(format!(
            "residue class l = {l} must be below r = {}",
            params.r()
        )));
    }
    params
        .alpha_r()
        .ok_or_else(|| Error::Domain("asymptotics need alpha != 0".into()))
}

/// `(1/r) sum_k eps^{-lk} exp(alpha_r eps^k z)`.
pub fn asymptotic_limit(params: FamilyParams, l: usize, z: C64) -> Result<C64> {
    let ar = checked_root(params, l)?;
    let r = params.r();
    let eps = params.epsilon();
    let sum: C64 = (0..r)
        .map(|k| {
            let ek = eps.powu(k as u32);
            eps.powu((l * k) as u32).inv() * (ar * ek * z).exp()
        })
        .sum();
    Ok(sum / r as f64)
}

/// `alpha_r^{rm+l} / (rm+l)! * y_{rm+l}(r, alpha; z)`, summed as
/// `sum_{j<=m} (alpha_r z)^{rj+l} / (rj+l)!` so no factorial is ever formed.
///
/// Terms are accumulated in increasing `j`, so raising `m` only appends terms.
pub fn scaled_family(params: FamilyParams, l: usize, m: usize, z: C64) -> Result<C64> {
    let ar = checked_root(params, l)?;
    let r = params.r();
    let u = ar * z;
    let ur = u.powu(r as u32);
    let mut term = (1..=l).fold(C64::new(1.0, 0.0), |acc, i| acc * u / i as f64);
    let mut sum = term;
    for j in 0..m {
        let base = r * j + l;
        let denom: f64 = (base + 1..=base + r).map(|i| i as f64).product();
        term = term * ur / denom;
        sum += term;
    }
    Ok(sum)
}

/// Largest deviation of [`scaled_family`] from [`asymptotic_limit`] over `grid`.
pub fn asymptotic_error(params: FamilyParams, l: usize, m: usize, grid: &[C64]) -> Result<f64> {
    grid.iter().try_fold(0.0f64, |worst, &z| {
        let diff = scaled_family(params, l, m, z)? - asymptotic_limit(params, l, z)?;
        Ok(worst.max(diff.norm()))
    })
}

/// Outcome of the root-location check for `y_n(r, alpha)` with `alpha <= -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootReport {
    pub n: usize,
    pub r: usize,
    pub alpha: f64,
    pub roots: Vec<C64>,
    pub zero_roots: usize,
    pub expected_zero_roots: usize,
    /// Smallest modulus among roots not counted as zero; infinite if there are none.
    pub min_nonzero_modulus: f64,
    pub passes: bool,
}

pub fn check_root_location(params: FamilyParams, n: usize) -> Result<RootReport> {
    let alpha = params.alpha();
    if !(alpha <= -1.0) {
        return Err(Error::Precondition(format!(
            "root location is only claimed for alpha <= -1, got {alpha}"
        )));
    }
    let r = params.r();
    let roots = if n == 0 {
        Vec::new()
    } else {
        y_family(params, n).roots()?
    };
    let zero_roots = roots.iter().filter(|z| z.norm() <= ZERO_ROOT_TOL).count();
    let min_nonzero_modulus = roots
        .iter()
        .map(|z| z.norm())
        .filter(|&m| m > ZERO_ROOT_TOL)
        .fold(f64::INFINITY, f64::min);
    let expected_zero_roots = n % r;
    let passes = zero_roots == expected_zero_roots && min_nonzero_modulus >= 1.0 - ZERO_ROOT_TOL;
    Ok(RootReport {
        n,
        r,
        alpha,
        roots,
        zero_roots,
        expected_zero_roots,
        min_nonzero_modulus,
        passes,
    })
}
