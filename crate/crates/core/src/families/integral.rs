use crate::error::Result;
use crate::families::{w_params, XiTable};
use crate::poly::CPoly;
use crate::quadrature::{GaussKind, QuadratureRule};
use crate::series::TruncatedSeries;
use crate::C64;

/// Gauss-Laguerre nodes beyond the polynomial degree.
const LAGUERRE_SURPLUS: usize = 8;

/// `(beta/2) e^{beta z} int_z^inf p(x) e^{-beta x} dx + (beta/2) e^{-beta z} int_{-inf}^z p(x) e^{beta x} dx`.
///
/// The substitutions `x = z +- s/beta` turn both pieces into
/// `(1/2) int_0^inf p(z +- s/beta) e^{-s} ds`, integrated exactly by Gauss-Laguerre.
fn two_sided_laplace(p: &CPoly, beta: f64, z: f64) -> Result<C64> {
    let nodes = p.degree().unwrap_or(0) + LAGUERRE_SURPLUS;
    let rule = QuadratureRule::gauss(GaussKind::Laguerre, nodes)?;
    let sum = rule.integrate(|s| {
        let shift = s / beta;
        p.eval(C64::new(z, 0.0) + shift) + p.eval(C64::new(z, 0.0) - shift)
    });
    Ok(sum * 0.5)
}

/// Integral representation of `w_n(alpha; t)` for real `t`.
pub fn w_integral_rep(alpha: f64, n: usize, t: f64) -> Result<f64> {
    let beta = w_params(alpha)?.beta().expect("alpha < 0");
    Ok(two_sided_laplace(&CPoly::monomial(n), beta, t)?.re)
}

/// Integral representation of `yhat_n(2, alpha; z)` with `p_n` taken from `xi`.
///
/// The result is complex only when the table itself has complex coefficients.
pub fn yhat_integral_rep(xi: &XiTable, alpha: f64, n: usize, z: f64) -> Result<C64> {
    let beta = w_params(alpha)?.beta().expect("alpha < 0");
    two_sided_laplace(xi.row(n)?, beta, z)
}

/// First `order` Taylor coefficients in `z` of `beta^2/(beta^2 - z^2) e^{t z}`.
pub fn w_generating_coeffs(alpha: f64, t: C64, order: usize) -> Result<Vec<C64>> {
    let beta = w_params(alpha)?.beta().expect("alpha < 0");
    let denom = TruncatedSeries::new(
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0 / (beta * beta), 0.0)],
        order,
    );
    let exp = TruncatedSeries::new(vec![C64::new(0.0, 0.0), t], order).exp()?;
    Ok((&denom.recip()? * &exp).coeffs().to_vec())
}
