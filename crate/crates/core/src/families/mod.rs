//! Explicit polynomial families.
//!
//! The central family is `y_n(r, alpha)`, the unique monic degree-`n` solution
//! of `alpha y^(r) + y = z^n`. Everything else is derived from it or from a
//! generating function `f(w) e^{t u(w)} / p(u(w))` over a base system.

mod asymptotics;
mod genfn;
mod integral;

use std::f64::consts::TAU;

pub use asymptotics::{
    asymptotic_error, asymptotic_limit, check_root_location, scaled_family, RootReport,
    ZERO_ROOT_TOL,
};
pub use genfn::{phi_contour_rep, phi_family, BaseSystem, GenFnSpec};
pub use integral::{w_generating_coeffs, w_integral_rep, yhat_integral_rep};

use crate::diffop::LinearDiffOp;
use crate::error::{Error, Result};
use crate::poly::{falling_factorial_int, CPoly};
use crate::C64;

/// Parameters `(r, alpha)` of the family `y_n(r, alpha)`.
///
/// `branch` selects which r-th root is used for `alpha_r = (-1/alpha)^{1/r}`;
/// branch 0 is the principal root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    r: usize,
    alpha: f64,
    branch: usize,
}

impl FamilyParams {
    pub fn new(r: usize, alpha: f64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("derivative order r must be positive".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { r, alpha, branch: 0 })
    }

    pub fn with_branch(self, branch: usize) -> Self {
        Self {
            branch: branch % self.r,
            ..self
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    /// The chosen r-th root of `-1/alpha`; `None` when `alpha = 0`.
    pub fn alpha_r(&self) -> Option<C64> {
        if self.alpha == 0.0 {
            return None;
        }
        let base = C64::new(-1.0 / self.alpha, 0.0);
        let r = self.r as f64;
        let angle = (base.arg() + TAU * self.branch as f64) / r;
        Some(C64::from_polar(base.norm().powf(1.0 / r), angle))
    }

    /// `sqrt(-1/alpha)`, defined for `alpha < 0`.
    pub fn beta(&self) -> Option<f64> {
        (self.alpha < 0.0).then(|| (-1.0 / self.alpha).sqrt())
    }

    /// Primitive r-th root of unity `e^{2 pi i / r}`.
    pub fn epsilon(&self) -> C64 {
        C64::from_polar(1.0, TAU / self.r as f64)
    }

    /// The operator `alpha (d/dz)^r + 1`.
    pub fn operator(&self) -> LinearDiffOp {
        LinearDiffOp::alpha_dr_plus_one(self.r, self.alpha)
    }
}

/// `y_n(r, alpha; z)`.
///
/// Coefficients follow the two-term recurrence `mu_s = -alpha [s+r]_r mu_{s+r}`
/// from `mu_n = 1`, in the same operation order as [`LinearDiffOp::apply`], so
/// `alpha y^(r) + y` cancels to `z^n` exactly.
pub fn y_family(params: FamilyParams, n: usize) -> CPoly {
    let (r, alpha) = (params.r, params.alpha);
    let mut mu = vec![0.0; n + 1];
    mu[n] = 1.0;
    for s in (0..n).rev() {
        if s + r <= n {
            mu[s] = -(alpha * (mu[s + r] * falling_factorial_int(s + r, r)));
        }
    }
    CPoly::new(mu.into_iter().map(|m| C64::new(m + 0.0, 0.0)).collect())
}

/// `w_n(alpha) = y_n(2, alpha)` for `alpha < 0`.
pub fn w_family(alpha: f64, n: usize) -> Result<CPoly> {
    Ok(y_family(w_params(alpha)?, n))
}

pub(crate) fn w_params(alpha: f64) -> Result<FamilyParams> {
    if !(alpha < 0.0) {
        return Err(Error::Domain(format!("w_n requires alpha < 0, got {alpha}")));
    }
    FamilyParams::new(2, alpha)
}

/// Degree-`n` solution of `y' - y = z^n`, which equals `-n! sum_{k<=n} z^k / k!`.
pub fn example21_family(n: usize) -> CPoly {
    let op = LinearDiffOp::new(vec![CPoly::from_real(&[-1.0]), CPoly::one()]);
    op.solve(&CPoly::monomial(n))
        .expect("d/dz - 1 has leading sum -1 at every degree")
}

/// Physicists' Hermite polynomial `H_n`.
pub fn hermite(n: usize) -> CPoly {
    let two_t = CPoly::from_real(&[0.0, 2.0]);
    let mut prev = CPoly::zero();
    let mut cur = CPoly::one();
    for k in 0..n {
        let next = &(&two_t * &cur) - &prev.scale(C64::new(2.0 * k as f64, 0.0));
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficient table `xi_{n,j}`: row `n` holds the coefficients of a degree-`n`
/// polynomial `p_n`, usually from an orthogonal system.
#[derive(Clone, Debug, PartialEq)]
pub struct XiTable {
    rows: Vec<CPoly>,
}

impl XiTable {
    /// Rows must satisfy `deg p_n = n`.
    pub fn from_rows(rows: Vec<CPoly>) -> Result<Self> {
        for (n, p) in rows.iter().enumerate() {
            if p.degree() != Some(n) {
                return Err(Error::Domain(format!(
                    "row {n} has degree {:?}, expected {n}",
                    p.degree()
                )));
            }
        }
        Ok(Self { rows })
    }

    /// Monomials `z^n`.
    pub fn identity(n_max: usize) -> Self {
        Self {
            rows: (0..=n_max).map(CPoly::monomial).collect(),
        }
    }

    pub fn hermite(n_max: usize) -> Self {
        Self {
            rows: (0..=n_max).map(hermite).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, n: usize) -> Result<&CPoly> {
        self.rows
            .get(n)
            .ok_or_else(|| Error::Domain(format!("table has no row {n}")))
    }
}

/// `yhat_n = sum_j xi_{n,j} y_j(r, alpha)`, the solution of `alpha y^(r) + y = p_n`.
pub fn yhat_family(xi: &XiTable, params: FamilyParams, n: usize) -> Result<CPoly> {
    let row = xi.row(n)?;
    if row.coeff(n) == C64::new(0.0, 0.0) {
        return Err(Error::Domain(format!("xi_{{{n},{n}}} vanishes")));
    }
    Ok(row
        .coeffs()
        .iter()
        .enumerate()
        .fold(CPoly::zero(), |acc, (j, &x)| {
            &acc + &y_family(params, j).scale(x)
        }))
}
