//! Linear differential operators `D = sum_k d_k(z) (d/dz)^k` with polynomial coefficients.

use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::poly::{falling_factorial_int, CPoly};
use crate::C64;

/// Relative threshold below which a leading sum is treated as zero.
pub const LEADING_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearDiffOp {
    coeffs: Vec<CPoly>,
}

/// Outcome of the degree-preservation test.
#[derive(Clone, Debug, PartialEq)]
pub enum ConditionCheck {
    Satisfied,
    /// `deg d_k > k`.
    DegreeTooHigh { k: usize, degree: usize },
    /// `sum_j [n]_j d_{j,j}` vanishes, so `D z^n` loses degree.
    LeadingSumVanishes { n: usize, magnitude: f64 },
}

impl ConditionCheck {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ConditionCheck::Satisfied)
    }
}

impl fmt::Display for ConditionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionCheck::Satisfied => write!(f, "satisfied"),
            ConditionCheck::DegreeTooHigh { k, degree } => {
                write!(f, "coefficient d_{k} has degree {degree} > {k}")
            }
            ConditionCheck::LeadingSumVanishes { n, magnitude } => {
                write!(f, "leading sum vanishes at n = {n} (|sum| = {magnitude:e})")
            }
        }
    }
}

impl LinearDiffOp {
    /// Operator with coefficients `d_0, ..., d_r`. An empty list is the zero operator.
    pub fn new(mut coeffs: Vec<CPoly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(CPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(CPoly::zero());
        }
        Self { coeffs }
    }

    pub fn identity() -> Self {
        Self::new(vec![CPoly::one()])
    }

    /// `(d/dz)^k`.
    pub fn derivative(k: usize) -> Self {
        let mut coeffs = vec![CPoly::zero(); k];
        coeffs.push(CPoly::one());
        Self::new(coeffs)
    }

    /// Constant-coefficient operator `sum_k c_k (d/dz)^k`.
    pub fn constant(c: &[C64]) -> Self {
        Self::new(c.iter().map(|&ck| CPoly::constant(ck)).collect())
    }

    /// `alpha (d/dz)^r + 1`.
    pub fn alpha_dr_plus_one(r: usize, alpha: f64) -> Self {
        let mut coeffs = vec![CPoly::zero(); r + 1];
        coeffs[0] = CPoly::one();
        coeffs[r] = &coeffs[r] + &CPoly::constant(C64::new(alpha, 0.0));
        Self::new(coeffs)
    }

    /// Euler operator `z d/dz`.
    pub fn euler() -> Self {
        Self::new(vec![CPoly::zero(), CPoly::monomial(1)])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CPoly] {
        &self.coeffs
    }

    /// `d_k`, zero past the order.
    pub fn coeff(&self, k: usize) -> CPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `D y = sum_k d_k y^(k)`, computed on coefficients.
    pub fn apply(&self, y: &CPoly) -> CPoly {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .fold(CPoly::zero(), |acc, (k, d)| &acc + &(d * &y.derivative(k)))
    }

    /// Composition `D o (d/dz)^m`.
    pub fn then_derivative(&self, m: usize) -> Self {
        let mut coeffs = vec![CPoly::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Left multiplication `q(z) D`.
    pub fn left_mul(&self, q: &CPoly) -> Self {
        Self::new(self.coeffs.iter().map(|d| q * d).collect())
    }

    /// `sum_j [n]_j d_{j,j}`, the coefficient of `z^n` in `D z^n` when degrees are admissible.
    pub fn leading_sum(&self, n: usize) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, d)| d.coeff(j) * falling_factorial_int(n, j))
            .sum()
    }

    /// Degree-preservation test up to `n_max`: `deg d_k <= k` for all `k`, and the
    /// leading sums are nonzero for `n = 0..=n_max`.
    pub fn check_condition_c(&self, n_max: usize) -> ConditionCheck {
        for (k, d) in self.coeffs.iter().enumerate() {
            if let Some(degree) = d.degree() {
                if degree > k {
                    return ConditionCheck::DegreeTooHigh { k, degree };
                }
            }
        }
        let scale: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, d)| d.coeff(j).norm() * falling_factorial_int(n_max, j))
            .sum();
        for n in 0..=n_max {
            let magnitude = self.leading_sum(n).norm();
            if magnitude <= LEADING_SUM_TOL * scale {
                return ConditionCheck::LeadingSumVanishes { n, magnitude };
            }
        }
        ConditionCheck::Satisfied
    }

    /// Unique polynomial `y` with `deg y = deg u` and `D y = u`.
    ///
    /// Coefficients are found top-down from the triangular system
    /// `mu_t S(t) + sum_{j>t} mu_j sum_l [j]_l d_{l, l+t-j} = a_t`, where
    /// `S(t)` is the leading sum and `d_{l,m} = 0` for `m < 0`.
    pub fn solve(&self, u: &CPoly) -> Result<CPoly> {
        let Some(n) = u.degree() else {
            return Ok(CPoly::zero());
        };
        let check = self.check_condition_c(n);
        if !check.is_satisfied() {
            return Err(Error::UnsolvableOperator(check));
        }
        let r = self.order();
        let mut mu = vec![C64::new(0.0, 0.0); n + 1];
        for t in (0..=n).rev() {
            let mut acc = u.coeff(t);
            for j in (t + 1)..=(t + r).min(n) {
                for (l, d) in self.coeffs.iter().enumerate() {
                    // d_{l, l+t-j}; l + t - j < 0 contributes nothing
                    if l + t < j {
                        continue;
                    }
                    let dlm = d.coeff(l + t - j);
                    if dlm != C64::new(0.0, 0.0) {
                        acc -= mu[j] * falling_factorial_int(j, l) * dlm;
                    }
                }
            }
            mu[t] = acc / self.leading_sum(t);
        }
        Ok(CPoly::new(mu))
    }
}

impl Add for &LinearDiffOp {
    type Output = LinearDiffOp;
    fn add(self, rhs: &LinearDiffOp) -> LinearDiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        LinearDiffOp::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &LinearDiffOp {
    type Output = LinearDiffOp;
    fn sub(self, rhs: &LinearDiffOp) -> LinearDiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        LinearDiffOp::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}
