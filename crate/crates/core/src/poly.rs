//! Dense complex polynomials in ascending-degree storage.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::C64;

/// Falling factorial `[c]_k = c (c - 1) ... (c - k + 1)`, with `[c]_0 = 1`.
pub fn falling_factorial(c: C64, k: usize) -> C64 {
    (0..k).fold(C64::new(1.0, 0.0), |acc, i| acc * (c - i as f64))
}

/// Falling factorial of a non-negative integer, as a float.
///
/// Zero whenever `k > n`.
pub fn falling_factorial_int(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

/// `n!` as a float; overflows to infinity past 170.
pub fn factorial(n: usize) -> f64 {
    falling_factorial_int(n, n)
}

/// Complex polynomial `sum_k coeffs[k] z^k`.
///
/// Trailing exact zeros are stripped on construction, so the zero polynomial
/// has no coefficients and every other polynomial has a nonzero leading one.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `c z^n`.
    pub fn term(c: C64, n: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        Self::term(C64::new(1.0, 0.0), n)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero past the degree.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// k-th derivative. Coefficient `j` of the result is `a_{j+k} [j+k]_k`.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(k)
                .map(|(j, &c)| c * falling_factorial_int(j, k))
                .collect(),
        )
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Scale so the leading coefficient is one. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => self.scale(lead.inv()),
            None => Self::zero(),
        }
    }

    /// Largest coefficient modulus, zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Coefficientwise distance to `other`, relative to the largest coefficient of `other`.
    pub fn relative_distance(&self, other: &CPoly) -> f64 {
        let diff = (self - other).max_abs_coeff();
        let scale = other.max_abs_coeff();
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// All roots with multiplicity; see [`crate::roots::poly_roots`].
    pub fn roots(&self) -> crate::Result<Vec<C64>> {
        crate::roots::poly_roots(self)
    }

    /// Build a polynomial from its roots, `prod (z - root_i)` scaled by `lead`.
    pub fn from_roots(roots: &[C64], lead: C64) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, &r| {
            &acc * &Self::new(vec![-r, C64::new(1.0, 0.0)])
        })
    }
}

/// Residual of an identity `sum_i terms[i] = 0`, relative to the largest term.
///
/// Families with factorially growing coefficients only satisfy their identities
/// up to rounding on the scale of the individual terms, which is what this
/// measures. Returns zero when every term vanishes.
pub fn identity_residual(terms: &[CPoly]) -> f64 {
    let scale = terms.iter().map(CPoly::max_abs_coeff).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let total = terms.iter().fold(CPoly::zero(), |acc, t| &acc + t);
    total.max_abs_coeff() / scale
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

fn zip_with(a: &[C64], b: &[C64], op: impl Fn(C64, C64) -> C64) -> CPoly {
    let n = a.len().max(b.len());
    let zero = C64::new(0.0, 0.0);
    CPoly::new(
        (0..n)
            .map(|i| op(*a.get(i).unwrap_or(&zero), *b.get(i).unwrap_or(&zero)))
            .collect(),
    )
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        zip_with(&self.coeffs, &rhs.coeffs, |a, b| a + b)
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        zip_with(&self.coeffs, &rhs.coeffs, |a, b| a - b)
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CPoly {
            type Output = CPoly;
            fn $method(self, rhs: CPoly) -> CPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CPoly> for CPoly {
            type Output = CPoly;
            fn $method(self, rhs: &CPoly) -> CPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        -&self
    }
}

impl AddAssign<&CPoly> for CPoly {
    fn add_assign(&mut self, rhs: &CPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CPoly> for CPoly {
    fn sub_assign(&mut self, rhs: &CPoly) {
        *self = &*self - rhs;
    }
}
