//! Power series truncated at a fixed order `N` (coefficients of `w^0 .. w^{N-1}`).

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<C64>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates `coeffs` to exactly `order` entries.
    pub fn new(mut coeffs: Vec<C64>, order: usize) -> Self {
        coeffs.resize(order, C64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn from_poly(p: &CPoly, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    pub fn constant(c: C64, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `w`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Multiplicative inverse modulo `w^N`.
    pub fn recip(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0 == C64::new(0.0, 0.0) {
            return Err(Error::SingularSeries);
        }
        let n = self.order();
        let inv0 = a0.inv();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = if k == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            for j in 1..=k {
                acc -= self.coeffs[j] * out[k - j];
            }
            out[k] = acc * inv0;
        }
        Ok(Self { coeffs: out })
    }

    /// `outer(self)` modulo `w^N`; requires a zero constant term.
    pub fn compose(outer: &CPoly, inner: &TruncatedSeries) -> Result<Self> {
        if inner.coeff(0) != C64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "inner series of a composition must vanish at zero".into(),
            ));
        }
        let n = inner.order();
        let mut acc = Self::constant(C64::new(0.0, 0.0), n);
        for &c in outer.coeffs().iter().rev() {
            acc = &acc * inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `exp(self)` modulo `w^N`; requires a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if self.coeff(0) != C64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "exponential is only taken of series vanishing at zero".into(),
            ));
        }
        let n = self.order();
        let mut out = vec![C64::new(0.0, 0.0); n];
        if n == 0 {
            return Ok(Self { coeffs: out });
        }
        out[0] = C64::new(1.0, 0.0);
        // k e_k = sum_{j=1}^{k} j s_j e_{k-j}
        for k in 1..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j] * j as f64;
            }
            out[k] = acc / k as f64;
        }
        Ok(Self { coeffs: out })
    }

    fn check_orders(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series of different truncation orders"
        );
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_orders(rhs);
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_orders(rhs);
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_orders(rhs);
        let n = self.order();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}
