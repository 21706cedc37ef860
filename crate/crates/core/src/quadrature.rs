//! Quadrature rules realizing the scalar measures behind the Sobolev forms.
//!
//! The unit circle carries normalized arc length `d theta / 2 pi`, sampled at
//! equispaced nodes. The real-line rules are Gauss rules for the classical
//! weights `e^{-t^2}` on the line, `e^{-t}` on the half line and `1` on
//! `[-1, 1]`, built from the three-term recurrence of the matching family.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GaussKind {
    /// Weight `e^{-t^2}` on the real line.
    Hermite,
    /// Weight `e^{-t}` on `[0, inf)`.
    Laguerre,
    /// Weight `1` on `[-1, 1]`.
    Legendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadratureKind {
    UnitCircle,
    Gauss(GaussKind),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    nodes: Vec<C64>,
    weights: Vec<f64>,
    exactness_degree: usize,
}

impl GaussKind {
    /// Monic recurrence `p_{k+1} = (x - a_k) p_k - b_k p_{k-1}`: returns `(a_k, b_k)`.
    fn recurrence(self, k: usize) -> (f64, f64) {
        let kf = k as f64;
        match self {
            GaussKind::Hermite => (0.0, kf / 2.0),
            GaussKind::Laguerre => (2.0 * kf + 1.0, kf * kf),
            GaussKind::Legendre => (0.0, kf * kf / (4.0 * kf * kf - 1.0)),
        }
    }

    /// Total mass of the weight.
    fn mass(self) -> f64 {
        match self {
            GaussKind::Hermite => PI.sqrt(),
            GaussKind::Laguerre => 1.0,
            GaussKind::Legendre => 2.0,
        }
    }

    /// Orthonormal polynomials `p_0 .. p_n` at `x`, and the derivative of `p_n`.
    fn orthonormal(self, n: usize, x: f64) -> (Vec<f64>, f64) {
        let mut p = Vec::with_capacity(n + 1);
        let mut dp_prev = 0.0;
        let mut dp = 0.0;
        p.push(1.0 / self.mass().sqrt());
        let mut prev = 0.0;
        for k in 0..n {
            let (a, b) = self.recurrence(k);
            let (_, b_next) = self.recurrence(k + 1);
            let sb = b.sqrt();
            let sb_next = b_next.sqrt();
            let cur = p[k];
            let next = ((x - a) * cur - sb * prev) / sb_next;
            let dnext = (cur + (x - a) * dp - sb * dp_prev) / sb_next;
            p.push(next);
            prev = cur;
            dp_prev = dp;
            dp = dnext;
        }
        (p, dp)
    }
}

impl QuadratureRule {
    /// Equispaced rule for `d theta / 2 pi`: nodes `e^{2 pi i j / n}`, weights `1/n`.
    pub fn unit_circle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a quadrature rule needs at least one node".into()));
        }
        Ok(Self {
            kind: QuadratureKind::UnitCircle,
            nodes: (0..n)
                .map(|j| C64::from_polar(1.0, TAU * j as f64 / n as f64))
                .collect(),
            weights: vec![1.0 / n as f64; n],
            exactness_degree: n - 1,
        })
    }

    /// `n`-point Gauss rule for the given classical weight.
    pub fn gauss(kind: GaussKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a quadrature rule needs at least one node".into()));
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let (a, _) = kind.recurrence(k);
            jacobi[(k, k)] = a;
            if k + 1 < n {
                let (_, b) = kind.recurrence(k + 1);
                jacobi[(k, k + 1)] = b.sqrt();
                jacobi[(k + 1, k)] = b.sqrt();
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));

        // Newton polish on p_n, then Christoffel weights 1 / sum_k p_k(x)^2.
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp) = kind.orthonormal(n, *x);
                if dp != 0.0 {
                    *x -= p[n] / dp;
                }
            }
            let (p, _) = kind.orthonormal(n - 1, *x);
            weights.push(1.0 / p.iter().map(|v| v * v).sum::<f64>());
        }
        Ok(Self {
            kind: QuadratureKind::Gauss(kind),
            nodes: nodes.into_iter().map(|x| C64::new(x, 0.0)).collect(),
            weights,
            exactness_degree: 2 * n - 1,
        })
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// For Gauss rules the maximal polynomial degree integrated exactly; for the
    /// circle rule the largest `|k - m|` with `z^k conj(z)^m` integrated exactly.
    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn integrate(&self, f: impl Fn(C64) -> C64) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }

    /// Degree the rule must reach for `f conj(h)`, where the remaining factors of the
    /// integrand add `extra` (a Laurent degree on the circle).
    pub fn required_degree(&self, deg_f: usize, deg_h: usize, extra: usize) -> usize {
        match self.kind {
            QuadratureKind::UnitCircle => deg_f.max(deg_h) + extra,
            QuadratureKind::Gauss(_) => deg_f + deg_h + extra,
        }
    }

    pub fn check_degree(&self, deg_f: usize, deg_h: usize, extra: usize) -> Result<()> {
        let required = self.required_degree(deg_f, deg_h, extra);
        if required > self.exactness_degree {
            return Err(Error::InsufficientRule {
                exactness: self.exactness_degree,
                required,
            });
        }
        Ok(())
    }

    /// `int f conj(h) d mu`, after checking exactness.
    pub fn integrate_product(&self, f: &CPoly, h: &CPoly) -> Result<C64> {
        let (Some(df), Some(dh)) = (f.degree(), h.degree()) else {
            return Ok(C64::new(0.0, 0.0));
        };
        self.check_degree(df, dh, 0)?;
        Ok(self.integrate(|z| f.eval(z) * h.eval(z).conj()))
    }
}
