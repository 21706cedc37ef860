//! Matrix-weight Sobolev inner products
//! `<f, h> = int (f, f', ..., f^(rho)) M0 conj(h, h', ..., h^(rho))^T d mu`.
//!
//! A weight is either a polynomial factor `G` with `M0 = G G*`, in which case
//! the form collapses to `sum_k int g_{f;k} conj(g_{h;k}) d mu` and is computed
//! on coefficients, or a dense matrix function sampled at the nodes.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::diffop::LinearDiffOp;
use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::quadrature::{QuadratureKind, QuadratureRule};
use crate::C64;

/// Relative pivot below which Gram-Schmidt reports a degenerate form.
pub const PIVOT_TOL: f64 = 1e-12;

/// Extra Gauss nodes beyond the polynomial degree.
const GAUSS_SURPLUS: usize = 8;

/// Polynomial factor `G = (g_{l,k})`, `0 <= l <= rho`, `0 <= k <= beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFactor {
    /// `entries[l][k]`
    entries: Vec<Vec<CPoly>>,
}

impl WeightFactor {
    pub fn new(entries: Vec<Vec<CPoly>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if cols == 0 || entries.iter().any(|row| row.len() != cols) {
            return Err(Error::UnsupportedShape(
                "factor needs at least one row and one column, all rows equally long".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Single column `(g_0, ..., g_rho)^T`.
    pub fn column(g: Vec<CPoly>) -> Result<Self> {
        Self::new(g.into_iter().map(|p| vec![p]).collect())
    }

    /// Constant single column.
    pub fn constant_column(c: &[C64]) -> Result<Self> {
        Self::column(c.iter().map(|&x| CPoly::constant(x)).collect())
    }

    /// `(1, 0, ..., 0, alpha)^T`, the factor behind `y_n(r, alpha)`.
    pub fn alpha_dr_plus_one(r: usize, alpha: f64) -> Self {
        let op = LinearDiffOp::alpha_dr_plus_one(r, alpha);
        let mut g = op.coeffs().to_vec();
        g.resize(r + 1, CPoly::zero());
        Self::column(g).expect("nonempty column")
    }

    pub fn rho(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn beta(&self) -> usize {
        self.entries[0].len() - 1
    }

    pub fn entry(&self, l: usize, k: usize) -> &CPoly {
        &self.entries[l][k]
    }

    /// Largest entry degree.
    pub fn degree(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter_map(CPoly::degree)
            .max()
            .unwrap_or(0)
    }

    /// `f -> sum_l g_{l,k} f^(l)` as a differential operator.
    pub fn column_operator(&self, k: usize) -> LinearDiffOp {
        LinearDiffOp::new(self.entries.iter().map(|row| row[k].clone()).collect())
    }

    /// `g_{f;k} = sum_l g_{l,k} f^(l)` for `k = 0..=beta`.
    pub fn factor_map(&self, f: &CPoly) -> Vec<CPoly> {
        (0..=self.beta())
            .map(|k| self.column_operator(k).apply(f))
            .collect()
    }

    pub fn matrix_at(&self, z: C64) -> DMatrix<C64> {
        DMatrix::from_fn(self.rho() + 1, self.beta() + 1, |l, k| self.entries[l][k].eval(z))
    }

    /// `M0(z) = G(z) G(z)*`.
    pub fn m0_at(&self, z: C64) -> DMatrix<C64> {
        let g = self.matrix_at(z);
        &g * g.adjoint()
    }

    /// Factor of the extended form `<f, h> + <g'_{f;k0}, g'_{h;k0}>`.
    ///
    /// The old column gains a zero row; the new column is
    /// `d_l = g_{l,k0}' + g_{l-1,k0}` with corner entry `g_{rho,k0}`.
    pub fn extend(&self, k0: usize) -> Result<Self> {
        if self.beta() != 0 {
            return Err(Error::UnsupportedShape(format!(
                "extension is implemented for single-column factors, got {} columns",
                self.beta() + 1
            )));
        }
        if k0 != 0 {
            return Err(Error::Domain(format!("column {k0} does not exist")));
        }
        let rho = self.rho();
        let g = |l: usize| &self.entries[l][k0];
        let mut rows = Vec::with_capacity(rho + 2);
        for l in 0..=rho {
            let mut d = g(l).derivative(1);
            if l > 0 {
                d = &d + g(l - 1);
            }
            rows.push(vec![g(l).clone(), d]);
        }
        rows.push(vec![CPoly::zero(), g(rho).clone()]);
        Self::new(rows)
    }

    pub fn dense(&self) -> DenseWeight {
        let factor = self.clone();
        DenseWeight::new(self.rho(), self.degree(), move |z| factor.m0_at(z))
    }
}

type MatrixFn = dyn Fn(C64) -> DMatrix<C64> + Send + Sync;

/// Pointwise Hermitian weight `M0(z)` of size `rho + 1`.
///
/// `degree` bounds the degree of the entries in `z` and in `conj(z)` separately;
/// it is used to size the exactness check.
#[derive(Clone)]
pub struct DenseWeight {
    rho: usize,
    degree: usize,
    eval: Arc<MatrixFn>,
}

impl DenseWeight {
    pub fn new(
        rho: usize,
        degree: usize,
        eval: impl Fn(C64) -> DMatrix<C64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            rho,
            degree,
            eval: Arc::new(eval),
        }
    }

    /// Constant matrix weight.
    pub fn constant(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::UnsupportedShape("weight matrix must be square".into()));
        }
        let rho = m.nrows() - 1;
        Ok(Self::new(rho, 0, move |_| m.clone()))
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn at(&self, z: C64) -> DMatrix<C64> {
        (self.eval)(z)
    }

    /// `M0(z)` is Hermitian with eigenvalues `>= -1e-12 * trace`.
    pub fn is_nonnegative_at(&self, z: C64) -> bool {
        let m = self.at(z);
        let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        if (&m - m.adjoint()).iter().any(|x| x.norm() > 1e-12 * scale) {
            return false;
        }
        let trace = m.trace().re;
        let eig = SymmetricEigen::new(m).eigenvalues;
        eig.iter().all(|&e| e >= -1e-12 * trace.abs())
    }
}

impl fmt::Debug for DenseWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseWeight")
            .field("rho", &self.rho)
            .field("degree", &self.degree)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum Weight {
    Factor(WeightFactor),
    Dense(DenseWeight),
}

impl Weight {
    pub fn rho(&self) -> usize {
        match self {
            Weight::Factor(g) => g.rho(),
            Weight::Dense(m) => m.rho(),
        }
    }

    fn dense(&self) -> DenseWeight {
        match self {
            Weight::Factor(g) => g.dense(),
            Weight::Dense(m) => m.clone(),
        }
    }
}

impl From<WeightFactor> for Weight {
    fn from(g: WeightFactor) -> Self {
        Weight::Factor(g)
    }
}

impl From<DenseWeight> for Weight {
    fn from(m: DenseWeight) -> Self {
        Weight::Dense(m)
    }
}

/// Orthogonal polynomials `y_0..y_N` with their squared norms `A_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSchmidt {
    pub polys: Vec<CPoly>,
    pub norms: Vec<f64>,
}

/// A weight together with the rule that realizes its scalar measure.
#[derive(Clone, Debug)]
pub struct SobolevSpace {
    weight: Weight,
    rule: QuadratureRule,
}

impl SobolevSpace {
    pub fn new(weight: impl Into<Weight>, rule: QuadratureRule) -> Self {
        Self {
            weight: weight.into(),
            rule,
        }
    }

    /// Sizes a rule of the given kind for polynomials up to `max_degree`:
    /// `2 D + 1` circle nodes or `D + 8` Gauss nodes, `D = max_degree + deg G`.
    pub fn for_degree(weight: impl Into<Weight>, kind: QuadratureKind, max_degree: usize) -> Result<Self> {
        let weight = weight.into();
        let wdeg = match &weight {
            Weight::Factor(g) => g.degree(),
            Weight::Dense(m) => m.degree(),
        };
        let d = max_degree + wdeg;
        let rule = match kind {
            QuadratureKind::UnitCircle => QuadratureRule::unit_circle(2 * d + 1)?,
            QuadratureKind::Gauss(g) => QuadratureRule::gauss(g, d + GAUSS_SURPLUS)?,
        };
        Ok(Self { weight, rule })
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// The form, through the factor when there is one.
    pub fn inner(&self, f: &CPoly, h: &CPoly) -> Result<C64> {
        match &self.weight {
            Weight::Factor(g) => {
                let gf = g.factor_map(f);
                let gh = g.factor_map(h);
                gf.iter()
                    .zip(&gh)
                    .try_fold(C64::new(0.0, 0.0), |acc, (a, b)| {
                        Ok(acc + self.rule.integrate_product(a, b)?)
                    })
            }
            Weight::Dense(m) => self.dense_inner(m, f, h),
        }
    }

    /// The form, always evaluated pointwise from `M0`.
    pub fn inner_dense(&self, f: &CPoly, h: &CPoly) -> Result<C64> {
        self.dense_inner(&self.weight.dense(), f, h)
    }

    fn dense_inner(&self, m: &DenseWeight, f: &CPoly, h: &CPoly) -> Result<C64> {
        let (Some(df), Some(dh)) = (f.degree(), h.degree()) else {
            return Ok(C64::new(0.0, 0.0));
        };
        let extra = match self.rule.kind() {
            QuadratureKind::UnitCircle => m.degree(),
            QuadratureKind::Gauss(_) => 2 * m.degree(),
        };
        self.rule.check_degree(df, dh, extra)?;
        let rho = m.rho();
        let fd: Vec<CPoly> = (0..=rho).map(|l| f.derivative(l)).collect();
        let hd: Vec<CPoly> = (0..=rho).map(|l| h.derivative(l)).collect();
        Ok(self.rule.integrate(|z| {
            let mz = m.at(z);
            let vf: Vec<C64> = fd.iter().map(|p| p.eval(z)).collect();
            let vh: Vec<C64> = hd.iter().map(|p| p.eval(z).conj()).collect();
            let mut acc = C64::new(0.0, 0.0);
            for (i, a) in vf.iter().enumerate() {
                for (j, b) in vh.iter().enumerate() {
                    acc += a * mz[(i, j)] * b;
                }
            }
            acc
        }))
    }

    /// Gram matrix of `1, z, ..., z^n_max`.
    pub fn gram_matrix(&self, n_max: usize) -> Result<DMatrix<C64>> {
        let mono: Vec<CPoly> = (0..=n_max).map(CPoly::monomial).collect();
        let mut g = DMatrix::zeros(n_max + 1, n_max + 1);
        for i in 0..=n_max {
            for j in 0..=n_max {
                g[(i, j)] = self.inner(&mono[i], &mono[j])?;
            }
        }
        Ok(g)
    }

    /// Smallest over largest eigenvalue of the monomial Gram matrix.
    ///
    /// Diagnostic only: well-posed spaces can still have tiny ratios.
    pub fn eigenvalue_ratio(&self, n_max: usize) -> Result<f64> {
        let eig = SymmetricEigen::new(self.gram_matrix(n_max)?).eigenvalues;
        let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(min / max)
    }

    /// Modified Gram-Schmidt on `basis` in order.
    ///
    /// Fails at the first `n` whose pivot `A_n` is at most `1e-12 <b_n, b_n>`.
    pub fn orthogonalize(&self, basis: &[CPoly]) -> Result<GramSchmidt> {
        let mut polys: Vec<CPoly> = Vec::with_capacity(basis.len());
        let mut norms = Vec::with_capacity(basis.len());
        for (n, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            for (y, &a) in polys.iter().zip(&norms) {
                let proj = self.inner(&v, y)? / a;
                v = &v - &y.scale(proj);
            }
            let pivot = self.inner(&v, &v)?.re;
            let scale = self.inner(b, b)?.re;
            if !(pivot > PIVOT_TOL * scale) {
                return Err(Error::DegenerateForm {
                    degree: n,
                    pivot: pivot / scale,
                });
            }
            polys.push(v);
            norms.push(pivot);
        }
        Ok(GramSchmidt { polys, norms })
    }

    /// Monic orthogonal polynomials of degrees `0..=n_max`.
    pub fn gram_schmidt(&self, n_max: usize) -> Result<GramSchmidt> {
        let mono: Vec<CPoly> = (0..=n_max).map(CPoly::monomial).collect();
        self.orthogonalize(&mono)
    }
}
