//! Pencils attached to the explicit families.
//!
//! A banded pencil `(L, M)` encodes a recurrence `L y(z) = z M y(z)` on the
//! vector `y = (y_0, y_1, ...)`; a differential pencil `(R, S)` encodes an
//! eigenvalue problem `R y_n = lambda_n S y_n` with operators independent of `n`.

use crate::diffop::LinearDiffOp;
use crate::error::{Error, Result};
use crate::families::{phi_family, w_family, y_family, BaseSystem, FamilyParams, GenFnSpec};
use crate::poly::{factorial, falling_factorial_int, identity_residual, CPoly};
use crate::C64;

/// Square `size x size` matrix stored by diagonals.
///
/// `bands[lower + o][n]` holds the entry at `(n, n + o)` for `-lower <= o <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    size: usize,
    lower: usize,
    upper: usize,
    bands: Vec<Vec<C64>>,
}

impl BandedMatrix {
    pub fn zeros(size: usize, lower: usize, upper: usize) -> Self {
        Self {
            size,
            lower,
            upper,
            bands: vec![vec![C64::new(0.0, 0.0); size]; lower + upper + 1],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `(lower, upper)` bandwidths.
    pub fn bandwidths(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    fn slot(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        if i >= self.size || j >= self.size {
            return None;
        }
        let o = j as isize - i as isize;
        (-(self.lower as isize) <= o && o <= self.upper as isize)
            .then(|| ((o + self.lower as isize) as usize, i))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j)
            .map_or(C64::new(0.0, 0.0), |(b, n)| self.bands[b][n])
    }

    /// Adds `v` at `(i, j)`. Entries outside the matrix are dropped, which is how
    /// rows near the truncation edge lose their references to indices `>= size`.
    ///
    /// Panics if `(i, j)` is inside the matrix but outside the declared band.
    pub fn add(&mut self, i: isize, j: isize, v: C64) {
        if i < 0 || j < 0 || i as usize >= self.size || j as usize >= self.size {
            return;
        }
        let (b, n) = self
            .slot(i as usize, j as usize)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) is outside the declared band"));
        self.bands[b][n] += v;
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `(A v)_i` for one row.
    pub fn row_dot(&self, i: usize, v: &[C64]) -> C64 {
        let lo = i.saturating_sub(self.lower);
        let hi = (i + self.upper).min(self.size - 1);
        (lo..=hi).map(|j| self.get(i, j) * v[j]).sum()
    }
}

/// Truncated pencil `L y = z M y` of size `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedPencil {
    pub l: BandedMatrix,
    pub m: BandedMatrix,
}

impl BandedPencil {
    pub fn size(&self) -> usize {
        self.l.size()
    }

    /// Largest upper bandwidth of `L` and `M`: rows at or past `size - upper`
    /// reference truncated indices.
    pub fn upper(&self) -> usize {
        self.l.bandwidths().1.max(self.m.bandwidths().1)
    }
}

/// Families with a recurrence pencil and a differential pencil.
#[derive(Clone, Debug, PartialEq)]
pub enum RecurrenceFamily {
    /// `z^n`.
    Monomial,
    /// `y_n(r, alpha)`.
    Y { r: usize, alpha: f64 },
    /// `w_n(alpha) = y_n(2, alpha)`, `alpha < 0`.
    W { alpha: f64 },
    /// `phi_n` generated by `e^{tw} / p(w)` over monomials.
    MonomialGenerating { p: CPoly },
    /// `phi_n` generated by `e^{2tw - w^2} / p(2w)` over Hermite polynomials.
    HermiteGenerating { p: CPoly },
}

impl RecurrenceFamily {
    /// `y_0 .. y_{count-1}`.
    pub fn generate(&self, count: usize) -> Result<Vec<CPoly>> {
        match self {
            RecurrenceFamily::Monomial => Ok((0..count).map(CPoly::monomial).collect()),
            RecurrenceFamily::Y { r, alpha } => {
                let params = FamilyParams::new(*r, *alpha)?;
                Ok((0..count).map(|n| y_family(params, n)).collect())
            }
            RecurrenceFamily::W { alpha } => (0..count).map(|n| w_family(*alpha, n)).collect(),
            RecurrenceFamily::MonomialGenerating { p } => {
                let spec = GenFnSpec::new(p.clone(), BaseSystem::Monomial)?;
                Ok((0..count).map(|n| phi_family(&spec, n)).collect())
            }
            RecurrenceFamily::HermiteGenerating { p } => {
                let spec = GenFnSpec::new(p.clone(), BaseSystem::Hermite)?;
                Ok((0..count).map(|n| phi_family(&spec, n)).collect())
            }
        }
    }

    /// Coefficients of `p` for the generating-function families, `1 + alpha w^r` for `y_n`.
    fn p_coeffs(&self) -> Result<Vec<C64>> {
        let p = match self {
            RecurrenceFamily::Monomial => CPoly::one(),
            RecurrenceFamily::Y { r, alpha } => {
                FamilyParams::new(*r, *alpha)?;
                &CPoly::one() + &CPoly::term(C64::new(*alpha, 0.0), *r)
            }
            RecurrenceFamily::W { alpha } => {
                if !(*alpha < 0.0) {
                    return Err(Error::Domain(format!("w_n requires alpha < 0, got {alpha}")));
                }
                &CPoly::one() + &CPoly::term(C64::new(*alpha, 0.0), 2)
            }
            RecurrenceFamily::MonomialGenerating { p } | RecurrenceFamily::HermiteGenerating { p } => {
                GenFnSpec::new(p.clone(), BaseSystem::Monomial)?;
                p.clone()
            }
        };
        Ok(p.coeffs().to_vec())
    }

    /// `(R, S, lambda_n)` with `R y_n = lambda_n S y_n`.
    pub fn diff_pencil(&self) -> Result<DiffPencil> {
        match self {
            RecurrenceFamily::Monomial => Ok(DiffPencil::euler()),
            RecurrenceFamily::Y { r, alpha } => Ok(DiffPencil::y_family(FamilyParams::new(*r, *alpha)?)),
            RecurrenceFamily::W { .. } | RecurrenceFamily::MonomialGenerating { .. } => {
                Ok(DiffPencil::monomial_generating(&self.p_coeffs()?))
            }
            RecurrenceFamily::HermiteGenerating { p } => Ok(DiffPencil::hermite_generating(
                GenFnSpec::new(p.clone(), BaseSystem::Hermite)?.c(),
            )),
        }
    }
}

/// `1 / m!`, with `1/m! := 1` for negative `m`.
fn inv_factorial(m: isize) -> f64 {
    if m < 0 {
        1.0
    } else {
        1.0 / factorial(m as usize)
    }
}

/// Truncated recurrence pencil of size `size` for `family`.
///
/// Generating-function families over monomials satisfy
/// `(n+1) sum_k c_k phi_{n+1-k} / (n+1-k)! = t sum_k c_k phi_{n-k} / (n-k)!`,
/// and over Hermite polynomials, with `s_k = c_k 2^k`,
/// `(n+1) sum_k s_k phi_{n+1-k} / (n+1-k)! + 2 sum_k s_k phi_{n-1-k} / (n-1-k)!
///  = 2t sum_k s_k phi_{n-k} / (n-k)!`.
/// `y_n(r, alpha)` and `w_n` are the monomial case with `p = 1 + alpha w^r`,
/// stored with row `n` scaled by `n!` so the entries are `c_k [n+1]_k` and `c_k [n]_k`.
pub fn pencil_from_recurrence(family: &RecurrenceFamily, size: usize) -> Result<BandedPencil> {
    if size == 0 {
        return Err(Error::Domain("pencil truncation must be positive".into()));
    }
    let c = family.p_coeffs()?;
    let d = c.len() - 1;
    match family {
        RecurrenceFamily::HermiteGenerating { .. } => {
            let s: Vec<C64> = c
                .iter()
                .enumerate()
                .map(|(k, &ck)| ck * 2f64.powi(k as i32))
                .collect();
            let mut l = BandedMatrix::zeros(size, d + 1, 1);
            let mut m = BandedMatrix::zeros(size, d, 0);
            for n in 0..size as isize {
                for (k, &sk) in s.iter().enumerate() {
                    let k = k as isize;
                    l.add(n, n + 1 - k, sk * ((n + 1) as f64 * inv_factorial(n + 1 - k)));
                    l.add(n, n - 1 - k, sk * (2.0 * inv_factorial(n - 1 - k)));
                    m.add(n, n - k, sk * (2.0 * inv_factorial(n - k)));
                }
            }
            Ok(BandedPencil { l, m })
        }
        RecurrenceFamily::MonomialGenerating { .. } => {
            let mut l = BandedMatrix::zeros(size, d.saturating_sub(1), 1);
            let mut m = BandedMatrix::zeros(size, d, 0);
            for n in 0..size as isize {
                for (k, &ck) in c.iter().enumerate() {
                    let k = k as isize;
                    l.add(n, n + 1 - k, ck * ((n + 1) as f64 * inv_factorial(n + 1 - k)));
                    m.add(n, n - k, ck * inv_factorial(n - k));
                }
            }
            Ok(BandedPencil { l, m })
        }
        _ => {
            // the same recurrence with row n multiplied by n!
            let mut l = BandedMatrix::zeros(size, d.saturating_sub(1), 1);
            let mut m = BandedMatrix::zeros(size, d, 0);
            for n in 0..size {
                for (k, &ck) in c.iter().enumerate() {
                    if ck == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (ni, ki) = (n as isize, k as isize);
                    l.add(ni, ni + 1 - ki, ck * falling_factorial_int(n + 1, k));
                    m.add(ni, ni - ki, ck * falling_factorial_int(n, k));
                }
            }
            Ok(BandedPencil { l, m })
        }
    }
}

/// `max |(L y)_n - z (M y)_n| / (1 + |z (M y)_n|)` over rows `n < T - upper` and samples.
///
/// Both row combinations are formed as polynomials before evaluation, so the
/// factorial-size cancellations between neighbouring members happen on
/// coefficients rather than on sampled values.
pub fn pencil_residual(pencil: &BandedPencil, polys: &[CPoly], samples: &[C64]) -> Result<f64> {
    let size = pencil.size();
    let upper = pencil.upper();
    let needed = size + upper;
    if polys.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: polys.len(),
        });
    }
    let combine = |a: &BandedMatrix, n: usize| {
        let (lo, up) = a.bandwidths();
        (n.saturating_sub(lo)..=(n + up).min(size - 1)).fold(CPoly::zero(), |acc, j| {
            let v = a.get(n, j);
            if v == C64::new(0.0, 0.0) {
                acc
            } else {
                &acc + &polys[j].scale(v)
            }
        })
    };
    let z = CPoly::monomial(1);
    let mut worst = 0.0f64;
    for n in 0..size.saturating_sub(upper) {
        let zm = &z * &combine(&pencil.m, n);
        let diff = &combine(&pencil.l, n) - &zm;
        for &x in samples {
            worst = worst.max(diff.eval(x).norm() / (1.0 + zm.eval(x).norm()));
        }
    }
    Ok(worst)
}

/// `R y_n = lambda_n S y_n` with `lambda_n = eigenvalue_step * n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffPencil {
    pub r: LinearDiffOp,
    pub s: LinearDiffOp,
    pub eigenvalue_step: C64,
}

impl DiffPencil {
    pub fn eigenvalue(&self, n: usize) -> C64 {
        self.eigenvalue_step * n as f64
    }

    /// `z (z^n)' = n z^n`.
    pub fn euler() -> Self {
        Self {
            r: LinearDiffOp::euler(),
            s: LinearDiffOp::identity(),
            eigenvalue_step: C64::new(1.0, 0.0),
        }
    }

    /// `alpha z y^(r+1) + z y' = n (alpha y^(r) + y)`.
    pub fn y_family(params: FamilyParams) -> Self {
        let s = params.operator();
        let z = CPoly::monomial(1);
        Self {
            r: s.then_derivative(1).left_mul(&z),
            s,
            eigenvalue_step: C64::new(1.0, 0.0),
        }
    }

    /// `t sum_k c_k phi^(k+1) = n sum_k c_k phi^(k)`.
    pub fn monomial_generating(c: &[C64]) -> Self {
        let s = LinearDiffOp::constant(c);
        Self {
            r: s.then_derivative(1).left_mul(&CPoly::monomial(1)),
            s,
            eigenvalue_step: C64::new(1.0, 0.0),
        }
    }

    /// `sum_k c_k phi^(k+2) - 2t sum_k c_k phi^(k+1) = -2n sum_k c_k phi^(k)`,
    /// the Hermite equation applied to `S phi_n = H_n`.
    pub fn hermite_generating(c: &[C64]) -> Self {
        let s = LinearDiffOp::constant(c);
        let two_t = CPoly::from_real(&[0.0, 2.0]);
        let r = &s.then_derivative(2) - &s.then_derivative(1).left_mul(&two_t);
        Self {
            r,
            s,
            eigenvalue_step: C64::new(-2.0, 0.0),
        }
    }
}

/// Coefficientwise relative residual of `R y - lambda_n S y`.
///
/// Each `a_k y^(k)` of `R` and `-lambda_n b_k y^(k)` of `S` is a separate term, so the
/// scale is the largest term before cancellation (see [`identity_residual`]).
pub fn diff_pencil_residual(pencil: &DiffPencil, y: &CPoly, n: usize) -> f64 {
    let lambda = pencil.eigenvalue(n);
    let terms: Vec<CPoly> = pencil
        .r
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| a * &y.derivative(k))
        .chain(
            pencil
                .s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, b)| (b * &y.derivative(k)).scale(-lambda)),
        )
        .collect();
    identity_residual(&terms)
}
