use std::f64::consts::TAU;

use crate::diffop::LinearDiffOp;
use crate::error::{Error, Result};
use crate::families::hermite;
use crate::poly::{factorial, CPoly};
use crate::quadrature::{GaussKind, QuadratureKind};
use crate::series::TruncatedSeries;
use crate::C64;

/// A base system `g_n` with exponential generating function `f(w) e^{t u(w)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSystem {
    /// `g_n = t^n`, `f = 1`, `u = w`; orthonormal on the unit circle.
    Monomial,
    /// `g_n = H_n`, `f = e^{-w^2}`, `u = 2w`; orthogonal for `e^{-t^2} dt`.
    Hermite,
}

impl BaseSystem {
    pub fn g(self, n: usize) -> CPoly {
        match self {
            BaseSystem::Monomial => CPoly::monomial(n),
            BaseSystem::Hermite => hermite(n),
        }
    }

    /// `u(w) = u_scale * w` for both systems.
    pub fn u_scale(self) -> f64 {
        match self {
            BaseSystem::Monomial => 1.0,
            BaseSystem::Hermite => 2.0,
        }
    }

    pub fn u_series(self, order: usize) -> TruncatedSeries {
        TruncatedSeries::variable(order).scale(C64::new(self.u_scale(), 0.0))
    }

    pub fn f_series(self, order: usize) -> TruncatedSeries {
        match self {
            BaseSystem::Monomial => TruncatedSeries::constant(C64::new(1.0, 0.0), order),
            BaseSystem::Hermite => {
                TruncatedSeries::new(vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)], order)
                    .exp()
                    .expect("-w^2 vanishes at zero")
            }
        }
    }

    pub fn u_at(self, w: C64) -> C64 {
        w * self.u_scale()
    }

    pub fn f_at(self, w: C64) -> C64 {
        match self {
            BaseSystem::Monomial => C64::new(1.0, 0.0),
            BaseSystem::Hermite => (-w * w).exp(),
        }
    }

    /// Orthogonality measure of `g_n`.
    pub fn measure(self) -> QuadratureKind {
        match self {
            BaseSystem::Monomial => QuadratureKind::UnitCircle,
            BaseSystem::Hermite => QuadratureKind::Gauss(GaussKind::Hermite),
        }
    }

    /// `int |g_n|^2 d mu`: 1 on the circle, `2^n n! sqrt(pi)` for Hermite.
    pub fn norm_squared(self, n: usize) -> f64 {
        match self {
            BaseSystem::Monomial => 1.0,
            BaseSystem::Hermite => 2f64.powi(n as i32) * factorial(n) * std::f64::consts::PI.sqrt(),
        }
    }
}

/// Generating function `F(t, w) = f(w) e^{t u(w)} / p(u(w))` over a base system.
#[derive(Clone, Debug, PartialEq)]
pub struct GenFnSpec {
    p: CPoly,
    system: BaseSystem,
}

impl GenFnSpec {
    /// Requires `p(0) != 0`.
    pub fn new(p: CPoly, system: BaseSystem) -> Result<Self> {
        if p.coeff(0) == C64::new(0.0, 0.0) {
            return Err(Error::Domain("p(0) must be nonzero".into()));
        }
        Ok(Self { p, system })
    }

    pub fn p(&self) -> &CPoly {
        &self.p
    }

    pub fn system(&self) -> BaseSystem {
        self.system
    }

    /// `c_k`, the coefficients of `p`.
    pub fn c(&self) -> &[C64] {
        self.p.coeffs()
    }

    /// `sum_k c_k (d/dt)^k`, which maps `phi_n` to `g_n`.
    pub fn operator(&self) -> LinearDiffOp {
        LinearDiffOp::constant(self.c())
    }

    /// `b_j = (1/p(u(w)))^(j)(0)` for `j = 0..=n`.
    pub fn b_coeffs(&self, n: usize) -> Vec<C64> {
        let composed = TruncatedSeries::compose(&self.p, &self.system.u_series(n + 1))
            .expect("u vanishes at zero");
        let recip = composed.recip().expect("p(0) != 0");
        recip
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, &b)| b * factorial(j))
            .collect()
    }

    /// Radius of the largest disk around `w = 0` on which `1/p(u(w))` is analytic.
    pub fn singularity_radius(&self) -> f64 {
        if self.p.degree() == Some(0) {
            return f64::INFINITY;
        }
        let roots = self.p.roots().expect("deg p >= 1");
        roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min) / self.system.u_scale()
    }

    /// Taylor coefficients in `w` of `F(t, w)` up to `w^{order-1}`.
    pub fn generating_coeffs(&self, t: C64, order: usize) -> Vec<C64> {
        let u = self.system.u_series(order);
        let exp = u.scale(t).exp().expect("u vanishes at zero");
        let inv = TruncatedSeries::compose(&self.p, &u)
            .and_then(|s| s.recip())
            .expect("p(0) != 0");
        (&(&inv * &self.system.f_series(order)) * &exp).coeffs().to_vec()
    }
}

/// `phi_n(t) = sum_j C(n, j) b_j g_{n-j}(t)`, of exact degree `n`.
pub fn phi_family(spec: &GenFnSpec, n: usize) -> CPoly {
    let b = spec.b_coeffs(n);
    let mut binom = 1.0;
    let mut acc = CPoly::zero();
    for (j, &bj) in b.iter().enumerate() {
        acc = &acc + &spec.system.g(n - j).scale(bj * binom);
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// `phi_n(t) = n!/(2 pi i) * contour integral of F(t, w) w^{-n-1} over |w| = radius`,
/// by the `nodes`-point trapezoid rule.
pub fn phi_contour_rep(
    spec: &GenFnSpec,
    n: usize,
    t: C64,
    radius: f64,
    nodes: usize,
) -> Result<C64> {
    let limit = spec.singularity_radius();
    if !(radius > 0.0 && radius < limit) {
        return Err(Error::Contour { radius, limit });
    }
    if nodes == 0 {
        return Err(Error::Domain("contour rule needs at least one node".into()));
    }
    let sys = spec.system;
    let sum: C64 = (0..nodes)
        .map(|j| {
            let w = C64::from_polar(radius, TAU * j as f64 / nodes as f64);
            let u = sys.u_at(w);
            sys.f_at(w) * (t * u).exp() / spec.p.eval(u) * w.powi(-(n as i32))
        })
        .sum();
    Ok(sum * factorial(n) / nodes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{y_family, FamilyParams};
    use crate::poly::identity_residual;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn trivial_p_gives_base_system() {
        for sys in [BaseSystem::Monomial, BaseSystem::Hermite] {
            let spec = GenFnSpec::new(CPoly::one(), sys).unwrap();
            for n in 0..8 {
                assert_eq!(phi_family(&spec, n), sys.g(n));
            }
        }
        assert!(GenFnSpec::new(CPoly::monomial(1), BaseSystem::Monomial).is_err());
    }

    #[test]
    fn b0_is_reciprocal_of_p0() {
        let spec = GenFnSpec::new(CPoly::from_real(&[4.0, 1.0, -2.0]), BaseSystem::Hermite).unwrap();
        assert_eq!(spec.b_coeffs(3)[0], c(0.25));
    }

    #[test]
    fn monomial_system_reproduces_y_family() {
        for (r, alpha) in [(1usize, 1.0), (2, -1.0), (3, 0.5)] {
            let mut pc = vec![0.0; r + 1];
            pc[0] = 1.0;
            pc[r] = alpha;
            let spec = GenFnSpec::new(CPoly::from_real(&pc), BaseSystem::Monomial).unwrap();
            let params = FamilyParams::new(r, alpha).unwrap();
            for n in 0..=15 {
                let phi = phi_family(&spec, n);
                let solved = params.operator().solve(&CPoly::monomial(n)).unwrap();
                assert!(phi.relative_distance(&solved) <= 1e-12, "r={r} n={n}");
                assert!(phi.relative_distance(&y_family(params, n)) <= 1e-12);
            }
        }
    }

    #[test]
    fn phi_has_degree_n_and_solves_its_ode() {
        for sys in [BaseSystem::Monomial, BaseSystem::Hermite] {
            let spec = GenFnSpec::new(CPoly::from_real(&[2.0, -1.0, 0.5, 0.1]), sys).unwrap();
            for n in 0..=15 {
                let phi = phi_family(&spec, n);
                assert_eq!(phi.degree(), Some(n));
                let mut terms: Vec<CPoly> = spec
                    .c()
                    .iter()
                    .enumerate()
                    .map(|(k, &ck)| phi.derivative(k).scale(ck))
                    .collect();
                terms.push(-sys.g(n));
                let res = identity_residual(&terms);
                let rel = spec.operator().apply(&phi).relative_distance(&sys.g(n));
                assert!(res <= 1e-12, "{sys:?} n={n} res={res:e} rel={rel:e}");
            }
        }
    }

    #[test]
    fn contour_examples() {
        let one = GenFnSpec::new(CPoly::one(), BaseSystem::Monomial).unwrap();
        let v = phi_contour_rep(&one, 0, c(0.4), 0.5, 64).unwrap();
        assert!((v - c(1.0)).norm() < 1e-14);

        let spec = GenFnSpec::new(CPoly::from_real(&[1.0, 0.0, 1.0]), BaseSystem::Monomial).unwrap();
        let want = phi_family(&spec, 5).eval(c(0.3));
        let got = phi_contour_rep(&spec, 5, c(0.3), 0.5, 256).unwrap();
        assert!((got - want).norm() <= 1e-7 * want.norm());
        let coarse = phi_contour_rep(&spec, 5, c(0.3), 0.5, 128).unwrap();
        assert!((got - coarse).norm() < 1e-9);

        assert!(matches!(
            phi_contour_rep(&spec, 5, c(0.3), 1.0, 256),
            Err(Error::Contour { .. })
        ));
        let herm = GenFnSpec::new(CPoly::from_real(&[2.0, 1.0]), BaseSystem::Hermite).unwrap();
        assert!((herm.singularity_radius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generating_coeffs_times_factorial_give_phi() {
        for sys in [BaseSystem::Monomial, BaseSystem::Hermite] {
            let spec = GenFnSpec::new(CPoly::from_real(&[2.0, 1.0]), sys).unwrap();
            let t = C64::new(0.3, -0.2);
            let coeffs = spec.generating_coeffs(t, 12);
            for (n, a) in coeffs.iter().enumerate() {
                let want = phi_family(&spec, n).eval(t);
                assert!((a * factorial(n) - want).norm() <= 1e-12 * want.norm().max(1.0));
            }
        }
    }
}
