use std::f64::consts::PI;
use std::time::Instant;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use sobolev_core::families::{
    asymptotic_error, asymptotic_limit, check_root_location, phi_contour_rep, w_generating_coeffs,
    w_integral_rep, yhat_family, yhat_integral_rep,
};
use sobolev_core::pencil::{diff_pencil_residual, pencil_from_recurrence, pencil_residual};
use sobolev_core::poly::{factorial, identity_residual};
use sobolev_core::{
    BaseSystem, CPoly, Error, LinearDiffOp, Result as CoreResult, WeightFactor, XiTable, C64,
};

use crate::family::{FamilyKind, FamilySpec};
use crate::report::{Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Orthogonality,
    Recurrence,
    Ode,
    Generating,
    IntegralRep,
    Roots,
    Asymptotics,
    Extension,
    Pencil,
    GramSchmidt,
}

impl Suite {
    #[cfg(test)]
    pub const ALL: [Suite; 10] = [
        Suite::Orthogonality,
        Suite::Recurrence,
        Suite::Ode,
        Suite::Generating,
        Suite::IntegralRep,
        Suite::Roots,
        Suite::Asymptotics,
        Suite::Extension,
        Suite::Pencil,
        Suite::GramSchmidt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Recurrence => "recurrence",
            Suite::Ode => "ode",
            Suite::Generating => "generating",
            Suite::IntegralRep => "integral-rep",
            Suite::Roots => "roots",
            Suite::Asymptotics => "asymptotics",
            Suite::Extension => "extension",
            Suite::Pencil => "pencil",
            Suite::GramSchmidt => "gram-schmidt",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, false).ok()
    }

    pub fn default_family(self) -> FamilyKind {
        match self {
            Suite::Extension => FamilyKind::Example21,
            _ => FamilyKind::Y,
        }
    }

    pub fn default_nmax(self, system: BaseSystem) -> usize {
        match self {
            Suite::Orthogonality | Suite::Generating => 12,
            Suite::GramSchmidt => match system {
                BaseSystem::Monomial => 12,
                BaseSystem::Hermite => 10,
            },
            Suite::IntegralRep => 14,
            Suite::Roots => 20,
            Suite::Asymptotics => 30,
            Suite::Recurrence | Suite::Ode | Suite::Extension | Suite::Pencil => 15,
        }
    }

    fn supports(self, kind: FamilyKind) -> bool {
        match self {
            Suite::Roots | Suite::Asymptotics => matches!(kind, FamilyKind::Y | FamilyKind::W),
            Suite::Extension => kind == FamilyKind::Example21,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    #[serde(flatten)]
    pub family: FamilySpec,
    pub nmax: usize,
    pub seed: u64,
    pub tol_scale: f64,
}

impl SuiteParams {
    pub fn new(suite: Suite, family: FamilySpec, nmax: Option<usize>, seed: u64, tol_scale: f64) -> Self {
        let nmax = nmax.unwrap_or_else(|| suite.default_nmax(family.system()));
        Self {
            family,
            nmax,
            seed,
            tol_scale,
        }
    }

    pub fn label(&self) -> String {
        format!("{} nmax={} seed={}", self.family.label(), self.nmax, self.seed)
    }
}

/// Runs `suite`; `Err` is a usage error (unsupported family or invalid parameters).
pub fn run(suite: Suite, params: &SuiteParams) -> Result<Report, String> {
    let start = Instant::now();
    let kind = params.family.kind;
    if !suite.supports(kind) {
        return Err(format!("suite {} does not apply to family {}", suite.name(), kind.name()));
    }
    if !(params.tol_scale > 0.0 && params.tol_scale.is_finite()) {
        return Err(format!("tol-scale must be positive, got {}", params.tol_scale));
    }
    params
        .family
        .validate()
        .map_err(|e| format!("invalid parameters: {e}"))?;
    let mut ctx = Ctx {
        fam: &params.family,
        nmax: params.nmax,
        tol_scale: params.tol_scale,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
    };
    let outcome = match suite {
        Suite::Orthogonality => orthogonality(&mut ctx),
        Suite::Recurrence => recurrence(&mut ctx),
        Suite::Ode => ode(&mut ctx),
        Suite::Generating => generating(&mut ctx),
        Suite::IntegralRep => integral_rep(&mut ctx),
        Suite::Roots => roots(&mut ctx),
        Suite::Asymptotics => asymptotics(&mut ctx),
        Suite::Extension => extension(&mut ctx),
        Suite::Pencil => pencil(&mut ctx),
        Suite::GramSchmidt => gram_schmidt(&mut ctx),
    };
    let checks = match outcome {
        Ok(checks) => checks,
        Err(Error::Precondition(msg)) => vec![Check::skipped(
            suite.name(),
            "suite preconditions",
            format!("precondition not met: {msg}"),
        )],
        Err(e) => vec![Check::failed(suite.name(), "suite evaluation", e.to_string())],
    };
    let params_json = serde_json::to_value(params).expect("parameters are plain data");
    Ok(Report::new(suite.name(), params_json, checks, start.elapsed().as_secs_f64()))
}

struct Ctx<'a> {
    fam: &'a FamilySpec,
    nmax: usize,
    tol_scale: f64,
    rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn check(&self, id: &str, reference: &str, residual: f64, base_tol: f64) -> Check {
        Check::measured(id, reference, residual, base_tol * self.tol_scale)
    }

    fn disk_samples(&mut self, count: usize, radius: f64) -> Vec<C64> {
        (0..count)
            .map(|_| {
                let rad = radius * self.rng.gen::<f64>().sqrt();
                C64::from_polar(rad, self.rng.gen_range(0.0..2.0 * PI))
            })
            .collect()
    }
}

/// `a_k y^(k)` for each coefficient of `op`, kept apart so residuals can be scaled
/// by the largest term rather than by what is left after cancellation.
fn op_terms(op: &LinearDiffOp, y: &CPoly) -> Vec<CPoly> {
    op.coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| a * &y.derivative(k))
        .collect()
}

/// `sum_k |c_k| |z|^k`, the rounding scale of evaluating `poly` at `z`.
fn eval_scale(poly: &CPoly, z: C64) -> f64 {
    let rz = z.norm();
    poly.coeffs().iter().rev().fold(0.0, |acc, c| acc * rz + c.norm())
}

fn eval_error(got: C64, poly: &CPoly, z: C64) -> f64 {
    let scale = eval_scale(poly, z);
    let diff = (got - poly.eval(z)).norm();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn orthogonality(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let space = fam.space(ctx.nmax)?;
    let polys = fam.polys(ctx.nmax + 1)?;
    let sys = fam.system();
    let (mut diag, mut off) = (0.0f64, 0.0f64);
    for (n, yn) in polys.iter().enumerate() {
        for (m, ym) in polys.iter().enumerate() {
            let v = space.inner(yn, ym)?;
            let (tn, tm) = (sys.norm_squared(n), sys.norm_squared(m));
            if n == m {
                diag = diag.max((v - C64::new(tn, 0.0)).norm() / tn);
            } else {
                off = off.max(v.norm() / (tn * tm).sqrt());
            }
        }
    }
    let tol = match fam.kind {
        FamilyKind::Phi | FamilyKind::PhiHermite | FamilyKind::Hermite => 1e-8,
        _ => 1e-9,
    };
    Ok(vec![
        ctx.check("diagonal", "Sobolev norms equal tau_n", diag, tol),
        ctx.check("off-diagonal", "Sobolev orthogonality", off, tol),
    ])
}

fn recurrence(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let size = ctx.nmax;
    let pencil = pencil_from_recurrence(&fam.recurrence()?, size)?;
    let polys = fam.polys(size + pencil.upper())?;
    let samples = ctx.disk_samples(5, 2.0);
    let banded = pencil_residual(&pencil, &polys, &samples)?;

    // S y_n = g_n, so S y_n inherits the recurrence of the base system
    let op = fam.operator();
    let z = CPoly::monomial(1);
    let two_t = CPoly::from_real(&[0.0, 2.0]);
    let mut lifted = 0.0f64;
    for n in 0..size {
        let mut terms = op_terms(&op, &polys[n + 1]);
        match fam.system() {
            BaseSystem::Monomial => {
                terms.extend(op_terms(&op, &polys[n]).iter().map(|t| -(&z * t)));
            }
            BaseSystem::Hermite => {
                terms.extend(op_terms(&op, &polys[n]).iter().map(|t| -(&two_t * t)));
                if n > 0 {
                    let c = C64::new(2.0 * n as f64, 0.0);
                    terms.extend(op_terms(&op, &polys[n - 1]).iter().map(|t| t.scale(c)));
                }
            }
        }
        lifted = lifted.max(identity_residual(&terms));
    }
    Ok(vec![
        ctx.check("banded-pencil", "three-term type recurrence as a banded pencil", banded, 1e-9),
        ctx.check("lifted-recurrence", "S y_n follows the base-system recurrence", lifted, 1e-10),
    ])
}

fn ode(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let polys = fam.polys(ctx.nmax + 1)?;
    let op = fam.operator();
    let dp = fam.recurrence()?.diff_pencil()?;
    let (mut defining, mut solver, mut eigen) = (0.0f64, 0.0f64, 0.0f64);
    for (n, y) in polys.iter().enumerate() {
        let g = fam.system().g(n);
        let mut terms = op_terms(&op, y);
        terms.push(-g.clone());
        defining = defining.max(identity_residual(&terms));
        solver = solver.max(op.solve(&g)?.relative_distance(y));
        eigen = eigen.max(diff_pencil_residual(&dp, y, n));
    }
    Ok(vec![
        ctx.check("defining-equation", "S y_n = g_n", defining, 1e-9),
        ctx.check("solver-round-trip", "degree-preserving ODE solver", solver, 1e-9),
        ctx.check("eigen-ode", "R y_n = lambda_n S y_n", eigen, 1e-9),
    ])
}

fn generating(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let spec = fam.genfn()?;
    let order = ctx.nmax + 1;
    let polys = fam.polys(order)?;
    let samples = ctx.disk_samples(5, 2.0);
    let compare = |coeffs: &[C64], t: C64| -> f64 {
        coeffs
            .iter()
            .zip(&polys)
            .enumerate()
            .map(|(n, (a, y))| eval_error(a * factorial(n), y, t))
            .fold(0.0, f64::max)
    };
    let mut series = 0.0f64;
    let mut closed = 0.0f64;
    for &t in &samples {
        series = series.max(compare(&spec.generating_coeffs(t, order), t));
        if fam.kind == FamilyKind::W {
            closed = closed.max(compare(&w_generating_coeffs(fam.alpha, t, order)?, t));
        }
    }
    let mut checks = vec![ctx.check("series", "e^{t u(w)} f(w) / p(u(w)) generates y_n / n!", series, 1e-10)];
    if fam.kind == FamilyKind::W {
        checks.push(ctx.check(
            "closed-form-series",
            "beta^2 / (beta^2 - z^2) e^{tz} generates w_n / n!",
            closed,
            1e-10,
        ));
    }
    Ok(checks)
}

fn integral_rep(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let spec = fam.genfn()?;
    let polys = fam.polys(ctx.nmax + 1)?;
    let limit = spec.singularity_radius();
    let radius = if limit.is_finite() { 0.5 * limit } else { 1.0 };
    let mut contour = 0.0f64;
    for t in ctx.disk_samples(5, 1.0) {
        for (n, y) in polys.iter().enumerate() {
            contour = contour.max(eval_error(phi_contour_rep(&spec, n, t, radius, 256)?, y, t));
        }
    }
    let mut checks = vec![ctx.check("contour", "Cauchy integral of the generating function", contour, 1e-7)];

    let laplace_alpha = match fam.kind {
        FamilyKind::W => Some(fam.alpha),
        FamilyKind::Y if fam.r == 2 && fam.alpha < 0.0 => Some(fam.alpha),
        _ => None,
    };
    if let Some(alpha) = laplace_alpha {
        let xi = XiTable::hermite(ctx.nmax);
        let params = fam.family_params()?;
        let (mut w_err, mut yhat_err) = (0.0f64, 0.0f64);
        for _ in 0..5 {
            let t: f64 = ctx.rng.gen_range(-2.0..2.0);
            let tz = C64::new(t, 0.0);
            for (n, y) in polys.iter().enumerate() {
                w_err = w_err.max(eval_error(C64::new(w_integral_rep(alpha, n, t)?, 0.0), y, tz));
                let yhat = yhat_family(&xi, params, n)?;
                yhat_err = yhat_err.max(eval_error(yhat_integral_rep(&xi, alpha, n, t)?, &yhat, tz));
            }
        }
        checks.push(ctx.check("laplace-w", "two-sided Laplace representation of w_n", w_err, 1e-7));
        checks.push(ctx.check(
            "laplace-yhat",
            "two-sided Laplace representation of yhat_n with Hermite p_n",
            yhat_err,
            1e-7,
        ));
    }
    Ok(checks)
}

fn roots(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let params = ctx.fam.family_params()?;
    let mut failures = 0usize;
    let mut closest = f64::INFINITY;
    for n in 0..=ctx.nmax {
        let rep = check_root_location(params, n)?;
        closest = closest.min(rep.min_nonzero_modulus);
        if !rep.passes {
            failures += 1;
        }
    }
    let margin = if closest.is_finite() { (1.0 - closest).max(0.0) } else { 0.0 };
    Ok(vec![
        ctx.check("failed-degrees", "z = 0 has multiplicity n mod r, other roots outside the unit disk", failures as f64, 0.0),
        ctx.check("unit-disk-margin", "nonzero roots satisfy |z| >= 1", margin, 1e-8),
    ])
}

fn asymptotics(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let params = ctx.fam.family_params()?;
    if params.alpha() == 0.0 {
        return Err(Error::Precondition("asymptotics need alpha != 0".into()));
    }
    let grid: Vec<C64> = (1..=5)
        .flat_map(|i| {
            (0..5).map(move |k| C64::from_polar(0.2 * i as f64, 2.0 * PI * k as f64 / 5.0 + 0.3))
        })
        .collect();
    let m_max = ctx.nmax;
    let m_min = m_max.min(5);
    let (mut last, mut increases) = (0.0f64, 0usize);
    for l in 0..params.r() {
        let errs: Vec<f64> = (m_min..=m_max)
            .map(|m| asymptotic_error(params, l, m, &grid))
            .collect::<CoreResult<_>>()?;
        // below an ulp the computed error only jitters in rounding
        let scale = grid
            .iter()
            .map(|&z| asymptotic_limit(params, l, z).map(|v| v.norm()))
            .collect::<CoreResult<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let slack = 4.0 * f64::EPSILON * scale;
        increases += errs.windows(2).filter(|w| w[1] > w[0] + slack).count();
        last = last.max(*errs.last().expect("nonempty range"));
    }
    Ok(vec![
        ctx.check("final-error", "scaled y_{rm+l} tends to the exponential sum", last, 1e-10),
        ctx.check("increases", "error is non-increasing in m", increases as f64, 0.0),
    ])
}

fn extension(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let g = WeightFactor::constant_column(fam.generating_poly().coeffs())?;
    let ext = g.extend(0)?;
    let kind = fam.system().measure();
    let plain = sobolev_core::SobolevSpace::for_degree(g, kind, ctx.nmax)?;
    let extended = sobolev_core::SobolevSpace::for_degree(ext, kind, ctx.nmax)?;
    let polys = fam.polys(ctx.nmax + 1)?;
    let (mut plain_dev, mut ext_dev) = (0.0f64, 0.0f64);
    for (n, yn) in polys.iter().enumerate() {
        for (m, ym) in polys.iter().enumerate() {
            let delta = if n == m { 1.0 } else { 0.0 };
            plain_dev = plain_dev.max((plain.inner(yn, ym)? - delta).norm());
            let want = delta * (1.0 + (n * n) as f64);
            ext_dev = ext_dev.max((extended.inner(yn, ym)? - want).norm() / (1.0 + (n * m) as f64));
        }
    }
    Ok(vec![
        ctx.check("plain", "orthonormality under the original weight", plain_dev, 1e-9),
        ctx.check("extended", "extended weight is diagonal with entries 1 + n^2", ext_dev, 1e-9),
    ])
}

fn pencil(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let size = ctx.nmax;
    let rec = fam.recurrence()?;
    let pencil = pencil_from_recurrence(&rec, size)?;
    let polys = fam.polys(size + pencil.upper())?;
    let samples = ctx.disk_samples(5, 2.0);
    let banded = pencil_residual(&pencil, &polys, &samples)?;
    let dp = rec.diff_pencil()?;
    let diff = polys
        .iter()
        .take(size)
        .enumerate()
        .map(|(n, y)| diff_pencil_residual(&dp, y, n))
        .fold(0.0, f64::max);
    Ok(vec![
        ctx.check("difference-pencil", "(L - z M) y = 0 on rows away from the truncation edge", banded, 1e-9),
        ctx.check("differential-pencil", "R y_n = lambda_n S y_n", diff, 1e-9),
    ])
}

fn gram_schmidt(ctx: &mut Ctx) -> CoreResult<Vec<Check>> {
    let fam = ctx.fam;
    let gs = fam.space(ctx.nmax)?.gram_schmidt(ctx.nmax)?;
    let polys = fam.polys(ctx.nmax + 1)?;
    let worst = gs
        .polys
        .iter()
        .zip(&polys)
        .map(|(got, want)| got.relative_distance(&want.monic()))
        .fold(0.0, f64::max);
    Ok(vec![ctx.check("monic-match", "Gram-Schmidt on monomials reproduces the family", worst, 1e-8)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(suite: Suite, kind: FamilyKind, r: usize, alpha: f64, p: &[f64]) -> SuiteParams {
        SuiteParams::new(suite, FamilySpec::new(kind, r, alpha, p.to_vec()), None, 1, 1.0)
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("bogus"), None);
    }

    #[test]
    fn y_family_passes_every_applicable_suite() {
        for suite in Suite::ALL {
            if suite == Suite::Extension {
                continue;
            }
            let rep = run(suite, &params(suite, FamilyKind::Y, 2, -1.0, &[])).unwrap();
            assert!(rep.pass, "{}", rep.to_json());
        }
    }

    #[test]
    fn extension_reports_one_plus_n_squared() {
        let rep = run(Suite::Extension, &params(Suite::Extension, FamilyKind::Example21, 2, -1.0, &[])).unwrap();
        assert!(rep.pass, "{}", rep.to_json());
        assert_eq!(rep.checks.len(), 2);
    }

    #[test]
    fn roots_below_threshold_are_skipped() {
        let rep = run(Suite::Roots, &params(Suite::Roots, FamilyKind::Y, 2, 0.0, &[])).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.checks.len(), 1);
        assert!(rep.checks[0].note.as_deref().unwrap().starts_with("precondition not met"));
    }

    #[test]
    fn unsupported_family_is_a_usage_error() {
        assert!(run(Suite::Roots, &params(Suite::Roots, FamilyKind::Hermite, 2, -1.0, &[])).is_err());
        assert!(run(Suite::Extension, &params(Suite::Extension, FamilyKind::Y, 2, -1.0, &[])).is_err());
        assert!(run(Suite::Ode, &params(Suite::Ode, FamilyKind::W, 2, 1.0, &[])).is_err());
    }

    #[test]
    fn tol_scale_multiplies_tolerances() {
        let mut p = params(Suite::Pencil, FamilyKind::Hermite, 2, -1.0, &[]);
        let base = run(Suite::Pencil, &p).unwrap();
        p.tol_scale = 10.0;
        let scaled = run(Suite::Pencil, &p).unwrap();
        for (a, b) in base.checks.iter().zip(&scaled.checks) {
            assert_eq!(b.tol, 10.0 * a.tol);
            assert_eq!(a.residual, b.residual);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let p = params(Suite::IntegralRep, FamilyKind::W, 2, -0.25, &[]);
        let a = run(Suite::IntegralRep, &p).unwrap();
        let b = run(Suite::IntegralRep, &p).unwrap();
        assert_eq!(a.checks, b.checks);
    }
}
