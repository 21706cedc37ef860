//! End-to-end acceptance suite. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sobolev_core::diffop::ConditionCheck;
use sobolev_core::families::{
    asymptotic_error, asymptotic_limit, check_root_location, example21_family, hermite,
    phi_contour_rep, phi_family, w_family, w_generating_coeffs, w_integral_rep, y_family,
    yhat_family, yhat_integral_rep,
};
use sobolev_core::pencil::{diff_pencil_residual, pencil_from_recurrence, pencil_residual};
use sobolev_core::poly::{factorial, identity_residual};
use sobolev_core::{
    BaseSystem, CPoly, FamilyParams, GaussKind, GenFnSpec, LinearDiffOp, QuadratureKind,
    RecurrenceFamily, SobolevSpace, WeightFactor, XiTable, C64,
};

/// Named measurements, each with its own tolerance.
#[derive(Default)]
struct Outcome {
    checks: Vec<(&'static str, f64, f64)>,
}

impl Outcome {
    fn new(label: &'static str, worst: f64, tol: f64) -> Self {
        Self::default().and(label, worst, tol)
    }

    fn and(mut self, label: &'static str, worst: f64, tol: f64) -> Self {
        self.checks.push((label, worst, tol));
        self
    }

    fn pass(&self) -> bool {
        self.checks.iter().all(|&(_, v, tol)| v <= tol)
    }

    fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|(label, v, tol)| format!("{label} {v:.2e} (tol {tol:.0e})"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn params(r: usize, alpha: f64) -> FamilyParams {
    FamilyParams::new(r, alpha).unwrap()
}

const ORTHO_PARAMS: [(usize, f64); 3] = [(1, 1.0), (2, -1.0), (3, 0.5)];

fn generating_polys() -> Vec<CPoly> {
    vec![
        CPoly::from_real(&[2.0, 1.0]),
        CPoly::from_real(&[1.0, 0.0, 1.0]),
        CPoly::from_real(&[6.0, -1.0, 0.5, 0.2]),
    ]
}

fn sample_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(
        radius * rng.gen::<f64>().sqrt(),
        rng.gen_range(0.0..2.0 * PI),
    )
}

fn orthonormality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (r, alpha) in ORTHO_PARAMS {
        let p = params(r, alpha);
        let space = SobolevSpace::for_degree(
            WeightFactor::alpha_dr_plus_one(r, alpha),
            QuadratureKind::UnitCircle,
            12,
        )
        .unwrap();
        let ys: Vec<CPoly> = (0..=12).map(|n| y_family(p, n)).collect();
        for (n, yn) in ys.iter().enumerate() {
            for (m, ym) in ys.iter().enumerate() {
                let want = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((space.inner(yn, ym).unwrap() - c(want)).norm());
            }
        }
    }
    Outcome::new("max |G - I|", worst, 1e-9).and("seconds", start.elapsed().as_secs_f64(), 5.0)
}

fn example21_end_to_end() -> Outcome {
    let g = WeightFactor::constant_column(&[c(-1.0), c(1.0)]).unwrap();
    let ext = g.extend(0).unwrap();
    let plain = SobolevSpace::for_degree(g, QuadratureKind::UnitCircle, 15).unwrap();
    let extended = SobolevSpace::for_degree(ext, QuadratureKind::UnitCircle, 15).unwrap();
    let ys: Vec<CPoly> = (0..=15).map(example21_family).collect();
    let mut worst = 0.0f64;
    for (n, yn) in ys.iter().enumerate() {
        for (m, ym) in ys.iter().enumerate() {
            let delta = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((plain.inner(yn, ym).unwrap() - c(delta)).norm());
            let want = delta * (1.0 + (n * n) as f64);
            worst = worst.max((extended.inner(yn, ym).unwrap() - c(want)).norm());
        }
    }
    Outcome::new("max deviation", worst, 1e-9)
}

fn random_operator(rng: &mut ChaCha8Rng) -> LinearDiffOp {
    let r = rng.gen_range(1..=3);
    LinearDiffOp::new(
        (0..=r)
            .map(|k| {
                let coeffs: Vec<f64> = (0..=k).map(|_| rng.gen_range(-3..=3) as f64).collect();
                CPoly::from_real(&coeffs)
            })
            .collect(),
    )
}

fn operator_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let (mut worst, mut worst_relative) = (0.0f64, 0.0f64);
    let mut wrong_degree = 0;
    let (mut solvable, mut vanishing) = (0, 0);
    for _ in 0..200 {
        let op = random_operator(&mut rng);
        match op.check_condition_c(12) {
            ConditionCheck::Satisfied => {
                solvable += 1;
                for n in 0..=12 {
                    let u = CPoly::monomial(n);
                    let y = op.solve(&u).unwrap();
                    let image = op.apply(&y);
                    worst = worst.max((&image - &u).max_abs_coeff());
                    let terms: Vec<CPoly> = op
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(k, a)| a * &y.derivative(k))
                        .chain([-u.clone()])
                        .collect();
                    worst_relative = worst_relative.max(identity_residual(&terms));
                }
            }
            ConditionCheck::LeadingSumVanishes { n, .. } => {
                vanishing += 1;
                let image = op.apply(&CPoly::monomial(n));
                if image.degree().is_some_and(|d| d >= n) {
                    wrong_degree += 1;
                }
            }
            ConditionCheck::DegreeTooHigh { .. } => wrong_degree += 1,
        }
    }
    assert_eq!(solvable + vanishing, 200);
    Outcome::new("round trip", worst, 1e-9)
        .and("term-relative round trip", worst_relative, 1e-12)
        .and("degree mismatches", wrong_degree as f64, 0.0)
}

fn family_identities() -> Outcome {
    let mut worst = 0.0f64;
    let z = CPoly::monomial(1);
    for (r, alpha) in [(1, 1.0), (2, -1.0), (3, 0.5), (2, -0.25), (4, -2.0)] {
        let p = params(r, alpha);
        let a = c(alpha);
        for n in 0..=20 {
            let y = y_family(p, n);
            // alpha z y^(r+1) + z y' - n (alpha y^(r) + y)
            worst = worst.max(identity_residual(&[
                (&z * &y.derivative(r + 1)).scale(a),
                &z * &y.derivative(1),
                y.derivative(r).scale(-a * n as f64),
                y.scale(c(-(n as f64))),
            ]));
            // alpha y_{n+1}^(r) + y_{n+1} - z (alpha y_n^(r) + y_n)
            let y1 = y_family(p, n + 1);
            worst = worst.max(identity_residual(&[
                y1.derivative(r).scale(a),
                y1.clone(),
                -(&z * &y.derivative(r).scale(a)),
                -(&z * &y),
            ]));
        }
    }
    for alpha in [-1.0, -0.25, -3.0] {
        let w = |n: isize| {
            if n < 0 {
                CPoly::zero()
            } else {
                w_family(alpha, n as usize).unwrap()
            }
        };
        let beta2 = -1.0 / alpha;
        for n in 0..=20isize {
            let nf = n as f64;
            // w_{n+1} + alpha n (n+1) w_{n-1} - z (w_n + alpha (n-1) n w_{n-2})
            worst = worst.max(identity_residual(&[
                w(n + 1),
                w(n - 1).scale(c(alpha * nf * (nf + 1.0))),
                -(&z * &w(n)),
                -(&z * &w(n - 2).scale(c(alpha * (nf - 1.0) * nf))),
            ]));
            // w_n - n (n-1) / beta^2 w_{n-2} = t^n
            worst = worst.max(identity_residual(&[
                w(n),
                w(n - 2).scale(c(-nf * (nf - 1.0) / beta2)),
                -CPoly::monomial(n as usize),
            ]));
        }
    }
    Outcome::new("identity residual", worst, 1e-10)
}

fn generating_function() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for alpha in [-1.0, -0.25] {
        for _ in 0..5 {
            let t = sample_disk(&mut rng, 2.0);
            let coeffs = w_generating_coeffs(alpha, t, 13).unwrap();
            for (n, a) in coeffs.iter().enumerate() {
                let want = w_family(alpha, n).unwrap().eval(t) / factorial(n);
                worst = worst.max((a - want).norm() / want.norm());
            }
        }
    }
    Outcome::new("relative error", worst, 1e-10)
}

fn integral_representations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let xi = XiTable::hermite(14);
    for k in 0..5 {
        let t = rng.gen_range(-2.0..2.0);
        let n = 3 * k + 2;
        for alpha in [-1.0, -0.25] {
            let want = w_family(alpha, n).unwrap().eval(c(t)).re;
            let got = w_integral_rep(alpha, n, t).unwrap();
            worst = worst.max((got - want).abs() / want.abs());

            let want = yhat_family(&xi, params(2, alpha), n).unwrap().eval(c(t));
            let got = yhat_integral_rep(&xi, alpha, n, t).unwrap();
            worst = worst.max((got - want).norm() / want.norm());
        }
        let tz = sample_disk(&mut rng, 1.0);
        for p in generating_polys() {
            for sys in [BaseSystem::Monomial, BaseSystem::Hermite] {
                let spec = GenFnSpec::new(p.clone(), sys).unwrap();
                let radius = 0.5 * spec.singularity_radius();
                let want = phi_family(&spec, n).eval(tz);
                let got = phi_contour_rep(&spec, n, tz, radius, 256).unwrap();
                worst = worst.max((got - want).norm() / want.norm());
            }
        }
    }
    Outcome::new("relative error", worst, 1e-7)
}

fn root_location() -> Outcome {
    let mut failures = 0;
    let mut closest = f64::INFINITY;
    for r in [2, 3] {
        for alpha in [-1.0, -2.0] {
            for n in 0..=20 {
                let rep = check_root_location(params(r, alpha), n).unwrap();
                closest = closest.min(rep.min_nonzero_modulus);
                if !rep.passes {
                    failures += 1;
                }
            }
        }
    }
    Outcome::new("failed reports", failures as f64, 0.0).and("1 - min |root|", 1.0 - closest, 1e-8)
}

fn asymptotics() -> Outcome {
    let grid: Vec<C64> = (1..=5)
        .flat_map(|i| {
            (0..5).map(move |k| C64::from_polar(0.2 * i as f64, 2.0 * PI * k as f64 / 5.0 + 0.3))
        })
        .collect();
    let mut worst_final = 0.0f64;
    let mut increases = 0;
    for r in [1, 2] {
        for alpha in [-1.0, -0.5, 2.0] {
            let p = params(r, alpha);
            for l in 0..r {
                let errs: Vec<f64> = (5..=30)
                    .map(|m| asymptotic_error(p, l, m, &grid).unwrap())
                    .collect();
                // once the appended terms fall below an ulp the error only jitters in rounding
                let limit_scale = grid
                    .iter()
                    .map(|&z| asymptotic_limit(p, l, z).unwrap().norm())
                    .fold(0.0, f64::max);
                let slack = 4.0 * f64::EPSILON * limit_scale;
                increases += errs.windows(2).filter(|w| w[1] > w[0] + slack).count();
                worst_final = worst_final.max(*errs.last().unwrap());
            }
        }
    }
    Outcome::new("error at m = 30", worst_final, 1e-10).and(
        "increases beyond 4 ulp",
        increases as f64,
        0.0,
    )
}

/// Brute-force trapezoid for `int H_n(t)^2 e^{-t^2} dt` on `[-14, 14]`.
fn hermite_norm_trapezoid(n: usize) -> f64 {
    let h = hermite(n);
    let steps = 8000;
    let (a, b) = (-14.0, 14.0);
    let dx = (b - a) / steps as f64;
    (0..=steps)
        .map(|i| {
            let x = a + dx * i as f64;
            let wgt = if i == 0 || i == steps { 0.5 } else { 1.0 };
            wgt * h.eval(c(x)).norm_sqr() * (-x * x).exp()
        })
        .sum::<f64>()
        * dx
}

fn generating_families() -> Outcome {
    let mut worst = 0.0f64;
    let mut ortho = 0.0f64;
    let t = CPoly::monomial(1);
    let two_t = CPoly::from_real(&[0.0, 2.0]);
    let mut tau_check = 0.0f64;
    for n in 0..=15 {
        let tau = 2f64.powi(n as i32) * factorial(n) * PI.sqrt();
        assert_eq!(BaseSystem::Hermite.norm_squared(n), tau);
        tau_check = tau_check.max((hermite_norm_trapezoid(n) - tau).abs() / tau);
    }
    for p in generating_polys() {
        let cs = p.coeffs().to_vec();
        for sys in [BaseSystem::Monomial, BaseSystem::Hermite] {
            let spec = GenFnSpec::new(p.clone(), sys).unwrap();
            let phi: Vec<CPoly> = (0..=16).map(|n| phi_family(&spec, n)).collect();
            let at = |j: isize| {
                if j < 0 {
                    CPoly::zero()
                } else {
                    phi[j as usize].clone()
                }
            };
            let inv_fact = |m: isize| {
                if m < 0 {
                    1.0
                } else {
                    1.0 / factorial(m as usize)
                }
            };
            for n in 0..=15usize {
                // sum c_k phi^(k) = g_n
                let mut terms: Vec<CPoly> = cs
                    .iter()
                    .enumerate()
                    .map(|(k, &ck)| phi[n].derivative(k).scale(ck))
                    .collect();
                terms.push(-sys.g(n));
                worst = worst.max(identity_residual(&terms));

                let ni = n as isize;
                let mut rec = Vec::new();
                let mut ode = Vec::new();
                match sys {
                    BaseSystem::Monomial => {
                        for (k, &ck) in cs.iter().enumerate() {
                            let k = k as isize;
                            rec.push(
                                at(ni + 1 - k).scale(ck * ((n + 1) as f64 * inv_fact(ni + 1 - k))),
                            );
                            rec.push(-(&t * &at(ni - k).scale(ck * inv_fact(ni - k))));
                            ode.push((&t * &phi[n].derivative(k as usize + 1)).scale(ck));
                            ode.push(phi[n].derivative(k as usize).scale(-ck * n as f64));
                        }
                    }
                    BaseSystem::Hermite => {
                        for (k, &ck) in cs.iter().enumerate() {
                            let sk = ck * 2f64.powi(k as i32);
                            let k = k as isize;
                            rec.push(
                                at(ni + 1 - k).scale(sk * ((n + 1) as f64 * inv_fact(ni + 1 - k))),
                            );
                            rec.push(at(ni - 1 - k).scale(sk * (2.0 * inv_fact(ni - 1 - k))));
                            rec.push(-(&two_t * &at(ni - k).scale(sk * inv_fact(ni - k))));
                            let ku = k as usize;
                            ode.push(phi[n].derivative(ku + 2).scale(ck));
                            ode.push(-(&two_t * &phi[n].derivative(ku + 1).scale(ck)));
                            ode.push(phi[n].derivative(ku).scale(ck * 2.0 * n as f64));
                        }
                    }
                }
                worst = worst.max(identity_residual(&rec));
                worst = worst.max(identity_residual(&ode));
            }

            let space = SobolevSpace::for_degree(
                WeightFactor::constant_column(&cs).unwrap(),
                sys.measure(),
                15,
            )
            .unwrap();
            for n in 0..=15 {
                for m in 0..=15 {
                    let v = space.inner(&phi[n], &phi[m]).unwrap();
                    let (tn, tm) = (sys.norm_squared(n), sys.norm_squared(m));
                    let dev = if n == m {
                        (v - c(tn)).norm() / tn
                    } else {
                        v.norm() / (tn * tm).sqrt()
                    };
                    ortho = ortho.max(dev);
                }
            }
        }
    }
    Outcome::new("identity residual", worst, 1e-9)
        .and("orthogonality", ortho, 1e-8)
        .and("tau vs trapezoid", tau_check, 1e-8)
}

fn gram_schmidt_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for (r, alpha) in ORTHO_PARAMS {
        let p = params(r, alpha);
        let space = SobolevSpace::for_degree(
            WeightFactor::alpha_dr_plus_one(r, alpha),
            QuadratureKind::UnitCircle,
            12,
        )
        .unwrap();
        let gs = space.gram_schmidt(12).unwrap();
        for (n, y) in gs.polys.iter().enumerate() {
            worst = worst.max(y.relative_distance(&y_family(p, n)));
        }
    }
    for p in generating_polys() {
        let spec = GenFnSpec::new(p.clone(), BaseSystem::Hermite).unwrap();
        let space = SobolevSpace::for_degree(
            WeightFactor::constant_column(p.coeffs()).unwrap(),
            QuadratureKind::Gauss(GaussKind::Hermite),
            10,
        )
        .unwrap();
        let gs = space.gram_schmidt(10).unwrap();
        for (n, y) in gs.polys.iter().enumerate() {
            worst = worst.max(y.relative_distance(&phi_family(&spec, n).monic()));
        }
    }
    Outcome::new("relative distance", worst, 1e-8)
}

fn pencils() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<C64> = (0..5).map(|_| sample_disk(&mut rng, 2.0)).collect();
    let mut families = vec![
        RecurrenceFamily::Monomial,
        RecurrenceFamily::W { alpha: -1.0 },
        RecurrenceFamily::W { alpha: -0.25 },
    ];
    for (r, alpha) in ORTHO_PARAMS {
        families.push(RecurrenceFamily::Y { r, alpha });
    }
    for p in generating_polys() {
        families.push(RecurrenceFamily::MonomialGenerating { p: p.clone() });
        families.push(RecurrenceFamily::HermiteGenerating { p });
    }
    let size = 15;
    let mut worst = 0.0f64;
    for fam in &families {
        let pencil = pencil_from_recurrence(fam, size).unwrap();
        let polys = fam.generate(size + pencil.upper()).unwrap();
        worst = worst.max(pencil_residual(&pencil, &polys, &samples).unwrap());
        let dp = fam.diff_pencil().unwrap();
        for (n, y) in polys.iter().take(size).enumerate() {
            worst = worst.max(diff_pencil_residual(&dp, y, n));
        }
    }
    Outcome::new("residual", worst, 1e-9)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("orthonormality of y_n(r, alpha)", orthonormality),
        (
            "first-derivative example and its extension",
            example21_end_to_end,
        ),
        (
            "degree preservation and the ODE solver",
            operator_equivalence,
        ),
        ("differential and recurrence identities", family_identities),
        ("generating function of w_n", generating_function),
        (
            "integral and contour representations",
            integral_representations,
        ),
        ("root location", root_location),
        ("asymptotics of the scaled family", asymptotics),
        ("generating-function families", generating_families),
        ("Gram-Schmidt reproduces the families", gram_schmidt_oracle),
        ("recurrence and differential pencils", pencils),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let status = if out.pass() { "PASS" } else { "FAIL" };
        if !out.pass() {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name}: {}", i + 1, out.summary());
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
