use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use sobolev_core::families::{example21_family, hermite};
use sobolev_core::{
    BaseSystem, CPoly, Error, FamilyParams, GenFnSpec, LinearDiffOp, RecurrenceFamily,
    Result as CoreResult, SobolevSpace, WeightFactor, C64,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `y_n(r, alpha)`
    Y,
    /// `w_n(alpha) = y_n(2, alpha)`, `alpha < 0`
    W,
    /// Physicists' Hermite polynomials
    Hermite,
    Monomial,
    /// Solutions of `y' - y = z^n`
    Example21,
    /// Generating-function family over monomials, needs `--p`
    Phi,
    /// Generating-function family over Hermite polynomials, needs `--p`
    PhiHermite,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Y => "y",
            FamilyKind::W => "w",
            FamilyKind::Hermite => "hermite",
            FamilyKind::Monomial => "monomial",
            FamilyKind::Example21 => "example21",
            FamilyKind::Phi => "phi",
            FamilyKind::PhiHermite => "phi-hermite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, false).ok()
    }
}

/// A family together with the parameters it reads.
///
/// Every family is `S^{-1} g_n` for a constant-coefficient operator `S = p(d/dz)`
/// and a base system `g_n` (monomials or Hermite), so the weight, the defining ODE
/// and both pencils all derive from `p` and the system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(rename = "family")]
    pub kind: FamilyKind,
    pub r: usize,
    pub alpha: f64,
    /// Coefficients of `p`, lowest degree first; only the phi families read it.
    #[serde(default)]
    pub p: Vec<f64>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, r: usize, alpha: f64, p: Vec<f64>) -> Self {
        Self { kind, r, alpha, p }
    }

    pub fn validate(&self) -> CoreResult<()> {
        if !self.alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {}", self.alpha)));
        }
        if matches!(self.kind, FamilyKind::Phi | FamilyKind::PhiHermite) && self.p.is_empty() {
            return Err(Error::Domain("phi families need the coefficients of p (--p)".into()));
        }
        self.genfn()?;
        self.recurrence()?.diff_pencil()?;
        Ok(())
    }

    pub fn system(&self) -> BaseSystem {
        match self.kind {
            FamilyKind::Hermite | FamilyKind::PhiHermite => BaseSystem::Hermite,
            _ => BaseSystem::Monomial,
        }
    }

    /// `p` with `S = p(d/dz)`.
    pub fn generating_poly(&self) -> CPoly {
        let a = C64::new(self.alpha, 0.0);
        match self.kind {
            FamilyKind::Y => &CPoly::one() + &CPoly::term(a, self.r),
            FamilyKind::W => &CPoly::one() + &CPoly::term(a, 2),
            FamilyKind::Hermite | FamilyKind::Monomial => CPoly::one(),
            FamilyKind::Example21 => CPoly::from_real(&[-1.0, 1.0]),
            FamilyKind::Phi | FamilyKind::PhiHermite => CPoly::from_real(&self.p),
        }
    }

    pub fn genfn(&self) -> CoreResult<GenFnSpec> {
        GenFnSpec::new(self.generating_poly(), self.system())
    }

    pub fn operator(&self) -> LinearDiffOp {
        LinearDiffOp::constant(self.generating_poly().coeffs())
    }

    pub fn family_params(&self) -> CoreResult<FamilyParams> {
        match self.kind {
            FamilyKind::Y => FamilyParams::new(self.r, self.alpha),
            FamilyKind::W => FamilyParams::new(2, self.alpha),
            _ => Err(Error::Domain(format!("{} has no (r, alpha) parameters", self.kind.name()))),
        }
    }

    pub fn recurrence(&self) -> CoreResult<RecurrenceFamily> {
        Ok(match self.kind {
            FamilyKind::Y => {
                FamilyParams::new(self.r, self.alpha)?;
                RecurrenceFamily::Y { r: self.r, alpha: self.alpha }
            }
            FamilyKind::W => {
                if !(self.alpha < 0.0) {
                    return Err(Error::Domain(format!("w_n requires alpha < 0, got {}", self.alpha)));
                }
                RecurrenceFamily::W { alpha: self.alpha }
            }
            FamilyKind::Monomial => RecurrenceFamily::Monomial,
            FamilyKind::Example21 | FamilyKind::Phi => {
                RecurrenceFamily::MonomialGenerating { p: self.generating_poly() }
            }
            FamilyKind::Hermite | FamilyKind::PhiHermite => {
                RecurrenceFamily::HermiteGenerating { p: self.generating_poly() }
            }
        })
    }

    /// Members `0..count`.
    pub fn polys(&self, count: usize) -> CoreResult<Vec<CPoly>> {
        match self.kind {
            FamilyKind::Hermite => Ok((0..count).map(hermite).collect()),
            FamilyKind::Example21 => Ok((0..count).map(example21_family).collect()),
            _ => self.recurrence()?.generate(count),
        }
    }

    /// The Sobolev space in which the family is orthogonal, sized for degree `n_max`.
    pub fn space(&self, n_max: usize) -> CoreResult<SobolevSpace> {
        let weight = WeightFactor::constant_column(self.generating_poly().coeffs())?;
        SobolevSpace::for_degree(weight, self.system().measure(), n_max)
    }

    pub fn label(&self) -> String {
        match self.kind {
            FamilyKind::Y => format!("y r={} alpha={}", self.r, self.alpha),
            FamilyKind::W => format!("w alpha={}", self.alpha),
            FamilyKind::Phi | FamilyKind::PhiHermite => {
                let p: Vec<String> = self.p.iter().map(f64::to_string).collect();
                format!("{} p={}", self.kind.name(), p.join(","))
            }
            kind => kind.name().to_string(),
        }
    }
}

/// Real part or imaginary part with negative zero folded to zero.
fn plain(x: f64) -> f64 {
    x + 0.0
}

/// `"n: re,im re,im ..."`, ascending degree.
pub fn csv_row(n: usize, poly: &CPoly) -> String {
    let cells: Vec<String> = if poly.is_zero() {
        vec!["0,0".to_string()]
    } else {
        poly.coeffs()
            .iter()
            .map(|c| format!("{},{}", plain(c.re), plain(c.im)))
            .collect()
    };
    format!("{n}: {}", cells.join(" "))
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub coeffs: Vec<Complex>,
}

impl Row {
    pub fn new(n: usize, poly: &CPoly) -> Self {
        let coeffs = poly
            .coeffs()
            .iter()
            .map(|c| Complex { re: plain(c.re), im: plain(c.im) })
            .collect();
        Self { n, coeffs }
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub params: FamilySpec,
    pub rows: Vec<Row>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: FamilyKind) -> FamilySpec {
        FamilySpec::new(kind, 2, -1.0, vec![])
    }

    #[test]
    fn csv_rows() {
        let y = spec(FamilyKind::Y).polys(3).unwrap();
        assert_eq!(csv_row(2, &y[2]), "2: 2,0 0,0 1,0");
        let h = spec(FamilyKind::Hermite).polys(1).unwrap();
        assert_eq!(csv_row(0, &h[0]), "0: 1,0");
        let e = spec(FamilyKind::Example21).polys(2).unwrap();
        assert_eq!(csv_row(1, &e[1]), "1: -1,0 -1,0");
        let neg_zero = CPoly::new(vec![C64::new(-0.0, -0.0), C64::new(1.0, 0.0)]);
        assert_eq!(csv_row(1, &neg_zero), "1: 0,0 1,0");
    }

    #[test]
    fn every_family_solves_its_defining_ode() {
        let mut all = vec![
            spec(FamilyKind::Y),
            spec(FamilyKind::W),
            spec(FamilyKind::Hermite),
            spec(FamilyKind::Monomial),
            spec(FamilyKind::Example21),
        ];
        for kind in [FamilyKind::Phi, FamilyKind::PhiHermite] {
            all.push(FamilySpec::new(kind, 2, -1.0, vec![2.0, 1.0]));
        }
        for fam in all {
            fam.validate().unwrap();
            let op = fam.operator();
            for (n, y) in fam.polys(8).unwrap().iter().enumerate() {
                let g = fam.system().g(n);
                assert!((&op.apply(y) - &g).max_abs_coeff() <= 1e-12 * g.max_abs_coeff(), "{fam:?} n={n}");
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(FamilySpec::new(FamilyKind::W, 2, 0.5, vec![]).validate().is_err());
        assert!(FamilySpec::new(FamilyKind::Y, 0, -1.0, vec![]).validate().is_err());
        assert!(FamilySpec::new(FamilyKind::Phi, 2, -1.0, vec![]).validate().is_err());
        assert!(FamilySpec::new(FamilyKind::Phi, 2, -1.0, vec![0.0, 1.0]).validate().is_err());
        assert!(FamilySpec::new(FamilyKind::Y, 2, f64::NAN, vec![]).validate().is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in FamilyKind::value_variants() {
            assert_eq!(FamilyKind::parse(kind.name()), Some(*kind));
            let json = serde_json::to_string(kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
        }
    }
}
