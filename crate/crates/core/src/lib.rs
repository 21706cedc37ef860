//! Classical-type Sobolev orthogonal polynomials with matrix weights.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`], [`series`] and [`roots`]: complex polynomial and truncated power
//!   series arithmetic, falling factorials and simultaneous root finding;
//! - [`diffop`]: linear differential operators with polynomial coefficients,
//!   the degree-preservation test and the polynomial ODE solver;
//! - [`families`]: the explicit families `y_n(r, alpha)`, `w_n`, `phi_n`, their
//!   integral representations, generating functions and asymptotics;
//! - [`quadrature`] and [`sobolev`]: quadrature-backed matrix-weight Sobolev
//!   inner products, Gram-Schmidt and weight extension;
//! - [`pencil`]: banded difference pencils and differential pencils.

pub mod diffop;
pub mod error;
pub mod families;
pub mod pencil;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod series;
pub mod sobolev;

pub use num_complex::Complex;

/// Double precision complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

pub use diffop::{ConditionCheck, LinearDiffOp};
pub use error::{Error, Result};
pub use families::{BaseSystem, FamilyParams, GenFnSpec, XiTable};
pub use pencil::{BandedMatrix, BandedPencil, DiffPencil, RecurrenceFamily};
pub use poly::{falling_factorial, CPoly};
pub use quadrature::{GaussKind, QuadratureKind, QuadratureRule};
pub use series::TruncatedSeries;
pub use sobolev::{DenseWeight, GramSchmidt, SobolevSpace, Weight, WeightFactor};
