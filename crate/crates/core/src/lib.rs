//! Numerics for planar harmonic mappings `f = h + conj(g)` on the unit disk.
//!
//! Maps are truncated power series. The crate computes the classical
//! geometric functionals of such maps (area and length functions, Hardy
//! means, Bloch seminorm, quasiconformality constant) and checks the
//! inequalities relating them, each with an independent numerical route.
//!
//! Modules:
//! - [`map`]: series representation, evaluation, Wirtinger derivatives.
//! - [`functionals`]: area, length, Hardy and Bloch functionals.
//! - [`verify`]: inequality verifiers producing [`VerificationReport`]s.
//! - [`fuzz`]: deterministic random maps honoring theorem hypotheses.
//! - [`lipschitz`]: majorants and Lipschitz-type characterizations.

pub mod error;
pub mod functionals;
pub mod fuzz;
pub mod grid;
pub mod lipschitz;
pub mod map;
pub mod quadrature;
pub mod sup;
pub mod verify;

pub use num_complex::Complex64 as Complex;

pub use error::{Error, Result};
pub use functionals::{FunctionalValue, Method};
pub use fuzz::{fuzz_corpus, FuzzSpec};
pub use grid::{Grid, QuadratureSpec};
pub use lipschitz::{Majorant, RegularityReport};
pub use map::{
    coeff_from_contour, is_sense_preserving, qc_constant, HarmonicMap, PointwiseData, QcConstant,
};
pub use verify::{DiskDomain, Status, VerificationReport};
