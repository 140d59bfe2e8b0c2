//! Invariant geometry of the twistor space of the round 6-sphere.
//!
//! The crate builds the one-parameter family of invariant almost
//! quaternion-Hermitian structures on the 12-dimensional homogeneous space
//! of orthogonal complex structures on tangent spaces of S⁶, and computes
//! the quantities that classify it: exterior derivatives of the defining
//! forms, the intrinsic torsion of the structure, integrability obstruction
//! tensors, and the Einstein behaviour of the metric family.
//!
//! Computations run over exact rationals (`Rational`) wherever the inputs
//! are rational, and over `f64` for parameter sweeps; every module is
//! generic over the [`scalar::Scalar`] trait.

pub mod error;
pub mod exterior;
pub mod homogeneous;
pub mod lie;
pub mod linalg;
pub mod linmap;
pub mod pairing;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod sweep;
pub mod torsion;

pub use error::{GeomError, Result};
pub use exterior::AltForm;
pub use linmap::{LinMap, Trilinear};
pub use pairing::DiagMetric;
pub use report::TorsionReport;
pub use scalar::{parse_scalar, Rational, Scalar, DEFAULT_TOL};
