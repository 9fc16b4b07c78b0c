//! Finite quotient groupoids and the groupoid of oriented Euclidean lines
//! obtained from the Iwasawa decomposition of `SO₀(1, n+1)`.
//!
//! The crate has two layers. [`relation`] works exactly with finite sets:
//! relations, finite groupoids, quotients by automorphism groups and the
//! groupoids attached to a pair of trivially intersecting subgroups. The
//! remaining modules work numerically with matrices: [`lorentz`] factors
//! Lorentz matrices, [`line`] realizes the quotient `Z = TSⁿ × ℝ₊`,
//! [`algebroid`] covers its Lie algebroid and the dual Poisson structure, and
//! [`lift`] the base map of the cotangent lift and the Euclidean action on
//! lines. [`verify`] runs all of it as seeded randomized suites.

pub mod algebroid;
pub mod error;
pub mod fd;
pub mod lift;
pub mod linalg;
pub mod line;
pub mod lorentz;
pub mod relation;
pub mod verify;

pub use error::GeometryError;
