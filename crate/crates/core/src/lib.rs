//! Bound-state spectra and wave-functions of the quantum motion on the five
//! three-dimensional Koenigs spaces `K_I` … `K_V`.
//!
//! The metric of each space is conformally flat, `ds² = f(x,y,z) dx²`, and
//! the potential is chosen so that the Schrödinger equation separates in
//! several coordinate systems. Energies follow from quantization
//! conditions that depend on `E` itself; [`spectra`] solves them
//! numerically, and [`oracle`] cross-checks the result with an independent
//! finite-difference Sturm–Liouville discretization.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod spaces;
pub mod specialfn;
pub mod spectra;
pub mod tridiag;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use spaces::{Axis, Derivatives, Point3, SpaceKind, SpaceSpec, UnitScalars};
