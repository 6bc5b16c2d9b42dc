//! Spectral data, exact radial oracles and graded-mesh finite elements for
//! Schrödinger operators `-Δ + V` whose potential has inverse-square
//! singularities `V ~ Z/ρ²` at isolated points.
//!
//! The crate is organized around one pipeline:
//!
//! * [`model`] — domains (unit torus, ball), singular points, the distance
//!   weight ρ and evaluation of the potential.
//! * [`bspec`] — exact indicial roots, boundary spectrum, extension
//!   classification, Fredholm index counts and singular-function spaces.
//! * [`radial`] — the separated radial problem solved through Bessel
//!   functions; the ground truth for every finite-element test.
//! * [`mesh`] — tetrahedral meshes graded toward the singular points,
//!   quadrature, and discrete weighted (Kondratiev) norms.
//! * [`assemble`] — sparse Hermitian stiffness/mass pairs for the Bloch
//!   operators H_k and the Dirichlet ball problem.
//! * [`eigensolve`] — smallest eigenpairs of the generalized problem.
//! * [`analyze`] — exponent fits, weighted-regularity profiles, convergence
//!   rates and decay fits confronting computed eigenpairs with theory.
//! * [`config`] / [`cli`] — run configuration files and the `invsq` binary.

pub mod acceptance;
pub mod analyze;
pub mod assemble;
pub mod bspec;
pub mod cli;
pub mod config;
pub mod eigensolve;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod model;
pub mod radial;
pub mod report;
pub mod rng;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
