//! Minimal dense/sparse linear algebra shared by assembly and the
//! eigensolver: CSR matrices over real or complex scalars, preconditioned
//! conjugate gradients with an IC(0) factorization, a dense Hermitian Jacobi
//! eigensolver for Rayleigh–Ritz blocks, and a Sturm-sequence bisection
//! solver for symmetric tridiagonal pencils.

mod csr;
mod dense;
mod pcg;
mod scalar;
mod tridiag;

pub use csr::{CsrMatrix, Triplets};
pub use dense::{hermitian_eigen, DenseMatrix};
pub use pcg::{pcg_solve, Ic0, PcgOutcome, Preconditioner};
pub use scalar::Scalar;
pub use tridiag::{tridiag_eigenvalue, tridiag_eigenvector};
