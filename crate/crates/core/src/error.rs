use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// `min Z(p) > -1/4` is violated; most of the theory (and the solver
    /// gate) requires it.
    #[error("assumption 2 violated: min Z = {min_z} <= -1/4")]
    AssumptionViolated { min_z: f64 },

    /// Evaluation requested at a singular point or other invalid location.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested weight sits exactly on an indicial line.
    #[error("weight a = {a} lies on an indicial root (l = {l})")]
    WeightOnIndicialRoot { a: f64, l: usize },

    /// Double indicial root: the plain power expansion does not apply.
    #[error("Z = {z} is a double-root value: log terms appear, expansion form not covered")]
    DoubleRoot { z: f64 },

    /// Fredholm index formula restricted to real shifted roots.
    #[error("Z = {z} <= -1/4: imaginary indicial roots, not covered by the index formula")]
    ImaginaryRegime { z: f64 },

    /// Oscillatory (limit-circle) radial regime.
    #[error("Z = {z} <= -1/4: oscillatory regime, no Friedrichs ground state selection implemented")]
    OscillatoryRegime { z: f64 },

    /// Bessel evaluation outside the supported parameter box.
    #[error("bessel argument out of range: nu = {nu}, x = {x}")]
    BesselRange { nu: f64, x: f64 },

    /// Root bracketing for Bessel zeros failed.
    #[error("bessel zero bracketing failed for nu = {nu}, k = {k} on [{lo}, {hi}]")]
    BracketingFailed { nu: f64, k: usize, lo: f64, hi: f64 },

    /// Mesh construction failed (inverted tets, misplaced singular point, ...).
    #[error("mesh error: {0}")]
    Mesh(String),

    /// Assembly-level failure.
    #[error("assembly error: {0}")]
    Assembly(String),

    /// Coercive shift certification failed.
    #[error("failed to certify a coercive shift after {doublings} doublings (C = {last_c:.3e})")]
    ShiftNotCertified { doublings: usize, last_c: f64 },

    /// Eigensolver failed to converge.
    #[error("eigensolver did not converge after {iterations} iterations; worst residual {worst_residual:.3e}")]
    NoConvergence { iterations: usize, worst_residual: f64 },

    /// Analysis precondition failed (decay fit, spectrum bound, ...).
    #[error("analysis error: {0}")]
    Analysis(String),

    /// Configuration file problem.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
