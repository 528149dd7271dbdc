//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GqsvtError {
    #[error("polynomial degree {0} exceeds the supported maximum of {1}")]
    DegreeOverflow(usize, usize),

    #[error("non-finite polynomial coefficient")]
    NonFiniteCoefficient,

    #[error("target modulus exceeds 1 on the unit circle: max |P| = {0:.6e}")]
    ModulusExceeded(f64),

    #[error("conjugate-reciprocal root pairing failed: {0}")]
    RootPairing(String),

    #[error("peel inconsistency at layer {layer}: constant coefficient {residual:.3e} did not vanish")]
    PeelInconsistency { layer: usize, residual: f64 },

    #[error("degree deflation at layer {0} is inconsistent with the declared degree")]
    DegreeDeflation(usize),

    #[error("phase synthesis failed: best reconstruction error {0:.3e} exceeds 1e-8")]
    SynthesisFailure(f64),

    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,

    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("spectral norm {norm:.6e} exceeds the encoding scale alpha = {alpha:.6e}")]
    ScaleExceeded { norm: f64, alpha: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("qubitization reconstruction mismatch: residual {0:.3e}")]
    QubitizationMismatch(f64),

    #[error("controlled-operator eigen-action mismatch: residual {0:.3e}")]
    ControlledOpMismatch(f64),

    #[error("phase-factor count {got} does not match 2*degree+1 = {expected}")]
    PhaseArity { got: usize, expected: usize },

    #[error("BiCG breakdown at iteration {0}")]
    Breakdown(usize),

    #[error("Lanczos breakdown at index {0}")]
    LanczosBreakdown(usize),

    #[error("tridiagonal LDU factorization hit a vanishing pivot at index {0}")]
    LduPivot(usize),

    #[error("convergence bound inapplicable: eigenvalues not strictly in the right half-plane")]
    BoundInapplicable,
}

pub type Result<T> = std::result::Result<T, GqsvtError>;
