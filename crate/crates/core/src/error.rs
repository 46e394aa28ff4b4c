//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("interaction centers {0} and {1} coincide (or are closer than the duplicate guard)")]
    DuplicateCenters(usize, usize),

    #[error("coordinate of point {index} is not finite")]
    InvalidCoordinate { index: usize },

    #[error("point {index} has {got} coordinates, expected {expected}")]
    WrongPointLength {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("configuration needs at least one interaction center")]
    NoPoints,

    #[error("coupling has {got} entries, expected {expected}")]
    CouplingLength { got: usize, expected: usize },

    #[error("matrix size mismatch: {0}")]
    SizeMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not positive semi-definite (smallest eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    #[error("matrix is exactly singular (pivot {pivot})")]
    Singular { pivot: usize },

    #[error("spectral parameter {0} lies on the nonnegative real axis; use the boundary-value operations for positive energies")]
    NonnegativeAxis(Complex64),

    #[error("argument 0 is outside the domain (logarithmic singularity)")]
    ZeroArgument,

    #[error("evaluation point coincides with interaction center {0}")]
    SingularPoint(usize),

    #[error("evaluation points coincide; the free kernel is singular on the diagonal")]
    DiagonalPoint,

    #[error("{0} is numerically singular; configuration is too ill-conditioned")]
    IllConditioned(&'static str),

    #[error("the negative-eigenvalue count formula applies only in dimension 3; use the bound-state scan in 2D")]
    KappaUnsupported2d,

    #[error("boundary pair is not self-adjoint (defect {defect:.3e}, regularity gap {gap:.3e})")]
    NotSelfAdjoint { defect: f64, gap: f64 },

    #[error("energy {0} must be strictly positive")]
    NonpositiveEnergy(f64),

    #[error("C - D*M(x+i0) is singular at energy {0}: resonance energy")]
    Resonance(f64),

    #[error("z = {0} hits the spectrum of the extension")]
    SpectrumHit(Complex64),

    #[error("Gerschgorin index {0} is out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
