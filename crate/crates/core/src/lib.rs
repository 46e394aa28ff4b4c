//! Spectral analysis of two- and three-dimensional Schrödinger
//! operators with finitely many point interactions, driven by the
//! boundary-triplet parametrization of their self-adjoint extensions:
//! Weyl-function evaluation, extension classification, bound states and
//! negative-eigenvalue counts, on-shell scattering matrices, and the
//! Krein resolvent kernel.

mod dd;

pub mod error;
pub mod extensions;
pub mod matrixkernel;
pub mod model;
pub mod resolvent;
pub mod scattering;
pub mod specfun;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
pub use model::{BoundaryPair, Dimension, DistanceMatrix, PairTag, PointConfiguration};
