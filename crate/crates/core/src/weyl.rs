//! The matrix Weyl function M(z) attached to the point-interaction
//! boundary triplet, its zero-energy limit (a matrix in 3D, a linear
//! relation in 2D), and pointwise evaluation of the γ-field.
//!
//! Site-level block (m×m), repeated n times along the diagonal:
//! - 3D: M_s(z)_jk = i√z/(4π)·δ_jk + G̃_{√z}(x_j − x_k),
//! - 2D: M_s(z)_jk = (ψ(1) − ln(√z/(2i)))/(2π)·δ_jk + G̃_{√z}(x_j − x_k),
//!
//! with G̃ the regularized free kernel (zero on the diagonal).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{expand_blocks, Dimension, DistanceMatrix, PointConfiguration};
use crate::specfun::{branch_sqrt, digamma_one, free_green};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// M(z) at one spectral parameter: the m×m site block and the full
/// Iₙ ⊗ block expansion.
#[derive(Clone, Debug)]
pub struct WeylEvaluation {
    pub z: Complex64,
    pub block: DMatrix<Complex64>,
    pub full: DMatrix<Complex64>,
}

/// The strong-resolvent limit M(0): an honest matrix in 3D; in 2D a
/// self-adjoint relation, represented by its operator part compressed
/// to the zero-sum hyperplane plus the multivalued direction.
#[derive(Clone, Debug)]
pub enum WeylZeroRelation {
    /// 3D: M(0)_jk = (1 − δ_jk)/(4π|x_j − x_k|), site level.
    Matrix { m0: DMatrix<f64> },
    /// 2D: quadratic-form matrix A (−ln r_jk/(2π) off the diagonal),
    /// an orthonormal basis of {Σξ_j = 0} as columns, the compression
    /// of A to that basis, and the normalized multivalued direction.
    Relation {
        log_matrix: DMatrix<f64>,
        op_basis: DMatrix<f64>,
        op_matrix: DMatrix<f64>,
        mul_basis: DVector<f64>,
    },
}

/// Site-level diagonal entry of M(z).
pub(crate) fn diagonal_entry(dim: Dimension, z: Complex64) -> Complex64 {
    let w = branch_sqrt(z);
    match dim {
        Dimension::Three => Complex64::i() * w / FOUR_PI,
        Dimension::Two => {
            // ln(√z/(2i)) with the principal argument; on the negative
            // real axis √z/(2i) = √|z|/2 is positive real, so M(x) comes
            // out exactly real symmetric.
            let arg = Complex64::new(w.im / 2.0, -w.re / 2.0);
            (Complex64::new(digamma_one(), 0.0) - arg.ln()) / TWO_PI
        }
    }
}

/// Assembles the m×m site block of M(z) without policing the axis; the
/// public entry points decide which boundary values are legal.
pub(crate) fn assemble_block(
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    z: Complex64,
) -> Result<DMatrix<Complex64>> {
    let m = config.num_points();
    let diag = diagonal_entry(config.dim(), z);
    let mut block = DMatrix::zeros(m, m);
    for j in 0..m {
        block[(j, j)] = diag;
        for k in (j + 1)..m {
            let g = free_green(config.dim(), z, dist.get(j, k))?;
            block[(j, k)] = g;
            block[(k, j)] = g;
        }
    }
    Ok(block)
}

/// M(z) for z off the nonnegative real axis. For boundary values at
/// positive energies use the scattering module's boundary evaluation.
pub fn weyl_matrix(config: &PointConfiguration, z: Complex64) -> Result<WeylEvaluation> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::NonnegativeAxis(z));
    }
    let dist = config.validate()?;
    let block = assemble_block(config, &dist, z)?;
    let full = expand_blocks(&block, config.multiplicity());
    Ok(WeylEvaluation { z, block, full })
}

/// The zero-energy limit of M.
pub fn weyl_zero(config: &PointConfiguration) -> Result<WeylZeroRelation> {
    let dist = config.validate()?;
    let m = config.num_points();
    match config.dim() {
        Dimension::Three => {
            let mut m0 = DMatrix::zeros(m, m);
            for j in 0..m {
                for k in 0..m {
                    if j != k {
                        m0[(j, k)] = 1.0 / (FOUR_PI * dist.get(j, k));
                    }
                }
            }
            Ok(WeylZeroRelation::Matrix { m0 })
        }
        Dimension::Two => {
            let mut a = DMatrix::zeros(m, m);
            for j in 0..m {
                for k in 0..m {
                    if j != k {
                        a[(j, k)] = -dist.get(j, k).ln() / TWO_PI;
                    }
                }
            }
            let op_basis = hyperplane_basis(m);
            let op_matrix = op_basis.transpose() * &a * &op_basis;
            let mul_basis =
                DVector::from_element(m, 1.0 / (m as f64).sqrt());
            Ok(WeylZeroRelation::Relation {
                log_matrix: a,
                op_basis,
                op_matrix,
                mul_basis,
            })
        }
    }
}

/// Orthonormalized difference basis (e_j − e_{j+1}) of the zero-sum
/// hyperplane, as columns of an m×(m−1) matrix.
pub fn hyperplane_basis(m: usize) -> DMatrix<f64> {
    let mut basis = DMatrix::zeros(m, m.saturating_sub(1));
    for j in 0..m.saturating_sub(1) {
        let mut v = DVector::zeros(m);
        v[j] = 1.0;
        v[j + 1] = -1.0;
        // Gram-Schmidt against previous columns
        for prev in 0..j {
            let p = basis.column(prev);
            let coeff = p.dot(&v);
            v -= coeff * DVector::from_column_slice(p.as_slice());
        }
        v /= v.norm();
        basis.set_column(j, &v);
    }
    basis
}

/// Pointwise value of the defect element Σ_j ξ_j·G̃_{√z}(x − x_j) at a
/// point x away from the centers; ξ is in block order (length nm),
/// the result lives in ℂⁿ.
pub fn gamma_field_eval(
    config: &PointConfiguration,
    z: Complex64,
    xi: &DVector<Complex64>,
    x: &[f64],
) -> Result<DVector<Complex64>> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::NonnegativeAxis(z));
    }
    let m = config.num_points();
    let n = config.multiplicity();
    if xi.len() != m * n {
        return Err(Error::SizeMismatch(format!(
            "coefficient vector has length {}, expected {}",
            xi.len(),
            m * n
        )));
    }
    let mut site_values = Vec::with_capacity(m);
    for j in 0..m {
        let r = config.distance_to(j, x);
        if r == 0.0 {
            return Err(Error::SingularPoint(j));
        }
        site_values.push(free_green(config.dim(), z, r)?);
    }
    let mut out = DVector::zeros(n);
    for s in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, g) in site_values.iter().enumerate() {
            acc += xi[s * m + j] * g;
        }
        out[s] = acc;
    }
    Ok(out)
}
