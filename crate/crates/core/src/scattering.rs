//! On-shell scattering matrices for the pair {Ĥ_Θ, Ĥ₀} at positive
//! energies: S(x) = I + 2i·√Im M·(C − D·M(x+i0))⁻¹D·√Im M, compressed
//! to the range of Im M(x+i0).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extensions::{is_self_adjoint, SELF_ADJOINT_TOL};
use crate::matrixkernel::{herm_eig, psd_sqrt, DEFAULT_RANK_TOL};
use crate::model::{expand_blocks, fro_norm, BoundaryPair, Dimension, PointConfiguration};
use crate::specfun::bessel_j0;
use crate::weyl::assemble_block;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Boundary value M(x+i0) at a positive energy with its imaginary part
/// in closed form and the spectral data of that imaginary part.
#[derive(Clone, Debug)]
pub struct BoundaryWeyl {
    pub x: f64,
    /// M(x+i0), assembled from the boundary-value kernels.
    pub m_plus: DMatrix<Complex64>,
    /// Im M(x+i0) from the closed-form entries:
    /// 3D √x/(4π)·δ + sin(√x r)/(4πr), 2D J₀(√x r)/4.
    pub imag_part: DMatrix<Complex64>,
    /// Numerical rank of Im M (eigenvalues above 10⁻¹⁰·‖Im M‖).
    pub rank: usize,
    /// Orthonormal basis of ran(Im M), columns ordered by descending
    /// eigenvalue.
    pub basis: DMatrix<Complex64>,
    /// The eigenvalues matching `basis`.
    pub range_eigenvalues: Vec<f64>,
}

/// Assembles M(x+i0) and the closed-form Im M at energy x > 0.
pub fn im_weyl_boundary(config: &PointConfiguration, x: f64) -> Result<BoundaryWeyl> {
    if x <= 0.0 {
        return Err(Error::NonpositiveEnergy(x));
    }
    let dist = config.validate()?;
    let m = config.num_points();
    let n = config.multiplicity();
    let block = assemble_block(config, &dist, Complex64::new(x, 0.0))?;
    let m_plus = expand_blocks(&block, n);

    let sx = x.sqrt();
    let mut imag_block = DMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            let v = match config.dim() {
                Dimension::Three => {
                    if j == k {
                        sx / FOUR_PI
                    } else {
                        let r = dist.get(j, k);
                        (sx * r).sin() / (FOUR_PI * r)
                    }
                }
                Dimension::Two => bessel_j0(sx * dist.get(j, k)) / 4.0,
            };
            imag_block[(j, k)] = Complex64::new(v, 0.0);
        }
    }
    let imag_part = expand_blocks(&imag_block, n);

    let spec = herm_eig(&imag_part)?;
    let scale = spec.spectral_norm();
    let size = imag_part.nrows();
    let mut cols: Vec<usize> = (0..size)
        .filter(|&i| spec.eigenvalues[i] > DEFAULT_RANK_TOL * scale)
        .collect();
    cols.sort_by(|&a, &b| spec.eigenvalues[b].total_cmp(&spec.eigenvalues[a]));
    let mut basis = DMatrix::zeros(size, cols.len());
    let mut range_eigenvalues = Vec::with_capacity(cols.len());
    for (out, &i) in cols.iter().enumerate() {
        basis.set_column(out, &spec.eigenvectors.column(i));
        range_eigenvalues.push(spec.eigenvalues[i]);
    }
    Ok(BoundaryWeyl {
        x,
        m_plus,
        imag_part,
        rank: cols.len(),
        basis,
        range_eigenvalues,
    })
}

/// The on-shell scattering matrix on ran(Im M(x+i0)).
#[derive(Clone, Debug)]
pub struct ScatteringResult {
    pub x: f64,
    /// rank×rank matrix expressed in `basis`.
    pub s_matrix: DMatrix<Complex64>,
    pub basis: DMatrix<Complex64>,
    pub rank: usize,
    /// ‖S·S* − I‖_F on the range subspace.
    pub unitarity_defect: f64,
}

pub fn scattering_matrix(
    pair: &BoundaryPair,
    config: &PointConfiguration,
    x: f64,
) -> Result<ScatteringResult> {
    pair.check_size(config)?;
    let report = is_self_adjoint(pair, SELF_ADJOINT_TOL)?;
    if !report.self_adjoint {
        return Err(Error::NotSelfAdjoint {
            defect: report.defect_cdstar,
            gap: report.regularity_gap,
        });
    }
    let bw = im_weyl_boundary(config, x)?;
    let secular = pair.c() - pair.d() * &bw.m_plus;
    let w = match crate::matrixkernel::solve_det(&secular, pair.d()) {
        Ok((w, _, _)) => w,
        Err(Error::Singular { .. }) => return Err(Error::Resonance(x)),
        Err(e) => return Err(e),
    };
    let (sq, _) = psd_sqrt(&bw.imag_part, DEFAULT_RANK_TOL)?;
    let size = bw.imag_part.nrows();
    let s_full = DMatrix::identity(size, size)
        + (&sq * &w * &sq).map(|v| Complex64::new(0.0, 2.0) * v);
    let s_matrix = bw.basis.adjoint() * &s_full * &bw.basis;
    let gram = &s_matrix * s_matrix.adjoint();
    let unitarity_defect = fro_norm(&(&gram - DMatrix::identity(bw.rank, bw.rank)));
    Ok(ScatteringResult {
        x,
        s_matrix,
        basis: bw.basis,
        rank: bw.rank,
        unitarity_defect,
    })
}
