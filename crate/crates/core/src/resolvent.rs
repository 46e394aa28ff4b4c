//! Pointwise Krein resolvent kernel of a proper extension:
//! R_z(H_{C,D})(x, x′) = G_{√z}(|x−x′|)·Iₙ + Σ_{jk} g_j(x)·W_jk·g_k(x′)
//! with W = (C − D·M(z))⁻¹·D and g_j the free kernels centered at the
//! interaction sites.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{BoundaryPair, PointConfiguration};
use crate::specfun::free_green;
use crate::weyl::weyl_matrix;

/// Kernel value at (x, x′): an n×n complex matrix.
pub fn resolvent_kernel(
    pair: &BoundaryPair,
    config: &PointConfiguration,
    z: Complex64,
    x: &[f64],
    x_prime: &[f64],
) -> Result<DMatrix<Complex64>> {
    pair.check_size(config)?;
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::NonnegativeAxis(z));
    }
    let m = config.num_points();
    let n = config.multiplicity();

    let sep = x
        .iter()
        .zip(x_prime)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if sep == 0.0 {
        return Err(Error::DiagonalPoint);
    }

    let mut g_x = Vec::with_capacity(m);
    let mut g_xp = Vec::with_capacity(m);
    for j in 0..m {
        let r = config.distance_to(j, x);
        let rp = config.distance_to(j, x_prime);
        if r == 0.0 || rp == 0.0 {
            return Err(Error::SingularPoint(j));
        }
        g_x.push(free_green(config.dim(), z, r)?);
        g_xp.push(free_green(config.dim(), z, rp)?);
    }

    let free = free_green(config.dim(), z, sep)?;
    let mut value = DMatrix::from_diagonal_element(n, n, free);

    // D = 0 selects H₀: the kernel is exactly the free one.
    if pair.d().iter().all(|v| v.norm_sqr() == 0.0) {
        return Ok(value);
    }

    let mw = weyl_matrix(config, z)?;
    let secular = pair.c() - pair.d() * &mw.full;
    let scale = crate::matrixkernel::op_norm(pair.c())
        + crate::matrixkernel::op_norm(pair.d()) * crate::matrixkernel::op_norm(&mw.full);
    if crate::matrixkernel::sigma_min(&secular) <= 1e-12 * scale {
        return Err(Error::SpectrumHit(z));
    }
    let w = match crate::matrixkernel::solve_det(&secular, pair.d()) {
        Ok((w, _, _)) => w,
        Err(Error::Singular { .. }) => return Err(Error::SpectrumHit(z)),
        Err(e) => return Err(e),
    };

    for s in 0..n {
        for t in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                for k in 0..m {
                    acc += g_x[j] * w[(s * m + j, t * m + k)] * g_xp[k];
                }
            }
            value[(s, t)] += acc;
        }
    }
    Ok(value)
}
