//! Dense complex matrix contracts used by every spectral formula:
//! Hermitian eigendecomposition, inertia, PSD square root, linear
//! solve/determinant, numerical nullspace, minimal singular value.
//! Factorizations are delegated to nalgebra behind these interfaces.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::fro_norm;

/// Default relative zero-threshold for inertia counts.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Default relative rank threshold for PSD square roots and ranges.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Spectrum of a Hermitian matrix, eigenvalues ascending, eigenvectors
/// as orthonormal columns in matching order.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
    /// ‖A − A*‖_F before the (A + A*)/2 symmetrization, for diagnostics.
    pub presym_defect: f64,
}

impl HermitianSpectrum {
    /// Largest eigenvalue magnitude (the spectral norm of the
    /// symmetrized input).
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()))
    }
}

/// Eigenvalue sign counts of a Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

fn check_finite(a: &DMatrix<Complex64>) -> Result<()> {
    if a.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Full spectrum of (A + A*)/2 with deterministically phased
/// eigenvectors (largest-magnitude component real positive).
pub fn herm_eig(a: &DMatrix<Complex64>) -> Result<HermitianSpectrum> {
    check_finite(a)?;
    let adj = a.adjoint();
    let presym_defect = fro_norm(&(a - &adj));
    let sym = (a + adj).scale(0.5);
    let se = sym.symmetric_eigen();

    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        eigenvalues.push(se.eigenvalues[i]);
        let mut v = se.eigenvectors.column(i).clone_owned();
        // deterministic phase
        let mut best = 0usize;
        for k in 1..n {
            if v[k].norm_sqr() > v[best].norm_sqr() {
                best = k;
            }
        }
        let mag = v[best].norm();
        if mag > 0.0 {
            let phase = v[best] / mag;
            v *= phase.conj();
        }
        eigenvectors.set_column(col, &v);
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
        presym_defect,
    })
}

/// Counts eigenvalues below −tol, within ±tol, and above +tol, where
/// tol = zero_tol · ‖A‖₂.
pub fn inertia(a: &DMatrix<Complex64>, zero_tol: f64) -> Result<Inertia> {
    let spec = herm_eig(a)?;
    let tol = zero_tol * spec.spectral_norm();
    let mut out = Inertia {
        negative: 0,
        zero: 0,
        positive: 0,
    };
    for &l in &spec.eigenvalues {
        if l < -tol {
            out.negative += 1;
        } else if l > tol {
            out.positive += 1;
        } else {
            out.zero += 1;
        }
    }
    Ok(out)
}

/// Hermitian PSD square root together with the numerical rank.
/// Eigenvalues in [−10·rank_tol·‖A‖, 0) are clipped to zero; anything
/// lower fails as not-PSD.
pub fn psd_sqrt(
    a: &DMatrix<Complex64>,
    rank_tol: f64,
) -> Result<(DMatrix<Complex64>, usize)> {
    let spec = herm_eig(a)?;
    let scale = spec.spectral_norm();
    if let Some(&min) = spec
        .eigenvalues
        .iter()
        .min_by(|x, y| x.total_cmp(y))
    {
        if min < -10.0 * rank_tol * scale {
            return Err(Error::NotPsd { min_eig: min });
        }
    }
    let n = a.nrows();
    let mut rank = 0usize;
    let mut root = DMatrix::zeros(n, n);
    for (i, &l) in spec.eigenvalues.iter().enumerate() {
        if l > rank_tol * scale {
            rank += 1;
        }
        let s = l.max(0.0).sqrt();
        let v = spec.eigenvectors.column(i);
        // root += s * v v^*
        for r in 0..n {
            for cidx in 0..n {
                root[(r, cidx)] += Complex64::new(s, 0.0) * v[r] * v[cidx].conj();
            }
        }
    }
    Ok((root, rank))
}

/// Solves A·X = B by LU with partial pivoting; also returns det A and a
/// singular-value condition estimate.
pub fn solve_det(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
) -> Result<(DMatrix<Complex64>, Complex64, f64)> {
    check_finite(a)?;
    check_finite(b)?;
    if a.nrows() != a.ncols() {
        return Err(Error::SizeMismatch(format!(
            "solve needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if b.nrows() != a.nrows() {
        return Err(Error::SizeMismatch(format!(
            "right-hand side has {} rows, expected {}",
            b.nrows(),
            a.nrows()
        )));
    }
    let lu = a.clone().lu();
    let u = lu.u();
    for i in 0..u.nrows() {
        if u[(i, i)] == Complex64::new(0.0, 0.0) {
            return Err(Error::Singular { pivot: i });
        }
    }
    let det = lu.determinant();
    let x = lu
        .solve(b)
        .ok_or(Error::Singular { pivot: u.nrows() - 1 })?;
    let sv = singular_values(a);
    let cond = if sv.iter().copied().fold(f64::INFINITY, f64::min) > 0.0 {
        sv.iter().copied().fold(0.0f64, f64::max)
            / sv.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    Ok((x, det, cond))
}

/// Orthonormal basis of the numerical kernel {v : ‖Av‖ ≤ tol·‖A‖};
/// columns of the returned matrix, possibly none.
pub fn nullspace(a: &DMatrix<Complex64>, tol: f64) -> DMatrix<Complex64> {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd
        .singular_values
        .iter()
        .copied()
        .fold(0.0f64, f64::max);
    let mut cols: Vec<usize> = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol * smax.max(f64::MIN_POSITIVE) {
            cols.push(i);
        }
    }
    let mut basis = DMatrix::zeros(n, cols.len());
    for (out_col, &i) in cols.iter().enumerate() {
        for r in 0..n {
            basis[(r, out_col)] = vt[(i, r)].conj();
        }
    }
    basis
}

/// Like [`nullspace`], but with an absolute singular-value threshold;
/// used where the matrix itself is nearly zero and a relative cut
/// would discard everything.
pub fn nullspace_abs(a: &DMatrix<Complex64>, abs_tol: f64) -> DMatrix<Complex64> {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut cols: Vec<usize> = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= abs_tol {
            cols.push(i);
        }
    }
    let mut basis = DMatrix::zeros(n, cols.len());
    for (out_col, &i) in cols.iter().enumerate() {
        for r in 0..n {
            basis[(r, out_col)] = vt[(i, r)].conj();
        }
    }
    basis
}

/// Smallest singular value.
pub fn sigma_min(a: &DMatrix<Complex64>) -> f64 {
    singular_values(a)
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest singular value (operator 2-norm).
pub fn op_norm(a: &DMatrix<Complex64>) -> f64 {
    singular_values(a).iter().copied().fold(0.0f64, f64::max)
}

fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}
