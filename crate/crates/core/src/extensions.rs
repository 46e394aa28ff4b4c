//! Classification of proper extensions given a boundary pair (C, D):
//! self-adjointness, nonnegativity, and construction of the Krein pair
//! and its domain coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrixkernel::{herm_eig, inertia, DEFAULT_ZERO_TOL};
use crate::model::{
    complexify, e_matrices, expand_blocks_real, fro_norm, BoundaryPair, Dimension, PairTag,
    PointConfiguration,
};
use crate::weyl::{weyl_zero, WeylZeroRelation};

/// Default relative tolerance for the self-adjointness conditions.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

/// Outcome of the self-adjointness check, with the raw defects.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub self_adjoint: bool,
    /// ‖CD* − DC*‖_F.
    pub defect_cdstar: f64,
    /// Smallest eigenvalue of CC* + DD*.
    pub regularity_gap: f64,
    pub nonnegative: Option<bool>,
    pub notes: Vec<String>,
}

/// Checks CD* = DC* and 0 ∈ ρ(CC* + DD*) at the given relative
/// tolerance (scaled by (‖C‖ + ‖D‖)²).
pub fn is_self_adjoint(pair: &BoundaryPair, tol: f64) -> Result<ExtensionReport> {
    let c = pair.c();
    let d = pair.d();
    let cd = c * d.adjoint();
    let dc = d * c.adjoint();
    let defect = fro_norm(&(&cd - &dc));
    let gram = c * c.adjoint() + d * d.adjoint();
    let spec = herm_eig(&gram)?;
    let gap = spec.eigenvalues.first().copied().unwrap_or(0.0);
    let scale = (fro_norm(c) + fro_norm(d)).powi(2);
    let self_adjoint = defect <= tol * scale && gap >= tol * scale;
    let mut notes = Vec::new();
    match pair.tag() {
        PairTag::Friedrichs => notes.push("friedrichs".to_string()),
        PairTag::Krein => notes.push("krein".to_string()),
        PairTag::DiagonalAlpha(_) => notes.push("diagonal".to_string()),
        PairTag::Operator => notes.push("operator".to_string()),
        PairTag::General => {}
    }
    Ok(ExtensionReport {
        self_adjoint,
        defect_cdstar: defect,
        regularity_gap: gap,
        nonnegative: None,
        notes,
    })
}

fn require_self_adjoint(pair: &BoundaryPair) -> Result<()> {
    let report = is_self_adjoint(pair, SELF_ADJOINT_TOL)?;
    if !report.self_adjoint {
        return Err(Error::NotSelfAdjoint {
            defect: report.defect_cdstar,
            gap: report.regularity_gap,
        });
    }
    Ok(())
}

/// 3D nonnegativity test: CD* − D·M(0)·D* ⪰ 0.
pub fn is_nonnegative_3d(pair: &BoundaryPair, config: &PointConfiguration) -> Result<bool> {
    if config.dim() != Dimension::Three {
        return Err(Error::KappaUnsupported2d);
    }
    pair.check_size(config)?;
    require_self_adjoint(pair)?;
    let m0 = match weyl_zero(config)? {
        WeylZeroRelation::Matrix { m0 } => m0,
        WeylZeroRelation::Relation { .. } => unreachable!("3D limit is a matrix"),
    };
    let m0_full = complexify(&expand_blocks_real(&m0, config.multiplicity()));
    let c = pair.c();
    let d = pair.d();
    let test = c * d.adjoint() - d * &m0_full * d.adjoint();
    let i = inertia(&test, DEFAULT_ZERO_TOL)?;
    Ok(i.negative == 0)
}

/// Result of the reduced 2D nonnegativity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedNonnegativity {
    /// m = 1: the only nonnegative self-adjoint extension is H₀ itself.
    UniqueNonnegative,
    Psd(bool),
}

/// 2D nonnegativity for a caller-supplied reduced pair (C̃, D̃) acting
/// on the zero-sum hyperplane in the basis of [`weyl_zero`]:
/// C̃D̃* − D̃·M(0)_op·D̃* ⪰ 0.
pub fn is_nonnegative_2d_reduced(
    c_red: &DMatrix<Complex64>,
    d_red: &DMatrix<Complex64>,
    config: &PointConfiguration,
) -> Result<ReducedNonnegativity> {
    if config.dim() != Dimension::Two {
        return Err(Error::SizeMismatch(
            "reduced nonnegativity test is the 2D formulation".into(),
        ));
    }
    let m = config.num_points();
    if m == 1 {
        return Ok(ReducedNonnegativity::UniqueNonnegative);
    }
    let n = config.multiplicity();
    let size = (m - 1) * n;
    if c_red.nrows() != size || d_red.nrows() != size {
        return Err(Error::SizeMismatch(format!(
            "reduced pair must act on C^{size} (hyperplane ⊗ C^n)"
        )));
    }
    let reduced = BoundaryPair::general(c_red.clone(), d_red.clone())?;
    require_self_adjoint(&reduced)?;
    let op = match weyl_zero(config)? {
        WeylZeroRelation::Relation { op_matrix, .. } => op_matrix,
        WeylZeroRelation::Matrix { .. } => unreachable!("2D limit is a relation"),
    };
    let op_full = complexify(&expand_blocks_real(&op, n));
    let test = c_red * d_red.adjoint() - d_red * &op_full * d_red.adjoint();
    let i = inertia(&test, DEFAULT_ZERO_TOL)?;
    Ok(ReducedNonnegativity::Psd(i.negative == 0))
}

/// The matrix K linking the Krein-domain coefficients, ξ₁ = K·ξ₀ (3D).
#[derive(Clone, Debug)]
pub struct KreinCoefficients {
    pub k: DMatrix<f64>,
}

/// K = (E₁ ⊗ Iₙ)⁻¹ (4π·M(0) + E₀ ⊗ Iₙ), assembled at site level and
/// block-expanded.
pub fn krein_coefficients_3d(config: &PointConfiguration) -> Result<KreinCoefficients> {
    if config.dim() != Dimension::Three {
        return Err(Error::KappaUnsupported2d);
    }
    let (e0, e1) = e_matrices(config)?;
    let m0 = match weyl_zero(config)? {
        WeylZeroRelation::Matrix { m0 } => m0,
        WeylZeroRelation::Relation { .. } => unreachable!(),
    };
    // E1 is a positive-definite exponential kernel matrix for distinct
    // centers; verify before inverting.
    let e1c = complexify(&e1);
    let spec = herm_eig(&e1c)?;
    let min = spec.eigenvalues.first().copied().unwrap_or(0.0);
    if min <= 1e-12 * spec.spectral_norm() {
        return Err(Error::IllConditioned("E1"));
    }
    let rhs = m0.scale(4.0 * std::f64::consts::PI) + &e0;
    let k_site = e1
        .lu()
        .solve(&rhs)
        .ok_or(Error::IllConditioned("E1"))?;
    Ok(KreinCoefficients {
        k: expand_blocks_real(&k_site, config.multiplicity()),
    })
}

/// The boundary pair of the Krein extension.
///
/// 3D: (C, D) = (M(0), I). 2D with m = 1: the Krein extension equals the
/// Friedrichs one, so the pair is (I, 0). 2D with m > 1 the condition
/// (Γ₀f, Γ₁f) ∈ M(0) is realized as C = P₂ + P₁·A·P₁, D = P₁ with P₁ the
/// hyperplane projector, P₂ the projector onto the multivalued direction
/// and A the logarithmic form matrix; any other realization of the same
/// relation is equally valid and comparisons go through spectra.
pub fn krein_pair(config: &PointConfiguration) -> Result<BoundaryPair> {
    let n = config.multiplicity();
    match weyl_zero(config)? {
        WeylZeroRelation::Matrix { m0 } => {
            let c = complexify(&expand_blocks_real(&m0, n));
            let size = c.nrows();
            Ok(BoundaryPair::with_tag(
                c,
                DMatrix::identity(size, size),
                PairTag::Krein,
            ))
        }
        WeylZeroRelation::Relation {
            log_matrix,
            op_basis,
            mul_basis,
            ..
        } => {
            let m = config.num_points();
            if m == 1 {
                let f = BoundaryPair::friedrichs(n);
                return Ok(BoundaryPair::with_tag(
                    f.c().clone(),
                    f.d().clone(),
                    PairTag::Krein,
                ));
            }
            let p1 = &op_basis * op_basis.transpose();
            let p2 = &mul_basis * mul_basis.transpose();
            let c_site = &p2 + &p1 * &log_matrix * &p1;
            let c = complexify(&expand_blocks_real(&c_site, n));
            let d = complexify(&expand_blocks_real(&p1, n));
            Ok(BoundaryPair::with_tag(c, d, PairTag::Krein))
        }
    }
}

/// Full-space M(0) for 3D as a complex matrix (helper shared with the
/// spectral module).
pub(crate) fn m0_full_3d(config: &PointConfiguration) -> Result<DMatrix<Complex64>> {
    match weyl_zero(config)? {
        WeylZeroRelation::Matrix { m0 } => Ok(complexify(&expand_blocks_real(
            &m0,
            config.multiplicity(),
        ))),
        WeylZeroRelation::Relation { .. } => unreachable!("3D limit is a matrix"),
    }
}
