//! Negative point spectrum of a self-adjoint extension: bound-state
//! location and coefficients, negative-eigenvalue counting, and the
//! Gerschgorin sufficient conditions for prescribed counts.
//!
//! The scan runs in s = √|z|. For operator-form pairs (D invertible,
//! Θ = D⁻¹C Hermitian) every sorted eigenvalue branch of Θ − M(−s²) is
//! strictly increasing in s because M is strictly decreasing there, so
//! per-branch sign changes locate all roots: each branch crosses zero
//! at most once, and it crosses exactly when its s → 0 limit is
//! negative. Branch limits come from M(0) (3D) or from the compression
//! onto the zero-sum hyperplane plus n divergent directions (2D), which
//! closes the bottom of the scan without any density assumptions. For
//! pairs with singular D the scan falls back to σ_min dips and is
//! flagged best-effort.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extensions::{is_self_adjoint, m0_full_3d, SELF_ADJOINT_TOL};
use crate::matrixkernel::{herm_eig, inertia, nullspace_abs, sigma_min, DEFAULT_ZERO_TOL};
use crate::model::{
    complexify, expand_blocks_real, fro_norm, BoundaryPair, Dimension, DistanceMatrix,
    PointConfiguration,
};
use crate::weyl::{assemble_block, gamma_field_eval, weyl_zero, WeylZeroRelation};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Scan controls; `Default` reproduces the documented defaults.
#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Upper end of the s = √|z| scan; derived from the pair and the
    /// geometry when absent, then extended until all branches are
    /// positive.
    pub s_max: Option<f64>,
    /// Number of scan nodes.
    pub grid: usize,
    /// Relative bisection width for root refinement.
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            s_max: None,
            grid: 2000,
            tol: 1e-13,
        }
    }
}

/// One negative eigenvalue of the extension.
#[derive(Clone, Debug)]
pub struct BoundStateResult {
    /// The eigenvalue z < 0.
    pub z: f64,
    /// s = √|z|.
    pub s: f64,
    pub multiplicity: usize,
    /// Orthonormal basis of the numerical kernel of C − D·M(z), in
    /// block order; columns are the coefficient vectors (c₁, …, c_m).
    pub coefficients: DMatrix<Complex64>,
    /// σ_min(C − D·M(z)) at the converged root.
    pub refinement_residual: f64,
}

/// Scan outcome: states sorted by z ascending (deepest first).
#[derive(Clone, Debug)]
pub struct SpectrumScan {
    pub states: Vec<BoundStateResult>,
    /// True when the σ_min fallback was used (completeness not
    /// guaranteed by monotonicity).
    pub best_effort: bool,
    pub warnings: Vec<String>,
}

impl SpectrumScan {
    pub fn total_multiplicity(&self) -> usize {
        self.states.iter().map(|s| s.multiplicity).sum()
    }
}

/// κ₋(H_{C,D}) = κ₋(CD* − D·M(0)·D*), the 3D negative-eigenvalue count.
pub fn kappa_minus(pair: &BoundaryPair, config: &PointConfiguration) -> Result<usize> {
    if config.dim() != Dimension::Three {
        return Err(Error::KappaUnsupported2d);
    }
    pair.check_size(config)?;
    let report = is_self_adjoint(pair, SELF_ADJOINT_TOL)?;
    if !report.self_adjoint {
        return Err(Error::NotSelfAdjoint {
            defect: report.defect_cdstar,
            gap: report.regularity_gap,
        });
    }
    let m0 = m0_full_3d(config)?;
    let c = pair.c();
    let d = pair.d();
    let test = c * d.adjoint() - d * &m0 * d.adjoint();
    Ok(inertia(&test, DEFAULT_ZERO_TOL)?.negative)
}

/// Interval descriptor of the essential spectrum [0, ∞), with the a
/// priori cap on the number of negative eigenvalues.
#[derive(Clone, Copy, Debug)]
pub struct EssentialSpectrum {
    pub lower: f64,
    pub max_negative_eigenvalues: usize,
}

pub fn essential_spectrum(config: &PointConfiguration) -> EssentialSpectrum {
    EssentialSpectrum {
        lower: 0.0,
        max_negative_eigenvalues: config.boundary_dim(),
    }
}

/// All strictly negative eigenvalues of the extension H_{C,D}.
pub fn bound_states(
    pair: &BoundaryPair,
    config: &PointConfiguration,
    opts: &ScanOptions,
) -> Result<SpectrumScan> {
    pair.check_size(config)?;
    let report = is_self_adjoint(pair, SELF_ADJOINT_TOL)?;
    if !report.self_adjoint {
        return Err(Error::NotSelfAdjoint {
            defect: report.defect_cdstar,
            gap: report.regularity_gap,
        });
    }
    let dist = config.validate()?;

    // Operator form: D invertible turns C·Γ₀ = D·Γ₁ into Θ = D⁻¹C with
    // Θ Hermitian (self-adjointness of the pair forces it).
    let d = pair.d();
    let d_norm = crate::matrixkernel::op_norm(d);
    if d_norm > 0.0 && sigma_min(d) > 1e-8 * d_norm {
        let (theta, _, _) = crate::matrixkernel::solve_det(d, pair.c())?;
        let herm_defect = fro_norm(&(&theta - theta.adjoint()));
        let theta = (&theta + theta.adjoint()).map(|v| v * 0.5);
        let mut scan = branch_tracking_scan(&theta, pair, config, &dist, opts)?;
        if herm_defect > 1e-8 * fro_norm(&theta).max(1.0) {
            scan.warnings
                .push(format!("operator form had Hermitian defect {herm_defect:.3e}"));
        }
        Ok(scan)
    } else {
        sigma_min_scan(pair, config, &dist, opts)
    }
}

/// Full M(−s²) in block order.
fn weyl_neg(
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    s: f64,
) -> Result<DMatrix<Complex64>> {
    let z = Complex64::new(-(s * s), 0.0);
    let block = assemble_block(config, dist, z)?;
    Ok(crate::model::expand_blocks(&block, config.multiplicity()))
}

/// Sorted eigenvalues of Θ − M(−s²) together with the assembly scale
/// ‖Θ‖_F + ‖M(−s²)‖_F (the scale *before* cancellation, which is what
/// eigenvalue noise is proportional to).
fn branch_values_scaled(
    theta: &DMatrix<Complex64>,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    s: f64,
) -> Result<(Vec<f64>, f64)> {
    let m = weyl_neg(config, dist, s)?;
    let scale = fro_norm(theta) + fro_norm(&m);
    Ok((herm_eig(&(theta - m))?.eigenvalues, scale))
}

fn branch_values(
    theta: &DMatrix<Complex64>,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    s: f64,
) -> Result<Vec<f64>> {
    Ok(branch_values_scaled(theta, config, dist, s)?.0)
}

/// Branch limits at s → 0⁺, sorted ascending; −∞ encodes the divergent
/// 2D directions. Also returns the scale of the limit matrix for the
/// near-threshold classification.
fn branch_limits(
    theta: &DMatrix<Complex64>,
    config: &PointConfiguration,
) -> Result<(Vec<f64>, f64)> {
    let n = config.multiplicity();
    match weyl_zero(config)? {
        WeylZeroRelation::Matrix { m0 } => {
            let m0_full = complexify(&expand_blocks_real(&m0, n));
            let scale = fro_norm(theta) + fro_norm(&m0_full);
            Ok((herm_eig(&(theta - m0_full))?.eigenvalues, scale))
        }
        WeylZeroRelation::Relation {
            log_matrix,
            op_basis,
            ..
        } => {
            let m = config.num_points();
            let mut limits = vec![f64::NEG_INFINITY; n];
            let mut scale = fro_norm(theta);
            if m > 1 {
                // compression of Θ − A onto the hyperplane ⊗ Cⁿ; the
                // basis matrix is m×(m−1), so the block expansion is
                // written out by hand
                let a_full = complexify(&expand_blocks_real(&log_matrix, n));
                let mut p = DMatrix::zeros(m * n, (m - 1) * n);
                for s_idx in 0..n {
                    for r in 0..m {
                        for cc in 0..(m - 1) {
                            p[(s_idx * m + r, s_idx * (m - 1) + cc)] =
                                Complex64::new(op_basis[(r, cc)], 0.0);
                        }
                    }
                }
                scale += fro_norm(&a_full);
                let compressed = p.adjoint() * (theta - a_full) * &p;
                limits.extend(herm_eig(&compressed)?.eigenvalues);
            }
            limits.sort_by(f64::total_cmp);
            Ok((limits, scale))
        }
    }
}

/// Default top of the scan window.
fn default_s_max(
    theta_norm: f64,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
) -> f64 {
    let sep_term = if config.num_points() > 1 {
        10.0 / dist.min_separation()
    } else {
        0.0
    };
    match config.dim() {
        Dimension::Three => FOUR_PI * (theta_norm + 1.0) + sep_term + 1.0,
        Dimension::Two => {
            // the diagonal grows only logarithmically: the deepest root
            // sits near s = 2 e^{γ + 2π·‖Θ‖}
            2.0 * (0.5772156649015329
                + 2.0 * std::f64::consts::PI * (theta_norm + 1.0))
                .exp()
                + sep_term
        }
    }
}

fn scan_nodes(dim: Dimension, s_lo: f64, s_max: f64, grid: usize) -> Vec<f64> {
    let grid = grid.max(16);
    match dim {
        Dimension::Three => (1..=grid)
            .map(|i| s_lo + (s_max - s_lo) * i as f64 / grid as f64)
            .collect(),
        Dimension::Two => {
            let (llo, lhi) = (s_lo.ln(), s_max.ln());
            (1..=grid)
                .map(|i| (llo + (lhi - llo) * i as f64 / grid as f64).exp())
                .collect()
        }
    }
}

fn branch_tracking_scan(
    theta: &DMatrix<Complex64>,
    pair: &BoundaryPair,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    opts: &ScanOptions,
) -> Result<SpectrumScan> {
    let mut warnings = Vec::new();
    let size = config.boundary_dim();
    let theta_norm = crate::matrixkernel::op_norm(theta);
    let (limits, limit_scale) = branch_limits(theta, config)?;
    let threshold = 1e-11 * (1.0 + limit_scale);

    // scan window
    let mut s_max = opts
        .s_max
        .unwrap_or_else(|| default_s_max(theta_norm, config, dist));
    let s_lo = match config.dim() {
        Dimension::Three => (s_max * 1e-9).min(1e-6),
        Dimension::Two => {
            let amax = match weyl_zero(config)? {
                WeylZeroRelation::Relation { log_matrix, .. } => {
                    crate::matrixkernel::op_norm(&complexify(&log_matrix))
                }
                _ => 0.0,
            };
            (2.0 * (-0.5772156649015329
                - 2.0 * std::f64::consts::PI * (theta_norm + amax + 2.0))
                .exp())
            .max(1e-280)
        }
    };

    let mut nodes = scan_nodes(config.dim(), s_lo, s_max, opts.grid);
    let mut vals: Vec<Vec<f64>> = Vec::with_capacity(nodes.len());
    let mut scales: Vec<f64> = Vec::with_capacity(nodes.len());
    for &s in &nodes {
        let (v, sc) = branch_values_scaled(theta, config, dist, s)?;
        scales.push(sc);
        vals.push(v);
    }

    // extend upward until every branch is positive at the top; a
    // caller-supplied s_max is a hard boundary and only warns
    let hard_cap = opts.s_max.is_some();
    let mut doublings = 0;
    while vals.last().map(|v| v[0] < 0.0).unwrap_or(false) {
        if hard_cap || doublings >= 60 {
            warnings.push(format!(
                "scan boundary reached at s = {s_max:e} with branches still negative"
            ));
            break;
        }
        let step = opts.grid.max(16) / 4 + 1;
        let new_max = s_max * 2.0;
        for i in 1..=step {
            let s = s_max + (new_max - s_max) * i as f64 / step as f64;
            nodes.push(s);
            let (v, sc) = branch_values_scaled(theta, config, dist, s)?;
            scales.push(sc);
            vals.push(v);
        }
        s_max = new_max;
        doublings += 1;
    }

    // Per-branch sign changes; the pseudo-node at s = 0⁺ carries the
    // branch limits. A node counts as properly negative only below the
    // per-node noise floor, so eigenvalue jitter around exactly-zero
    // limits (Krein pair) cannot fabricate crossings.
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..size {
        let lim = limits[i];
        if (-threshold..0.0).contains(&lim) {
            warnings.push(format!(
                "branch {i} has a near-threshold zero-energy limit {lim:.3e}; a root with |z| below the resolution may exist"
            ));
        }
        // Option<s of the last properly negative node>; None with
        // `from_limit` true encodes "negative at 0+".
        let mut from_limit = lim < -threshold;
        let mut last_neg: Option<f64> = None;
        for (node_idx, s) in nodes.iter().enumerate() {
            let v = vals[node_idx][i];
            let noise = 1e-12 * scales[node_idx].max(1e-300);
            if v >= 0.0 && (last_neg.is_some() || from_limit) {
                let root = match last_neg {
                    Some(lo) => {
                        Some(bisect_branch(theta, config, dist, i, lo, *s, opts.tol)?)
                    }
                    None => bisect_from_limit(theta, config, dist, i, *s, opts.tol)?,
                };
                match root {
                    Some(r) => roots.push(r),
                    None => warnings.push(format!(
                        "branch {i}: could not resolve a root below s = {s:e}"
                    )),
                }
                from_limit = false;
                last_neg = None;
            } else if v < -noise {
                last_neg = Some(*s);
            }
        }
    }

    let states = build_states(pair, config, dist, roots, opts)?;
    Ok(SpectrumScan {
        states,
        best_effort: false,
        warnings,
    })
}

/// Bisection of branch `i` on [lo, hi] where the branch is negative at
/// lo and nonnegative at hi.
fn bisect_branch(
    theta: &DMatrix<Complex64>,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    i: usize,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    for _ in 0..260 {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if branch_values(theta, config, dist, mid)?[i] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root below the first node: walk the lower endpoint down until the
/// branch is negative there, then bisect.
fn bisect_from_limit(
    theta: &DMatrix<Complex64>,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    i: usize,
    first_node: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let mut lo = first_node / 1e3;
    let mut tries = 0;
    while branch_values(theta, config, dist, lo)?[i] >= 0.0 {
        lo /= 1e3;
        tries += 1;
        if tries > 90 || lo < 1e-290 {
            return Ok(None);
        }
    }
    Ok(Some(bisect_branch(
        theta, config, dist, i, lo, first_node, tol,
    )?))
}

/// Clusters converged roots and extracts multiplicities and coefficient
/// bases from the kernel of C − D·M(z).
fn build_states(
    pair: &BoundaryPair,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    mut roots: Vec<f64>,
    opts: &ScanOptions,
) -> Result<Vec<BoundStateResult>> {
    roots.sort_by(f64::total_cmp);
    let mut states: Vec<BoundStateResult> = Vec::new();
    let mut idx = 0;
    while idx < roots.len() {
        let mut cluster = vec![roots[idx]];
        while idx + 1 < roots.len()
            && roots[idx + 1] - roots[idx] <= 200.0 * opts.tol * roots[idx + 1]
        {
            idx += 1;
            cluster.push(roots[idx]);
        }
        idx += 1;
        let s_star = cluster.iter().sum::<f64>() / cluster.len() as f64;
        let z = -(s_star * s_star);
        let mw = weyl_neg(config, dist, s_star)?;
        let secular = pair.c() - pair.d() * &mw;
        let resid = sigma_min(&secular);
        // kernel threshold relative to the assembled operator scale,
        // not to the (nearly singular) secular matrix itself
        let scale = crate::matrixkernel::op_norm(pair.c())
            + crate::matrixkernel::op_norm(pair.d()) * crate::matrixkernel::op_norm(&mw);
        let mut basis = nullspace_abs(&secular, 1e-8 * scale);
        if basis.ncols() < cluster.len() {
            let mut tol = 1e-7;
            while basis.ncols() < cluster.len() && tol < 1e-3 {
                basis = nullspace_abs(&secular, tol * scale);
                tol *= 10.0;
            }
        }
        let multiplicity = basis.ncols().max(cluster.len());
        states.push(BoundStateResult {
            z,
            s: s_star,
            multiplicity,
            coefficients: basis,
            refinement_residual: resid,
        });
    }
    states.sort_by(|a, b| a.z.total_cmp(&b.z));
    Ok(states)
}

/// σ_min dip scan for pairs with singular D; best effort.
fn sigma_min_scan(
    pair: &BoundaryPair,
    config: &PointConfiguration,
    dist: &DistanceMatrix,
    opts: &ScanOptions,
) -> Result<SpectrumScan> {
    let mut warnings = Vec::new();
    let c_norm = fro_norm(pair.c());
    let d_norm = fro_norm(pair.d());
    if d_norm == 0.0 {
        // kernel of Γ₀: no coupling at all, hence no negative spectrum
        return Ok(SpectrumScan {
            states: Vec::new(),
            best_effort: false,
            warnings,
        });
    }
    let theta_norm = c_norm / d_norm;
    let s_max = opts
        .s_max
        .unwrap_or_else(|| default_s_max(theta_norm, config, dist));
    let s_lo = match config.dim() {
        Dimension::Three => (s_max * 1e-9).min(1e-6),
        Dimension::Two => 1e-12,
    };
    let nodes = scan_nodes(config.dim(), s_lo, s_max, opts.grid);
    let f = |s: f64| -> Result<f64> {
        let mw = weyl_neg(config, dist, s)?;
        let secular = pair.c() - pair.d() * &mw;
        Ok(sigma_min(&secular) / (c_norm + d_norm * fro_norm(&mw)))
    };
    let mut vals = Vec::with_capacity(nodes.len());
    for &s in &nodes {
        vals.push(f(s)?);
    }
    let mut roots = Vec::new();
    // A σ_min plateau attached to the scan bottom is the threshold
    // behaviour of a nonnegative extension (the secular matrix can
    // become singular as s → 0 without any negative eigenvalue), so
    // dips are only hunted above it.
    let mut start = 0;
    while start < vals.len() && vals[start] <= 1e-8 {
        start += 1;
    }
    if start > 0 {
        warnings.push(
            "secular matrix nearly singular at the scan bottom (possible zero-energy threshold); not counted as a bound state".into(),
        );
    }
    for i in (start + 1)..nodes.len().saturating_sub(1) {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && vals[i] < 1e-2 {
            let s_star = golden_min(&f, nodes[i - 1], nodes[i + 1], opts.tol)?;
            if f(s_star)? <= 1e-8 && s_star > nodes[0] {
                roots.push(s_star);
            }
        }
    }
    if !roots.is_empty() && roots.last().copied().unwrap_or(0.0) > 0.99 * s_max {
        warnings.push("root found at the scan boundary; enlarge s_max".into());
    }
    let states = build_states(pair, config, dist, roots, opts)?;
    Ok(SpectrumScan {
        states,
        best_effort: true,
        warnings,
    })
}

fn golden_min<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    const INV_PHI: f64 = 0.6180339887498949;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if b - a <= tol * b.abs().max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Pointwise value of the eigenfunction attached to `result` (its first
/// coefficient vector), away from the interaction centers.
pub fn eigenfunction_eval(
    result: &BoundStateResult,
    config: &PointConfiguration,
    x: &[f64],
) -> Result<DVector<Complex64>> {
    let col = if result.coefficients.ncols() > 0 {
        result.coefficients.column(0).clone_owned()
    } else {
        DVector::zeros(config.boundary_dim())
    };
    gamma_field_eval(config, Complex64::new(result.z, 0.0), &col, x)
}

/// Gerschgorin-based sufficient conditions on the diagonal family.
#[derive(Clone, Debug)]
pub struct GerschgorinReport {
    /// 0-based indices of the set K.
    pub k_set: Vec<usize>,
    pub m_prime: usize,
    /// Condition (i): α_k < −Σ_{j≠k} 1/(4π r_jk) for every k ∈ K,
    /// forcing κ₋ ≥ m′.
    pub lower_bound_holds: bool,
    /// Condition (ii) in addition: α_k ≥ +Σ_{j≠k} 1/(4π r_jk) off K,
    /// pinning κ₋ = m′ exactly.
    pub exact: bool,
}

/// Evaluates the strict Gerschgorin conditions for the 3D diagonal
/// family; `k_set` holds 0-based center indices.
pub fn gerschgorin_check(
    alpha: &[f64],
    config: &PointConfiguration,
    k_set: &[usize],
) -> Result<GerschgorinReport> {
    if config.dim() != Dimension::Three {
        return Err(Error::KappaUnsupported2d);
    }
    let m = config.num_points();
    if alpha.len() != m {
        return Err(Error::CouplingLength {
            got: alpha.len(),
            expected: m,
        });
    }
    let mut k_sorted: Vec<usize> = k_set.to_vec();
    k_sorted.sort_unstable();
    k_sorted.dedup();
    if let Some(&bad) = k_sorted.iter().find(|&&k| k >= m) {
        return Err(Error::IndexOutOfRange(bad + 1, m));
    }
    let dist = config.validate()?;
    let radius = |k: usize| -> f64 {
        (0..m)
            .filter(|&j| j != k)
            .map(|j| 1.0 / (FOUR_PI * dist.get(j, k)))
            .sum()
    };
    let lower_bound_holds = k_sorted.iter().all(|&k| alpha[k] < -radius(k));
    let exact = lower_bound_holds
        && (0..m)
            .filter(|k| !k_sorted.contains(k))
            .all(|k| alpha[k] >= radius(k));
    Ok(GerschgorinReport {
        m_prime: k_sorted.len(),
        k_set: k_sorted,
        lower_bound_holds,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PairTag;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PI: f64 = std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg3(points: &[[f64; 3]], n: usize) -> PointConfiguration {
        PointConfiguration::new(
            Dimension::Three,
            points.iter().map(|p| p.to_vec()).collect(),
            n,
        )
        .unwrap()
    }

    fn cfg2(points: &[[f64; 2]], n: usize) -> PointConfiguration {
        PointConfiguration::new(
            Dimension::Two,
            points.iter().map(|p| p.to_vec()).collect(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn kappa_examples() {
        let cfg = cfg3(&[[0.0, 0.0, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[-1.0], 1).unwrap();
        assert_eq!(kappa_minus(&p, &cfg).unwrap(), 1);

        let cfg2c = cfg3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[1.0, 1.0], 1).unwrap();
        assert_eq!(kappa_minus(&p, &cfg2c).unwrap(), 0);

        let kp = crate::extensions::krein_pair(&cfg2c).unwrap();
        assert_eq!(kappa_minus(&kp, &cfg2c).unwrap(), 0);
    }

    #[test]
    fn kappa_rejects_2d() {
        let cfg = cfg2(&[[0.0, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[0.0], 1).unwrap();
        assert!(matches!(
            kappa_minus(&p, &cfg),
            Err(Error::KappaUnsupported2d)
        ));
    }

    #[test]
    fn single_center_3d_analytic() {
        let cfg = cfg3(&[[0.0, 0.0, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[-1.0], 1).unwrap();
        let scan = bound_states(&p, &cfg, &ScanOptions::default()).unwrap();
        assert_eq!(scan.states.len(), 1);
        assert!(!scan.best_effort);
        let want = -16.0 * PI * PI;
        let got = scan.states[0].z;
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "z = {got}, want {want}"
        );
        assert_eq!(scan.states[0].multiplicity, 1);
        assert!(scan.states[0].refinement_residual < 1e-10);
    }

    #[test]
    fn single_center_2d_analytic() {
        let cfg = cfg2(&[[0.0, 0.0]], 1);
        for &alpha in &[-0.3, 0.0, 0.7, 2.0] {
            let p = BoundaryPair::diagonal_alpha(&[alpha], 1).unwrap();
            let scan = bound_states(&p, &cfg, &ScanOptions::default()).unwrap();
            assert_eq!(scan.states.len(), 1, "alpha={alpha}");
            let want = -4.0
                * (2.0 * crate::specfun::digamma_one() - 4.0 * PI * alpha).exp();
            let got = scan.states[0].z;
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "alpha={alpha}: z={got}, want {want}"
            );
        }
    }

    #[test]
    fn two_center_3d_even_odd() {
        let r = 1.0;
        let alpha = -1.0;
        let cfg = cfg3(&[[0.0, 0.0, 0.0], [r, 0.0, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[alpha, alpha], 1).unwrap();
        let scan = bound_states(&p, &cfg, &ScanOptions::default()).unwrap();
        assert_eq!(scan.states.len(), 2);
        // independent bisection of α + s/4π = ±e^{−sr}/(4πr)
        for (state, sign) in scan.states.iter().zip([1.0f64, -1.0]) {
            let g = |s: f64| alpha + s / (4.0 * PI) - sign * (-s * r).exp() / (4.0 * PI * r);
            let (mut lo, mut hi) = (1e-9, 1e4);
            assert!(g(lo) < 0.0 && g(hi) > 0.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let want = -(0.5 * (lo + hi)).powi(2);
            assert!(
                ((state.z - want) / want).abs() < 1e-10,
                "sign {sign}: z={}, want {want}",
                state.z
            );
        }
    }

    #[test]
    fn friedrichs_has_no_bound_states() {
        let cfg = cfg3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], 1);
        let f = BoundaryPair::friedrichs(2);
        let scan = bound_states(&f, &cfg, &ScanOptions::default()).unwrap();
        assert!(scan.states.is_empty());
        assert!(!scan.best_effort);
    }

    #[test]
    fn krein_has_no_negative_states() {
        for points in [
            vec![[0.0, 0.0, 0.0]],
            vec![[0.0, 0.0, 0.0], [0.7, 0.0, 0.0]],
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.5, 0.0]],
        ] {
            let cfg = cfg3(&points, 1);
            let kp = crate::extensions::krein_pair(&cfg).unwrap();
            assert_eq!(kappa_minus(&kp, &cfg).unwrap(), 0);
            let scan = bound_states(&kp, &cfg, &ScanOptions::default()).unwrap();
            assert!(scan.states.is_empty(), "m={}", points.len());
        }
        // 2D Krein pair goes through the σ_min path (singular D)
        let cfg = cfg2(&[[0.0, 0.0], [2.0, 0.0]], 1);
        let kp = crate::extensions::krein_pair(&cfg).unwrap();
        assert_eq!(*kp.tag(), PairTag::Krein);
        let scan = bound_states(&kp, &cfg, &ScanOptions::default()).unwrap();
        assert!(scan.states.is_empty());
        assert!(scan.best_effort);
    }

    #[test]
    fn count_matches_inertia_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..30 {
            let m = rng.gen_range(1..=4);
            let cfg = loop {
                let pts: Vec<Vec<f64>> = (0..m)
                    .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
                    .collect();
                let cfg = PointConfiguration::new(Dimension::Three, pts, 1).unwrap();
                match cfg.validate() {
                    Ok(d) if m == 1 || d.min_separation() > 0.1 => break cfg,
                    _ => continue,
                }
            };
            let alpha: Vec<f64> = (0..m).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let pair = BoundaryPair::diagonal_alpha(&alpha, 1).unwrap();
            let kappa = kappa_minus(&pair, &cfg).unwrap();
            let scan = bound_states(&pair, &cfg, &ScanOptions::default()).unwrap();
            assert_eq!(
                scan.total_multiplicity(),
                kappa,
                "trial {trial}: alpha {alpha:?}"
            );
            assert!(scan.total_multiplicity() <= cfg.boundary_dim());
            for s in &scan.states {
                let mw = weyl_neg(&cfg, &cfg.validate().unwrap(), s.s).unwrap();
                let secular = pair.c() - pair.d() * &mw;
                let scale = crate::matrixkernel::op_norm(pair.c())
                    + crate::matrixkernel::op_norm(pair.d()) * crate::matrixkernel::op_norm(&mw);
                assert!(s.coefficients.ncols() >= 1);
                for col in 0..s.coefficients.ncols() {
                    let v = s.coefficients.column(col).clone_owned();
                    let resid = (&secular * &v).norm();
                    assert!(resid <= 1e-8 * scale, "residual {resid:e} scale {scale:e}");
                }
            }
        }
    }

    #[test]
    fn eigenfunction_examples() {
        let cfg = cfg3(&[[0.0, 0.0, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[-1.0], 1).unwrap();
        let scan = bound_states(&p, &cfg, &ScanOptions::default()).unwrap();
        let state = &scan.states[0];
        // at distance 1/(4π) from the center the raw value is e^{−1}
        // times the coefficient
        let x = [1.0 / (4.0 * PI), 0.0, 0.0];
        let v = eigenfunction_eval(state, &cfg, &x).unwrap();
        let coeff = state.coefficients[(0, 0)];
        let want = coeff * (-1.0f64).exp();
        assert!((v[0] - want).norm() < 1e-9 * want.norm());

        // 2D kernel value via the K₀ connection
        let cfg = cfg2(&[[0.0, 0.0]], 1);
        let xi = DVector::from_element(1, c(1.0, 0.0));
        let v = gamma_field_eval(&cfg, c(-1.0, 0.0), &xi, &[1.0, 0.0]).unwrap();
        assert!((v[0].re - deltaspec_oracle::k0_f64(1.0) / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn gerschgorin_examples() {
        let cfg = cfg3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], 1);
        let r = gerschgorin_check(&[-1.0, -1.0], &cfg, &[0, 1]).unwrap();
        assert!(r.lower_bound_holds);
        assert_eq!(r.m_prime, 2);
        assert!(r.exact);
        let p = BoundaryPair::diagonal_alpha(&[-1.0, -1.0], 1).unwrap();
        assert_eq!(kappa_minus(&p, &cfg).unwrap(), 2);

        let r = gerschgorin_check(&[1.0, 1.0], &cfg, &[]).unwrap();
        assert_eq!(r.m_prime, 0);
        assert!(r.lower_bound_holds);
        assert!(r.exact);

        let r = gerschgorin_check(&[-1.0, 1.0], &cfg, &[0]).unwrap();
        assert!(r.lower_bound_holds);
        assert!(r.exact);
        let p = BoundaryPair::diagonal_alpha(&[-1.0, 1.0], 1).unwrap();
        assert_eq!(kappa_minus(&p, &cfg).unwrap(), 1);
    }

    #[test]
    fn essential_spectrum_descriptor() {
        let cfg = cfg3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], 3);
        let e = essential_spectrum(&cfg);
        assert_eq!(e.lower, 0.0);
        assert_eq!(e.max_negative_eigenvalues, 6);
    }

    #[test]
    fn multiplicity_from_symmetry() {
        // three centers on an equilateral triangle with equal strongly
        // negative α: the two antisymmetric channels are degenerate
        let h = 3f64.sqrt() / 2.0;
        let cfg = cfg3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]], 1);
        let p = BoundaryPair::diagonal_alpha(&[-0.5, -0.5, -0.5], 1).unwrap();
        let scan = bound_states(&p, &cfg, &ScanOptions::default()).unwrap();
        assert_eq!(scan.total_multiplicity(), 3);
        assert_eq!(kappa_minus(&p, &cfg).unwrap(), 3);
        // deepest state is the symmetric one (simple), the degenerate
        // pair sits above it
        assert_eq!(scan.states.len(), 2);
        assert_eq!(scan.states[0].multiplicity, 1);
        assert_eq!(scan.states[1].multiplicity, 2);
    }

    #[test]
    fn multiplicity_two_doubles_the_scalar_spectrum() {
        // identical diagonal blocks: the n = 2 problem is two copies of
        // the n = 1 problem, in both dimensions
        for (dim, points) in [
            (Dimension::Three, vec![vec![0.0, 0.0, 0.0], vec![0.9, 0.0, 0.0]]),
            (Dimension::Two, vec![vec![0.0, 0.0], vec![0.9, 0.0]]),
        ] {
            let alpha = [-0.6, -0.2];
            let cfg1 = PointConfiguration::new(dim, points.clone(), 1).unwrap();
            let cfg2 = PointConfiguration::new(dim, points, 2).unwrap();
            let p1 = BoundaryPair::diagonal_alpha(&alpha, 1).unwrap();
            let p2 = BoundaryPair::diagonal_alpha(&alpha, 2).unwrap();
            let s1 = bound_states(&p1, &cfg1, &ScanOptions::default()).unwrap();
            let s2 = bound_states(&p2, &cfg2, &ScanOptions::default()).unwrap();
            assert_eq!(s2.total_multiplicity(), 2 * s1.total_multiplicity());
            // every scalar root appears with doubled multiplicity
            for st in &s1.states {
                let hit = s2
                    .states
                    .iter()
                    .find(|t| ((t.z - st.z) / st.z).abs() < 1e-10)
                    .unwrap_or_else(|| panic!("missing doubled root {}", st.z));
                assert_eq!(hit.multiplicity, 2 * st.multiplicity);
            }
        }
    }

    #[test]
    fn hermitian_operator_pair_with_multiplicity() {
        // n = 2 internal dimension, operator-form pair
        let cfg = cfg3(&[[0.0, 0.0, 0.0], [1.2, 0.0, 0.0]], 2);
        let mut b = DMatrix::zeros(4, 4);
        b[(0, 0)] = c(-0.8, 0.0);
        b[(1, 1)] = c(0.4, 0.0);
        b[(2, 2)] = c(-0.8, 0.0);
        b[(3, 3)] = c(0.4, 0.0);
        b[(0, 1)] = c(0.1, 0.2);
        b[(1, 0)] = c(0.1, -0.2);
        b[(2, 3)] = c(0.1, 0.2);
        b[(3, 2)] = c(0.1, -0.2);
        let pair = BoundaryPair::operator_form(b.clone()).unwrap();
        let kappa = kappa_minus(&pair, &cfg).unwrap();
        let scan = bound_states(&pair, &cfg, &ScanOptions::default()).unwrap();
        assert_eq!(scan.total_multiplicity(), kappa);
    }
}
