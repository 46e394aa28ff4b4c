//! Problem description: interaction centers, dimension, internal
//! multiplicity, and the (C, D) boundary-condition parametrization.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spatial dimension of the underlying Laplacian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn coords(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

/// Relative separation below which two centers count as duplicates.
const DUPLICATE_GUARD: f64 = 1e-12;

/// m distinct interaction centers in ℝ^d with internal multiplicity n
/// (the matrix case acts as Iₙ ⊗ · on every site-indexed object).
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    dim: Dimension,
    points: Vec<Vec<f64>>,
    multiplicity: usize,
}

impl PointConfiguration {
    pub fn new(dim: Dimension, points: Vec<Vec<f64>>, multiplicity: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NoPoints);
        }
        if multiplicity == 0 {
            return Err(Error::SizeMismatch(
                "internal multiplicity must be at least 1".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim.coords() {
                return Err(Error::WrongPointLength {
                    index: i,
                    got: p.len(),
                    expected: dim.coords(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidCoordinate { index: i });
            }
        }
        Ok(PointConfiguration {
            dim,
            points,
            multiplicity,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// Number of interaction centers m.
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Internal multiplicity n.
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// Boundary-space dimension n·m.
    pub fn boundary_dim(&self) -> usize {
        self.points.len() * self.multiplicity
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Euclidean distance from `x` to center `j`.
    pub fn distance_to(&self, j: usize, x: &[f64]) -> f64 {
        self.points[j]
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Computes the separation matrix, rejecting duplicate centers.
    pub fn validate(&self) -> Result<DistanceMatrix> {
        let m = self.num_points();
        let mut r = DMatrix::zeros(m, m);
        let mut diameter = 0.0f64;
        for j in 0..m {
            for k in (j + 1)..m {
                let d = self.distance_to(j, &self.points[k]);
                r[(j, k)] = d;
                r[(k, j)] = d;
                diameter = diameter.max(d);
            }
        }
        for j in 0..m {
            for k in (j + 1)..m {
                if r[(j, k)] <= DUPLICATE_GUARD * diameter || r[(j, k)] == 0.0 {
                    return Err(Error::DuplicateCenters(j, k));
                }
            }
        }
        Ok(DistanceMatrix { r })
    }
}

/// Cached pairwise separations |x_j − x_k|.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    r: DMatrix<f64>,
}

impl DistanceMatrix {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.r[(j, k)]
    }

    pub fn size(&self) -> usize {
        self.r.nrows()
    }

    pub fn min_separation(&self) -> f64 {
        let m = self.size();
        let mut min = f64::INFINITY;
        for j in 0..m {
            for k in (j + 1)..m {
                min = min.min(self.r[(j, k)]);
            }
        }
        min
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.r
    }
}

/// How a boundary pair was constructed; purely informational.
#[derive(Clone, Debug, PartialEq)]
pub enum PairTag {
    General,
    /// D = I and C Hermitian: the operator-form parametrization.
    Operator,
    /// C = diag(α) ⊗-expanded, D = I.
    DiagonalAlpha(Vec<f64>),
    /// C = I, D = 0 (kernel of Γ₀).
    Friedrichs,
    Krein,
}

/// Matrix pair (C, D) selecting the extension through C·Γ₀ = D·Γ₁.
///
/// All (nm)×(nm) matrices in this crate use the block order of the Weyl
/// function Iₙ ⊗ M_s(z): the site index is the fast index inside each of
/// the n identical m×m blocks, i.e. row s·m + j addresses block s, site j.
#[derive(Clone, Debug)]
pub struct BoundaryPair {
    c: DMatrix<Complex64>,
    d: DMatrix<Complex64>,
    tag: PairTag,
}

impl BoundaryPair {
    pub fn general(c: DMatrix<Complex64>, d: DMatrix<Complex64>) -> Result<Self> {
        if c.nrows() != c.ncols() || d.nrows() != d.ncols() || c.nrows() != d.nrows() {
            return Err(Error::SizeMismatch(format!(
                "C is {}x{}, D is {}x{}; both must be square of equal size",
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        if c.iter().chain(d.iter()).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(BoundaryPair {
            c,
            d,
            tag: PairTag::General,
        })
    }

    /// Operator-form pair Θ = B: C = B, D = I.
    pub fn operator_form(b: DMatrix<Complex64>) -> Result<Self> {
        let size = b.nrows();
        let mut pair = Self::general(b, DMatrix::identity(size, size))?;
        pair.tag = PairTag::Operator;
        Ok(pair)
    }

    /// The diagonal family: C = Iₙ ⊗ diag(α₁, …, α_m), D = I.
    pub fn diagonal_alpha(alpha: &[f64], multiplicity: usize) -> Result<Self> {
        if alpha.is_empty() || multiplicity == 0 {
            return Err(Error::CouplingLength {
                got: alpha.len(),
                expected: 1,
            });
        }
        let m = alpha.len();
        let size = m * multiplicity;
        let mut c = DMatrix::zeros(size, size);
        for s in 0..multiplicity {
            for (j, &a) in alpha.iter().enumerate() {
                c[(s * m + j, s * m + j)] = Complex64::new(a, 0.0);
            }
        }
        Ok(BoundaryPair {
            c,
            d: DMatrix::identity(size, size),
            tag: PairTag::DiagonalAlpha(alpha.to_vec()),
        })
    }

    /// The Friedrichs pair C = I, D = 0 (selects ker Γ₀, i.e. H₀).
    pub fn friedrichs(boundary_dim: usize) -> Self {
        BoundaryPair {
            c: DMatrix::identity(boundary_dim, boundary_dim),
            d: DMatrix::zeros(boundary_dim, boundary_dim),
            tag: PairTag::Friedrichs,
        }
    }

    pub(crate) fn with_tag(
        c: DMatrix<Complex64>,
        d: DMatrix<Complex64>,
        tag: PairTag,
    ) -> Self {
        BoundaryPair { c, d, tag }
    }

    pub fn c(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<Complex64> {
        &self.d
    }

    pub fn tag(&self) -> &PairTag {
        &self.tag
    }

    pub fn size(&self) -> usize {
        self.c.nrows()
    }

    /// Checks the boundary dimension against a configuration.
    pub fn check_size(&self, config: &PointConfiguration) -> Result<()> {
        if self.size() != config.boundary_dim() {
            return Err(Error::SizeMismatch(format!(
                "pair acts on C^{}, configuration needs C^{}",
                self.size(),
                config.boundary_dim()
            )));
        }
        Ok(())
    }
}

/// Expands an m×m site matrix to the (nm)×(nm) block-diagonal form
/// Iₙ ⊗ block in the crate-wide block order.
pub fn expand_blocks(block: &DMatrix<Complex64>, multiplicity: usize) -> DMatrix<Complex64> {
    let m = block.nrows();
    let size = m * multiplicity;
    let mut full = DMatrix::zeros(size, size);
    for s in 0..multiplicity {
        full.view_mut((s * m, s * m), (m, m)).copy_from(block);
    }
    full
}

/// Real-matrix counterpart of [`expand_blocks`].
pub fn expand_blocks_real(block: &DMatrix<f64>, multiplicity: usize) -> DMatrix<f64> {
    let m = block.nrows();
    let size = m * multiplicity;
    let mut full = DMatrix::zeros(size, size);
    for s in 0..multiplicity {
        full.view_mut((s * m, s * m), (m, m)).copy_from(block);
    }
    full
}

/// Lifts a real matrix into the complex field.
pub fn complexify(a: &DMatrix<f64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| Complex64::new(a[(i, j)], 0.0))
}

/// The boundary-triplet surjectivity matrices: E1 = (e^{−r_jk}) and the
/// dimension-specific E0 (3D: −e^{−r}/(r − δ); 2D: −e^{−r}·ln(r + δ)).
pub fn e_matrices(config: &PointConfiguration) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let dist = config.validate()?;
    let m = config.num_points();
    let mut e0 = DMatrix::zeros(m, m);
    let mut e1 = DMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            let r = dist.get(j, k);
            e1[(j, k)] = (-r).exp();
            e0[(j, k)] = match config.dim() {
                Dimension::Three => {
                    if j == k {
                        1.0
                    } else {
                        -(-r).exp() / r
                    }
                }
                Dimension::Two => {
                    if j == k {
                        0.0
                    } else {
                        -(-r).exp() * r.ln()
                    }
                }
            };
        }
    }
    Ok((e0, e1))
}

/// Frobenius norm of a complex matrix, used as the generic scale.
pub fn fro_norm(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Builds a vector in the crate block order from per-site coefficient
/// vectors ξ_j ∈ ℂⁿ.
pub fn stack_site_coefficients(xi: &[DVector<Complex64>], multiplicity: usize) -> DVector<Complex64> {
    let m = xi.len();
    let mut out = DVector::zeros(m * multiplicity);
    for (j, v) in xi.iter().enumerate() {
        for s in 0..multiplicity {
            out[s * m + j] = v[s];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config3(points: &[[f64; 3]]) -> PointConfiguration {
        PointConfiguration::new(
            Dimension::Three,
            points.iter().map(|p| p.to_vec()).collect(),
            1,
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        let cfg = config3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        let d = cfg.validate().unwrap();
        assert_eq!(d.get(0, 0), 0.0);
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(1, 0), 1.0);

        let cfg2 = PointConfiguration::new(
            Dimension::Two,
            vec![vec![0.0, 0.0], vec![3.0, 4.0]],
            1,
        )
        .unwrap();
        assert_eq!(cfg2.validate().unwrap().get(0, 1), 5.0);
    }

    #[test]
    fn validate_rejects_duplicates() {
        let cfg = config3(&[[0.0, 0.0, 0.0], [1.0, 2.0, 3.0], [0.0, 0.0, 0.0]]);
        match cfg.validate() {
            Err(Error::DuplicateCenters(a, b)) => assert_eq!((a, b), (0, 2)),
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn new_rejects_bad_coordinates() {
        let res = PointConfiguration::new(
            Dimension::Three,
            vec![vec![0.0, f64::NAN, 0.0]],
            1,
        );
        assert!(matches!(res, Err(Error::InvalidCoordinate { index: 0 })));
        let res = PointConfiguration::new(Dimension::Two, vec![vec![0.0, 0.0, 0.0]], 1);
        assert!(matches!(res, Err(Error::WrongPointLength { .. })));
    }

    #[test]
    fn diagonal_family_examples() {
        let p = BoundaryPair::diagonal_alpha(&[-1.0], 1).unwrap();
        assert_eq!(p.c()[(0, 0)], Complex64::new(-1.0, 0.0));
        assert_eq!(p.d()[(0, 0)], Complex64::new(1.0, 0.0));

        let p = BoundaryPair::diagonal_alpha(&[2.0, 3.0], 1).unwrap();
        assert_eq!(p.c()[(0, 0)].re, 2.0);
        assert_eq!(p.c()[(1, 1)].re, 3.0);
        assert_eq!(p.c()[(0, 1)], Complex64::new(0.0, 0.0));

        let p = BoundaryPair::diagonal_alpha(&[0.0], 2).unwrap();
        assert_eq!(p.size(), 2);
        assert!(p.c().iter().all(|v| v.norm() == 0.0));
        assert_eq!(p.d()[(1, 1)].re, 1.0);
    }

    #[test]
    fn e_matrices_examples() {
        // 3D, single center
        let cfg = config3(&[[0.0, 0.0, 0.0]]);
        let (e0, e1) = e_matrices(&cfg).unwrap();
        assert_eq!(e0[(0, 0)], 1.0);
        assert_eq!(e1[(0, 0)], 1.0);

        // 2D, single center
        let cfg2 =
            PointConfiguration::new(Dimension::Two, vec![vec![0.5, -0.25]], 1).unwrap();
        let (e0, e1) = e_matrices(&cfg2).unwrap();
        assert_eq!(e0[(0, 0)], 0.0);
        assert_eq!(e1[(0, 0)], 1.0);

        // 3D, two centers at unit distance
        let cfg = config3(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]);
        let (e0, e1) = e_matrices(&cfg).unwrap();
        let em1 = (-1.0f64).exp();
        assert_eq!(e1[(0, 1)], em1);
        assert_eq!(e0[(0, 1)], -em1);
        assert_eq!(e0[(0, 0)], 1.0);
    }

    #[test]
    fn site_coefficients_stack_in_block_order() {
        use nalgebra::DVector;
        let xi = vec![
            DVector::from_column_slice(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]),
            DVector::from_column_slice(&[Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)]),
        ];
        let stacked = stack_site_coefficients(&xi, 2);
        // block s, site j at index s*m + j
        assert_eq!(stacked[0].re, 1.0); // s=0, j=0
        assert_eq!(stacked[1].re, 3.0); // s=0, j=1
        assert_eq!(stacked[2].re, 2.0); // s=1, j=0
        assert_eq!(stacked[3].re, 4.0); // s=1, j=1
    }

    #[test]
    fn block_expansion_order() {
        let block = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(4.0, 0.0),
        ]);
        let full = expand_blocks(&block, 2);
        assert_eq!(full.nrows(), 4);
        assert_eq!(full[(0, 1)].re, 2.0);
        assert_eq!(full[(2, 3)].re, 2.0);
        assert_eq!(full[(0, 3)].re, 0.0);
    }
}
