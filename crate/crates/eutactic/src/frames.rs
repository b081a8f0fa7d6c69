//! Eutactic stars and their lifts.
//!
//! A star in R^n is any finite family of vectors. It is eutactic exactly
//! when it is the orthogonal shadow of an orthonormal basis of a larger
//! space, which happens exactly when its dyads resolve the identity
//! (Parseval tight frame). `project_basis` casts the shadow;
//! `naimark_dilate` reverses it, lifting a Parseval star back to an
//! orthonormal basis plus a coordinate projector.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{gs_normalize, gs_residual, Matrix, Vector};
use crate::scalar::{Backend, Scalar};

/// An orthonormal basis of R^m, validated on construction.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    vectors: Vec<Vector>,
}

impl OrthonormalBasis {
    /// Checks every pair: unit norms and vanishing cross inner products,
    /// exactly on the exact backend and within `tol` on floats. The error
    /// names the offending pair (i == j means a bad norm) and the inner
    /// product it found.
    pub fn new(vectors: Vec<Vector>, tol: f64) -> Result<Self> {
        let m = vectors.len();
        let first = vectors.first().ok_or(Error::DimensionMismatch {
            context: "basis needs at least one vector",
            left: 0,
            right: 1,
        })?;
        let backend = first.backend();
        for v in &vectors {
            if v.dim() != m {
                return Err(Error::DimensionMismatch {
                    context: "basis vector count must equal the dimension",
                    left: m,
                    right: v.dim(),
                });
            }
            if v.backend() != backend {
                return Err(Error::BackendMismatch(backend.name(), v.backend().name()));
            }
        }
        for i in 0..m {
            for j in i..m {
                let inner = vectors[i].inner(&vectors[j])?;
                let target = if i == j {
                    Scalar::one(backend)
                } else {
                    Scalar::zero(backend)
                };
                if !inner.close_to(&target, tol)? {
                    return Err(Error::NotOrthonormal {
                        i,
                        j,
                        inner: inner.to_string(),
                    });
                }
            }
        }
        Ok(OrthonormalBasis { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn backend(&self) -> Backend {
        self.vectors[0].backend()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// The orthogonal matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(&self.vectors).expect("validated on construction")
    }

    pub fn to_float(&self) -> OrthonormalBasis {
        OrthonormalBasis {
            vectors: self.vectors.iter().map(Vector::to_float).collect(),
        }
    }
}

/// An orthogonal projector onto a set of coordinate axes of R^dim.
/// Backend-free: it only remembers which coordinates survive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateProjector {
    dim: usize,
    kept: BTreeSet<usize>,
}

impl CoordinateProjector {
    pub fn new(dim: usize, kept: impl IntoIterator<Item = usize>) -> Result<Self> {
        let kept: BTreeSet<usize> = kept.into_iter().collect();
        if kept.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "projector needs at least one kept coordinate",
                left: 0,
                right: 1,
            });
        }
        if let Some(&max) = kept.iter().next_back() {
            if max >= dim {
                return Err(Error::IndexOutOfRange {
                    context: "projector coordinate",
                    index: max,
                    bound: dim,
                });
            }
        }
        Ok(CoordinateProjector { dim, kept })
    }

    pub fn full(dim: usize) -> Self {
        CoordinateProjector {
            dim,
            kept: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn kept(&self) -> impl Iterator<Item = usize> + '_ {
        self.kept.iter().copied()
    }

    pub fn keeps(&self, coord: usize) -> bool {
        self.kept.contains(&coord)
    }

    pub fn is_full(&self) -> bool {
        self.kept.len() == self.dim
    }

    pub fn is_disjoint(&self, other: &CoordinateProjector) -> bool {
        self.kept.is_disjoint(&other.kept)
    }

    /// The projector onto the remaining coordinates, if any remain.
    pub fn complement(&self) -> Option<CoordinateProjector> {
        let kept: BTreeSet<usize> = (0..self.dim).filter(|c| !self.kept.contains(c)).collect();
        if kept.is_empty() {
            None
        } else {
            Some(CoordinateProjector {
                dim: self.dim,
                kept,
            })
        }
    }

    /// Diagonal 0/1 matrix realizing the projector on a chosen backend.
    pub fn matrix(&self, backend: Backend) -> Matrix {
        let rows: Vec<Vector> = (0..self.dim)
            .map(|c| {
                if self.kept.contains(&c) {
                    Vector::standard_basis(backend, self.dim, c).expect("validated")
                } else {
                    Vector::zeros(backend, self.dim)
                }
            })
            .collect();
        Matrix::from_rows(&rows).expect("square by construction")
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "projector application",
                left: self.dim,
                right: v.dim(),
            });
        }
        Ok(())
    }

    /// Apply in place of matrix multiplication: zero the dropped coordinates.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.check_dim(v)?;
        let scalars = (0..self.dim)
            .map(|c| {
                if self.kept.contains(&c) {
                    v.entry(c)
                } else {
                    Scalar::zero(v.backend())
                }
            })
            .collect();
        Vector::from_scalars(scalars)
    }

    /// Extract the kept coordinates, in increasing order, into R^rank.
    pub fn restrict(&self, v: &Vector) -> Result<Vector> {
        self.check_dim(v)?;
        Vector::from_scalars(self.kept.iter().map(|&c| v.entry(c)).collect())
    }
}

/// Outcome of a Parseval check. The defect norm is always reported, even
/// when the verdict is positive.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParsevalReport {
    pub is_parseval: bool,
    pub defect_norm: f64,
}

/// A finite family of vectors in R^ambient_dim, tagged with the backend
/// so that the empty star stays well-defined.
#[derive(Clone, Debug)]
pub struct EutacticStar {
    backend: Backend,
    ambient_dim: usize,
    vectors: Vec<Vector>,
}

impl EutacticStar {
    pub fn new(backend: Backend, ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        for v in &vectors {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "star vector dimension",
                    left: ambient_dim,
                    right: v.dim(),
                });
            }
            if v.backend() != backend {
                return Err(Error::BackendMismatch(backend.name(), v.backend().name()));
            }
        }
        Ok(EutacticStar {
            backend,
            ambient_dim,
            vectors,
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Dimension n of the space the star lives in.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number m of star vectors, the dimension of the dilation space.
    pub fn source_dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Sum of the dyads of the star vectors.
    pub fn resolution(&self) -> Matrix {
        resolution_of_identity(self.backend, self.ambient_dim, &self.vectors)
            .expect("validated on construction")
    }

    /// Resolution minus the identity.
    pub fn defect_matrix(&self) -> Matrix {
        self.resolution()
            .sub(&Matrix::identity(self.backend, self.ambient_dim))
            .expect("shapes agree")
    }

    /// Frobenius norm of the defect; zero exactly when the star is eutactic.
    pub fn eutacticity_defect(&self) -> f64 {
        self.defect_matrix().frobenius_norm()
    }

    /// Parseval verdict: exact defects must vanish identically, float
    /// defects must stay below `tol` in Frobenius norm.
    pub fn parseval_report(&self, tol: f64) -> ParsevalReport {
        let defect = self.defect_matrix();
        let defect_norm = defect.frobenius_norm();
        let is_parseval = match self.backend {
            Backend::Exact => defect.is_zero_within(0.0),
            Backend::Float => defect_norm < tol,
        };
        ParsevalReport {
            is_parseval,
            defect_norm,
        }
    }

    pub fn is_parseval(&self, tol: f64) -> bool {
        self.parseval_report(tol).is_parseval
    }

    pub fn to_float(&self) -> EutacticStar {
        EutacticStar {
            backend: Backend::Float,
            ambient_dim: self.ambient_dim,
            vectors: self.vectors.iter().map(Vector::to_float).collect(),
        }
    }
}

/// Sum of dyads of an arbitrary vector family (no Parseval assumption);
/// the empty family yields the zero matrix.
pub fn resolution_of_identity(backend: Backend, dim: usize, vectors: &[Vector]) -> Result<Matrix> {
    let mut acc = Matrix::zeros(backend, dim, dim);
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "resolution of identity",
                left: dim,
                right: v.dim(),
            });
        }
        acc = acc.add(&v.dyad())?;
    }
    Ok(acc)
}

/// Project an orthonormal basis onto kept coordinates. The resulting
/// star lives in R^rank and is Parseval by construction.
pub fn project_basis(
    basis: &OrthonormalBasis,
    projector: &CoordinateProjector,
) -> Result<EutacticStar> {
    if basis.dim() != projector.dim() {
        return Err(Error::DimensionMismatch {
            context: "basis projection",
            left: basis.dim(),
            right: projector.dim(),
        });
    }
    let vectors = basis
        .vectors()
        .iter()
        .map(|v| projector.restrict(v))
        .collect::<Result<Vec<_>>>()?;
    EutacticStar::new(basis.backend(), projector.rank(), vectors)
}

/// Lift a Parseval star in R^n with m vectors to an orthonormal basis of
/// R^m and the projector onto the first n coordinates, so that
/// `project_basis` reproduces the star.
///
/// The n x m matrix with the star vectors as columns has orthonormal rows;
/// those rows are extended to an orthonormal basis of R^m by Gram-Schmidt
/// over the standard basis vectors in index order. Candidates whose
/// residual norm falls below 1e-8 (float) or whose residual has no
/// in-field norm (exact) are skipped. The completed matrix's columns are
/// the lifted basis.
pub fn naimark_dilate(
    star: &EutacticStar,
    tol: f64,
) -> Result<(OrthonormalBasis, CoordinateProjector)> {
    let report = star.parseval_report(tol);
    if !report.is_parseval {
        return Err(Error::NotParseval {
            defect: report.defect_norm,
        });
    }
    let n = star.ambient_dim();
    let m = star.source_dim();
    if m < n {
        // A Parseval star needs at least n vectors; unreachable once the
        // defect check passed, but keep the invariant explicit.
        return Err(Error::DimensionMismatch {
            context: "dilation needs source_dim >= ambient_dim",
            left: m,
            right: n,
        });
    }
    let columns = match star.backend() {
        Backend::Exact => {
            let rows_exact = complete_rows(
                (0..n)
                    .map(|i| {
                        star.vectors()
                            .iter()
                            .map(|v| match v.entry(i) {
                                Scalar::Exact(q) => q,
                                Scalar::Float(_) => unreachable!("backend validated"),
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect(),
                m,
            )?;
            transpose_to_vectors(rows_exact, Vector::exact)
        }
        Backend::Float => {
            let rows_float = complete_rows(
                (0..n)
                    .map(|i| {
                        star.vectors()
                            .iter()
                            .map(|v| v.entry(i).to_f64())
                            .collect::<Vec<_>>()
                    })
                    .collect(),
                m,
            )?;
            transpose_to_vectors(rows_float, Vector::float)
        }
    };
    let basis = OrthonormalBasis::new(columns, tol)?;
    let projector = CoordinateProjector::new(m, 0..n)?;
    Ok((basis, projector))
}

fn complete_rows<T: crate::linalg::Num>(mut rows: Vec<Vec<T>>, m: usize) -> Result<Vec<Vec<T>>> {
    for candidate in 0..m {
        if rows.len() == m {
            break;
        }
        let mut e = vec![T::zero(); m];
        e[candidate] = T::one();
        let residual = gs_residual(&rows, &e);
        if let Some(normalized) = gs_normalize(residual) {
            rows.push(normalized);
        }
    }
    if rows.len() != m {
        return Err(Error::CompletionFailed(
            "ran out of usable candidate coordinates",
        ));
    }
    Ok(rows)
}

fn transpose_to_vectors<T: Clone>(rows: Vec<Vec<T>>, mk: fn(Vec<T>) -> Vector) -> Vec<Vector> {
    let m = rows.len();
    (0..m)
        .map(|j| mk((0..m).map(|i| rows[i][j].clone()).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadScalar as Q;

    fn std_basis(backend: Backend, m: usize) -> OrthonormalBasis {
        let vectors = (0..m)
            .map(|i| Vector::standard_basis(backend, m, i).unwrap())
            .collect();
        OrthonormalBasis::new(vectors, 0.0).unwrap()
    }

    #[test]
    fn standard_basis_resolves_identity() {
        let basis = std_basis(Backend::Exact, 3);
        let res = resolution_of_identity(Backend::Exact, 3, basis.vectors()).unwrap();
        assert!(res.try_eq(&Matrix::identity(Backend::Exact, 3)).unwrap());
    }

    #[test]
    fn empty_star_has_sqrt_two_defect_in_r2() {
        let star = EutacticStar::new(Backend::Exact, 2, vec![]).unwrap();
        assert!((star.eutacticity_defect() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(!star.is_parseval(1e-10));
    }

    #[test]
    fn single_unit_vector_is_parseval_in_r1() {
        let star =
            EutacticStar::new(Backend::Exact, 1, vec![Vector::exact(vec![Q::one()])]).unwrap();
        let report = star.parseval_report(0.0);
        assert!(report.is_parseval);
        assert_eq!(report.defect_norm, 0.0);
    }

    #[test]
    fn non_orthonormal_basis_reports_offending_pair() {
        let v = Vector::exact(vec![Q::one(), Q::zero()]);
        let err = OrthonormalBasis::new(vec![v.clone(), v], 0.0).unwrap_err();
        match err {
            Error::NotOrthonormal { i, j, inner } => {
                assert_eq!((i, j), (0, 1));
                assert_eq!(inner, "1");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn projector_apply_and_restrict() {
        let p = CoordinateProjector::new(3, [2]).unwrap();
        let v = Vector::exact(vec![Q::from_integer(5), Q::from_integer(7), Q::one()]);
        let applied = p.apply(&v).unwrap();
        assert!(applied
            .try_eq(&Vector::exact(vec![Q::zero(), Q::zero(), Q::one()]))
            .unwrap());
        let restricted = p.restrict(&v).unwrap();
        assert!(restricted.try_eq(&Vector::exact(vec![Q::one()])).unwrap());
    }

    #[test]
    fn projector_matrix_is_diagonal_idempotent() {
        let p = CoordinateProjector::new(4, [0, 2]).unwrap();
        let m = p.matrix(Backend::Exact);
        assert!(m.mul(&m).unwrap().try_eq(&m).unwrap());
        assert!(m
            .trace()
            .try_eq(&Scalar::Exact(Q::from_integer(2)))
            .unwrap());
    }

    #[test]
    fn complement_partitions_coordinates() {
        let p = CoordinateProjector::new(4, [1, 3]).unwrap();
        let q = p.complement().unwrap();
        assert_eq!(q.kept().collect::<Vec<_>>(), vec![0, 2]);
        assert!(CoordinateProjector::full(4).complement().is_none());
    }

    #[test]
    fn projecting_standard_basis_gives_coordinate_star() {
        let basis = std_basis(Backend::Exact, 3);
        let p = CoordinateProjector::new(3, [2]).unwrap();
        let star = project_basis(&basis, &p).unwrap();
        assert_eq!(star.ambient_dim(), 1);
        assert_eq!(star.source_dim(), 3);
        assert!(star.is_parseval(0.0));
        assert!(star.vectors()[2]
            .try_eq(&Vector::exact(vec![Q::one()]))
            .unwrap());
    }

    #[test]
    fn dilating_a_full_star_returns_it_as_basis() {
        // A star that is already an orthonormal basis dilates to itself
        // with the full projector.
        let basis = std_basis(Backend::Exact, 3);
        let star = EutacticStar::new(Backend::Exact, 3, basis.vectors().to_vec()).unwrap();
        let (lifted, projector) = naimark_dilate(&star, 0.0).unwrap();
        assert!(projector.is_full());
        for (a, b) in lifted.vectors().iter().zip(basis.vectors()) {
            assert!(a.try_eq(b).unwrap());
        }
    }

    #[test]
    fn dilating_diagonal_pair_star_in_r1() {
        // Star {1/sqrt2, 1/sqrt2} in R^1 lifts to a rotated basis of R^2.
        let half_rt2 = Q::sqrt2_times(1, 2);
        let star = EutacticStar::new(
            Backend::Exact,
            1,
            vec![
                Vector::exact(vec![half_rt2.clone()]),
                Vector::exact(vec![half_rt2]),
            ],
        )
        .unwrap();
        let (basis, projector) = naimark_dilate(&star, 0.0).unwrap();
        assert_eq!(basis.dim(), 2);
        assert_eq!(projector.rank(), 1);
        let projected = project_basis(&basis, &projector).unwrap();
        for (a, b) in projected.vectors().iter().zip(star.vectors()) {
            assert!(a.try_eq(b).unwrap());
        }
    }

    #[test]
    fn dilation_rejects_non_parseval_star() {
        let star = EutacticStar::new(
            Backend::Exact,
            1,
            vec![Vector::exact(vec![Q::rational(1, 2)])],
        )
        .unwrap();
        assert!(matches!(
            naimark_dilate(&star, 0.0),
            Err(Error::NotParseval { .. })
        ));
    }

    #[test]
    fn float_dilation_round_trips() {
        let c = 0.6f64;
        let s = 0.8f64;
        // Rows of a 1x2 Parseval star.
        let star = EutacticStar::new(
            Backend::Float,
            1,
            vec![Vector::float(vec![c]), Vector::float(vec![s])],
        )
        .unwrap();
        let (basis, projector) = naimark_dilate(&star, 1e-10).unwrap();
        let projected = project_basis(&basis, &projector).unwrap();
        for (a, b) in projected.vectors().iter().zip(star.vectors()) {
            assert!(a.close_to(b, 1e-12).unwrap());
        }
    }
}
