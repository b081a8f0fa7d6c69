//! Backend-tagged dense vectors and matrices.
//!
//! Dimensions stay tiny (at most ~17), so everything is a plain dense
//! array. Exact and float data never mix inside one value; combining two
//! values checks the backends first and fails loudly on a mismatch.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Backend, QuadScalar, Scalar};

/// Operations the generic algorithms need from a backend's element type.
pub(crate) trait Num: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
    /// Gram-Schmidt gate: the norm belonging to `norm_sq` when the
    /// residual is usable, `None` when the candidate must be skipped
    /// (near-dependent on floats, no in-field root on exact data).
    fn usable_norm(norm_sq: &Self) -> Option<Self>;
}

/// Norm threshold below which a Gram-Schmidt residual counts as dependent.
pub(crate) const GS_SKIP_TOL: f64 = 1e-8;

impl Num for QuadScalar {
    fn zero() -> Self {
        QuadScalar::zero()
    }
    fn one() -> Self {
        QuadScalar::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        QuadScalar::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn usable_norm(norm_sq: &Self) -> Option<Self> {
        if norm_sq.is_zero() {
            return None;
        }
        norm_sq.try_sqrt()
    }
}

impl Num for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn try_inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn usable_norm(norm_sq: &Self) -> Option<Self> {
        let norm = norm_sq.max(0.0).sqrt();
        (norm >= GS_SKIP_TOL).then_some(norm)
    }
}

pub(crate) fn inner_g<T: Num>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

/// candidate minus its projection onto each (orthonormal) row.
pub(crate) fn gs_residual<T: Num>(rows: &[Vec<T>], candidate: &[T]) -> Vec<T> {
    let mut residual = candidate.to_vec();
    for row in rows {
        let coeff = inner_g(row, &residual);
        for (r, e) in residual.iter_mut().zip(row) {
            *r = r.sub(&coeff.mul(e));
        }
    }
    residual
}

/// Normalize a Gram-Schmidt residual, or report it unusable.
pub(crate) fn gs_normalize<T: Num>(mut residual: Vec<T>) -> Option<Vec<T>> {
    let norm = T::usable_norm(&inner_g(&residual, &residual))?;
    let inv = norm.try_inv()?;
    for e in residual.iter_mut() {
        *e = e.mul(&inv);
    }
    Some(residual)
}

/// Homogeneous storage for one backend.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Entries {
    Exact(Vec<QuadScalar>),
    Float(Vec<f64>),
}

impl Entries {
    fn backend(&self) -> Backend {
        match self {
            Entries::Exact(_) => Backend::Exact,
            Entries::Float(_) => Backend::Float,
        }
    }

    fn len(&self) -> usize {
        match self {
            Entries::Exact(v) => v.len(),
            Entries::Float(v) => v.len(),
        }
    }

    fn get(&self, i: usize) -> Scalar {
        match self {
            Entries::Exact(v) => Scalar::Exact(v[i].clone()),
            Entries::Float(v) => Scalar::Float(v[i]),
        }
    }

    fn zeros(backend: Backend, len: usize) -> Entries {
        match backend {
            Backend::Exact => Entries::Exact(vec![QuadScalar::zero(); len]),
            Backend::Float => Entries::Float(vec![0.0; len]),
        }
    }

    fn to_float(&self) -> Entries {
        match self {
            Entries::Exact(v) => Entries::Float(v.iter().map(QuadScalar::to_f64).collect()),
            Entries::Float(v) => Entries::Float(v.clone()),
        }
    }

    fn as_f64(&self) -> Vec<f64> {
        match self {
            Entries::Exact(v) => v.iter().map(QuadScalar::to_f64).collect(),
            Entries::Float(v) => v.clone(),
        }
    }
}

fn mismatch(a: Backend, b: Backend) -> Error {
    Error::BackendMismatch(a.name(), b.name())
}

macro_rules! zip_entries {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match ($a, $b) {
            (Entries::Exact($x), Entries::Exact($y)) => Ok(Entries::Exact($body)),
            (Entries::Float($x), Entries::Float($y)) => Ok(Entries::Float($body)),
            (a, b) => Err(mismatch(a.backend(), b.backend())),
        }
    };
}

/// A dense real vector on one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    pub(crate) entries: Entries,
}

impl Vector {
    pub fn exact(entries: Vec<QuadScalar>) -> Vector {
        Vector {
            entries: Entries::Exact(entries),
        }
    }

    pub fn float(entries: Vec<f64>) -> Vector {
        Vector {
            entries: Entries::Float(entries),
        }
    }

    pub(crate) fn from_entries(entries: Entries) -> Vector {
        Vector { entries }
    }

    /// Build from scalars that must all share one backend.
    pub fn from_scalars(scalars: Vec<Scalar>) -> Result<Vector> {
        let first = scalars.first().ok_or(Error::DimensionMismatch {
            context: "vector needs at least one entry",
            left: 0,
            right: 1,
        })?;
        match first.backend() {
            Backend::Exact => {
                let mut out = Vec::with_capacity(scalars.len());
                for s in &scalars {
                    match s {
                        Scalar::Exact(q) => out.push(q.clone()),
                        Scalar::Float(_) => return Err(mismatch(Backend::Exact, Backend::Float)),
                    }
                }
                Ok(Vector::exact(out))
            }
            Backend::Float => {
                let mut out = Vec::with_capacity(scalars.len());
                for s in &scalars {
                    match s {
                        Scalar::Float(x) => out.push(*x),
                        Scalar::Exact(_) => return Err(mismatch(Backend::Float, Backend::Exact)),
                    }
                }
                Ok(Vector::float(out))
            }
        }
    }

    pub fn zeros(backend: Backend, dim: usize) -> Vector {
        Vector {
            entries: Entries::zeros(backend, dim),
        }
    }

    pub fn standard_basis(backend: Backend, dim: usize, index: usize) -> Result<Vector> {
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                context: "standard basis vector",
                index,
                bound: dim,
            });
        }
        let mut v = Vector::zeros(backend, dim);
        match &mut v.entries {
            Entries::Exact(e) => e[index] = QuadScalar::one(),
            Entries::Float(e) => e[index] = 1.0,
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn backend(&self) -> Backend {
        self.entries.backend()
    }

    pub fn entry(&self, i: usize) -> Scalar {
        self.entries.get(i)
    }

    pub fn scalars(&self) -> Vec<Scalar> {
        (0..self.dim()).map(|i| self.entry(i)).collect()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.entries.as_f64()
    }

    pub fn to_float(&self) -> Vector {
        Vector {
            entries: self.entries.to_float(),
        }
    }

    fn check_dim(&self, other: &Vector, context: &'static str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context,
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Euclidean inner product.
    pub fn inner(&self, other: &Vector) -> Result<Scalar> {
        self.check_dim(other, "inner product")?;
        match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Float(_)) => {
                let _ = a;
                Err(mismatch(Backend::Exact, Backend::Float))
            }
            (Entries::Float(_), Entries::Exact(_)) => Err(mismatch(Backend::Float, Backend::Exact)),
            (Entries::Exact(a), Entries::Exact(b)) => Ok(Scalar::Exact(inner_g(a, b))),
            (Entries::Float(a), Entries::Float(b)) => Ok(Scalar::Float(inner_g(a, b))),
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other, "vector addition")?;
        let entries = zip_entries!(&self.entries, &other.entries, |a, b| a
            .iter()
            .zip(b)
            .map(|(x, y)| x.add(y))
            .collect())?;
        Ok(Vector { entries })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other, "vector subtraction")?;
        let entries = zip_entries!(&self.entries, &other.entries, |a, b| a
            .iter()
            .zip(b)
            .map(|(x, y)| x.sub(y))
            .collect())?;
        Ok(Vector { entries })
    }

    pub fn neg(&self) -> Vector {
        let entries = match &self.entries {
            Entries::Exact(v) => Entries::Exact(v.iter().map(|x| -x).collect()),
            Entries::Float(v) => Entries::Float(v.iter().map(|x| -x).collect()),
        };
        Vector { entries }
    }

    pub fn scale(&self, factor: &Scalar) -> Result<Vector> {
        let entries = match (&self.entries, factor) {
            (Entries::Exact(v), Scalar::Exact(f)) => {
                Entries::Exact(v.iter().map(|x| x * f).collect())
            }
            (Entries::Float(v), Scalar::Float(f)) => {
                Entries::Float(v.iter().map(|x| x * f).collect())
            }
            (e, f) => return Err(mismatch(e.backend(), f.backend())),
        };
        Ok(Vector { entries })
    }

    /// Squared Euclidean norm, on the vector's own backend.
    pub fn norm_sq(&self) -> Scalar {
        match &self.entries {
            Entries::Exact(v) => Scalar::Exact(inner_g(v, v)),
            Entries::Float(v) => Scalar::Float(inner_g(v, v)),
        }
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm_sq().to_f64().max(0.0).sqrt()
    }

    /// Unit vector in the same direction. On the exact backend the norm
    /// must have an in-field square root.
    pub fn normalized(&self) -> Result<Vector> {
        match &self.entries {
            Entries::Exact(v) => {
                let ns = inner_g(v, v);
                if ns.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let norm = ns
                    .try_sqrt()
                    .ok_or_else(|| Error::NoExactSquareRoot(ns.to_string()))?;
                let inv = norm.inv()?;
                Ok(Vector::exact(v.iter().map(|x| x * &inv).collect()))
            }
            Entries::Float(v) => {
                let norm = inner_g(v, v).sqrt();
                if norm == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Vector::float(v.iter().map(|x| x / norm).collect()))
            }
        }
    }

    /// Rank-one symmetric matrix `v v^T`.
    pub fn dyad(&self) -> Matrix {
        let n = self.dim();
        let entries = match &self.entries {
            Entries::Exact(v) => {
                let mut data = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        data.push(&v[i] * &v[j]);
                    }
                }
                Entries::Exact(data)
            }
            Entries::Float(v) => {
                let mut data = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        data.push(v[i] * v[j]);
                    }
                }
                Entries::Float(data)
            }
        };
        Matrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// Exactly zero (exact backend) or within `tol` of zero (float).
    pub fn is_zero_within(&self, tol: f64) -> bool {
        match &self.entries {
            Entries::Exact(v) => v.iter().all(QuadScalar::is_zero),
            Entries::Float(v) => inner_g(v, v).sqrt() <= tol,
        }
    }

    /// Same-backend closeness: exact equality or entrywise within `tol`.
    pub fn close_to(&self, other: &Vector, tol: f64) -> Result<bool> {
        self.check_dim(other, "vector comparison")?;
        match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => Ok(a == b),
            (Entries::Float(a), Entries::Float(b)) => {
                Ok(a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol))
            }
            (a, b) => Err(mismatch(a.backend(), b.backend())),
        }
    }

    pub fn try_eq(&self, other: &Vector) -> Result<bool> {
        self.close_to(other, 0.0)
    }

    /// Cross-backend agreement through f64 projection.
    pub fn agrees_within(&self, other: &Vector, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .as_f64()
                .iter()
                .zip(other.as_f64())
                .all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Rotate in the plane of coordinates `i < j`:
    /// `x_i' = cos t * x_i + sin t * x_j`, `x_j' = -sin t * x_i + cos t * x_j`.
    pub fn rotated(&self, plane: (usize, usize), angle: &Angle) -> Result<Vector> {
        let (i, j) = check_plane(plane, self.dim())?;
        match &self.entries {
            Entries::Exact(v) => {
                let (c, s) = angle.exact_cos_sin().ok_or_else(|| {
                    Error::NonRepresentableAngle(format!(
                        "{} rad is not a multiple of pi/4",
                        angle.radians()
                    ))
                })?;
                let mut out = v.clone();
                out[i] = &(&c * &v[i]) + &(&s * &v[j]);
                out[j] = &(&c * &v[j]) - &(&s * &v[i]);
                Ok(Vector::exact(out))
            }
            Entries::Float(v) => {
                let (c, s) = (angle.radians().cos(), angle.radians().sin());
                let mut out = v.clone();
                out[i] = c * v[i] + s * v[j];
                out[j] = -s * v[i] + c * v[j];
                Ok(Vector::float(out))
            }
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 0..self.dim() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.entry(i))?;
        }
        f.write_str(")")
    }
}

pub(crate) fn check_plane(plane: (usize, usize), dim: usize) -> Result<(usize, usize)> {
    let (i, j) = plane;
    if i >= j {
        return Err(Error::IndexOutOfRange {
            context: "rotation plane must have i < j",
            index: i,
            bound: j,
        });
    }
    if j >= dim {
        return Err(Error::IndexOutOfRange {
            context: "rotation plane",
            index: j,
            bound: dim,
        });
    }
    Ok((i, j))
}

/// A rotation angle. `QuarterPi(k)` is the exact angle `k * pi/4`, whose
/// cosine and sine lie in Q(sqrt 2); `Radians` is a float angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    QuarterPi(i64),
    Radians(f64),
}

impl Angle {
    pub fn radians(&self) -> f64 {
        match self {
            Angle::QuarterPi(k) => *k as f64 * FRAC_PI_4,
            Angle::Radians(t) => *t,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::QuarterPi(_))
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::QuarterPi(k) => Angle::QuarterPi(-k),
            Angle::Radians(t) => Angle::Radians(-t),
        }
    }

    /// Exact cosine and sine, defined only for multiples of pi/4.
    pub fn exact_cos_sin(&self) -> Option<(QuadScalar, QuadScalar)> {
        let k = match self {
            Angle::QuarterPi(k) => k.rem_euclid(8),
            Angle::Radians(_) => return None,
        };
        let zero = QuadScalar::zero;
        let one = || QuadScalar::one();
        let minus_one = || QuadScalar::from_integer(-1);
        let half_rt2 = || QuadScalar::sqrt2_times(1, 2);
        let neg_half_rt2 = || QuadScalar::sqrt2_times(-1, 2);
        Some(match k {
            0 => (one(), zero()),
            1 => (half_rt2(), half_rt2()),
            2 => (zero(), one()),
            3 => (neg_half_rt2(), half_rt2()),
            4 => (minus_one(), zero()),
            5 => (neg_half_rt2(), neg_half_rt2()),
            6 => (zero(), minus_one()),
            _ => (half_rt2(), neg_half_rt2()),
        })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::QuarterPi(k) => write!(f, "{}/8*pi", 2 * k),
            Angle::Radians(t) => write!(f, "{t:e}"),
        }
    }
}

/// A dense row-major matrix on one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl Matrix {
    pub fn exact(rows: usize, cols: usize, data: Vec<QuadScalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix {
            rows,
            cols,
            entries: Entries::Exact(data),
        }
    }

    pub fn float(rows: usize, cols: usize, data: Vec<f64>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix {
            rows,
            cols,
            entries: Entries::Float(data),
        }
    }

    pub fn zeros(backend: Backend, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: Entries::zeros(backend, rows * cols),
        }
    }

    pub fn identity(backend: Backend, n: usize) -> Matrix {
        let mut m = Matrix::zeros(backend, n, n);
        for i in 0..n {
            match &mut m.entries {
                Entries::Exact(e) => e[i * n + i] = QuadScalar::one(),
                Entries::Float(e) => e[i * n + i] = 1.0,
            }
        }
        m
    }

    /// Rotation by `angle` in the plane of coordinates `i < j`, acting as
    /// `x_i' = cos t x_i + sin t x_j`, `x_j' = -sin t x_i + cos t x_j`.
    pub fn rotation(
        backend: Backend,
        dim: usize,
        plane: (usize, usize),
        angle: &Angle,
    ) -> Result<Matrix> {
        let (i, j) = check_plane(plane, dim)?;
        match backend {
            Backend::Exact => {
                let (c, s) = angle.exact_cos_sin().ok_or_else(|| {
                    Error::NonRepresentableAngle(format!(
                        "{} rad is not a multiple of pi/4",
                        angle.radians()
                    ))
                })?;
                let mut m = Matrix::identity(Backend::Exact, dim);
                if let Entries::Exact(e) = &mut m.entries {
                    e[i * dim + i] = c.clone();
                    e[i * dim + j] = s.clone();
                    e[j * dim + i] = -&s;
                    e[j * dim + j] = c;
                }
                Ok(m)
            }
            Backend::Float => {
                let (c, s) = (angle.radians().cos(), angle.radians().sin());
                let mut m = Matrix::identity(Backend::Float, dim);
                if let Entries::Float(e) = &mut m.entries {
                    e[i * dim + i] = c;
                    e[i * dim + j] = s;
                    e[j * dim + i] = -s;
                    e[j * dim + j] = c;
                }
                Ok(m)
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backend(&self) -> Backend {
        self.entries.backend()
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index");
        self.entries.get(i * self.cols + j)
    }

    pub fn row(&self, i: usize) -> Vector {
        assert!(i < self.rows, "row index");
        let entries = match &self.entries {
            Entries::Exact(e) => Entries::Exact(e[i * self.cols..(i + 1) * self.cols].to_vec()),
            Entries::Float(e) => Entries::Float(e[i * self.cols..(i + 1) * self.cols].to_vec()),
        };
        Vector::from_entries(entries)
    }

    pub fn column(&self, j: usize) -> Vector {
        assert!(j < self.cols, "column index");
        let entries = match &self.entries {
            Entries::Exact(e) => Entries::Exact(
                (0..self.rows)
                    .map(|i| e[i * self.cols + j].clone())
                    .collect(),
            ),
            Entries::Float(e) => {
                Entries::Float((0..self.rows).map(|i| e[i * self.cols + j]).collect())
            }
        };
        Vector::from_entries(entries)
    }

    pub fn from_rows(rows: &[Vector]) -> Result<Matrix> {
        let first = rows.first().ok_or(Error::DimensionMismatch {
            context: "matrix needs at least one row",
            left: 0,
            right: 1,
        })?;
        let cols = first.dim();
        let backend = first.backend();
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix rows must share a length",
                    left: cols,
                    right: r.dim(),
                });
            }
            if r.backend() != backend {
                return Err(mismatch(backend, r.backend()));
            }
        }
        let entries = match backend {
            Backend::Exact => Entries::Exact(
                rows.iter()
                    .flat_map(|r| match &r.entries {
                        Entries::Exact(v) => v.clone(),
                        Entries::Float(_) => unreachable!(),
                    })
                    .collect(),
            ),
            Backend::Float => Entries::Float(
                rows.iter()
                    .flat_map(|r| match &r.entries {
                        Entries::Float(v) => v.clone(),
                        Entries::Exact(_) => unreachable!(),
                    })
                    .collect(),
            ),
        };
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_columns(columns: &[Vector]) -> Result<Matrix> {
        let rows = Matrix::from_rows(columns)?;
        Ok(rows.transpose())
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Exact(e) => {
                let mut data = Vec::with_capacity(r * c);
                for j in 0..c {
                    for i in 0..r {
                        data.push(e[i * c + j].clone());
                    }
                }
                Entries::Exact(data)
            }
            Entries::Float(e) => {
                let mut data = Vec::with_capacity(r * c);
                for j in 0..c {
                    for i in 0..r {
                        data.push(e[i * c + j]);
                    }
                }
                Entries::Float(data)
            }
        };
        Matrix {
            rows: c,
            cols: r,
            entries,
        }
    }

    fn check_same_shape(&self, other: &Matrix, context: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "matrix addition")?;
        let entries = zip_entries!(&self.entries, &other.entries, |a, b| a
            .iter()
            .zip(b)
            .map(|(x, y)| x.add(y))
            .collect())?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "matrix subtraction")?;
        let entries = zip_entries!(&self.entries, &other.entries, |a, b| a
            .iter()
            .zip(b)
            .map(|(x, y)| x.sub(y))
            .collect())?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: &Scalar) -> Result<Matrix> {
        let entries = match (&self.entries, factor) {
            (Entries::Exact(v), Scalar::Exact(f)) => {
                Entries::Exact(v.iter().map(|x| x * f).collect())
            }
            (Entries::Float(v), Scalar::Float(f)) => {
                Entries::Float(v.iter().map(|x| x * f).collect())
            }
            (e, f) => return Err(mismatch(e.backend(), f.backend())),
        };
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                left: self.cols,
                right: other.rows,
            });
        }
        fn mm<T: Num>(a: &[T], b: &[T], r: usize, k: usize, c: usize) -> Vec<T> {
            let mut out = vec![T::zero(); r * c];
            for i in 0..r {
                for l in 0..k {
                    let alk = &a[i * k + l];
                    if alk.is_zero() {
                        continue;
                    }
                    for j in 0..c {
                        out[i * c + j] = out[i * c + j].add(&alk.mul(&b[l * c + j]));
                    }
                }
            }
            out
        }
        let entries = zip_entries!(&self.entries, &other.entries, |a, b| mm(
            a, b, self.rows, self.cols, other.cols
        ))?;
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                left: self.cols,
                right: v.dim(),
            });
        }
        fn mv<T: Num>(a: &[T], x: &[T], r: usize, c: usize) -> Vec<T> {
            (0..r).map(|i| inner_g(&a[i * c..(i + 1) * c], x)).collect()
        }
        let entries = zip_entries!(&self.entries, &v.entries, |a, b| mv(
            a, b, self.rows, self.cols
        ))?;
        Ok(Vector::from_entries(entries))
    }

    /// `AB - BA` for square matrices of equal size.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        ab.sub(&ba)
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace of a square matrix");
        match &self.entries {
            Entries::Exact(e) => {
                let mut acc = QuadScalar::zero();
                for i in 0..self.rows {
                    acc = &acc + &e[i * self.cols + i];
                }
                Scalar::Exact(acc)
            }
            Entries::Float(e) => Scalar::Float((0..self.rows).map(|i| e[i * self.cols + i]).sum()),
        }
    }

    /// Squared Frobenius norm on the matrix's own backend.
    pub fn frobenius_norm_sq(&self) -> Scalar {
        match &self.entries {
            Entries::Exact(e) => Scalar::Exact(inner_g(e, e)),
            Entries::Float(e) => Scalar::Float(inner_g(e, e)),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().to_f64().max(0.0).sqrt()
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        match &self.entries {
            Entries::Exact(e) => e.iter().all(QuadScalar::is_zero),
            Entries::Float(_) => self.frobenius_norm() <= tol,
        }
    }

    pub fn close_to(&self, other: &Matrix, tol: f64) -> Result<bool> {
        self.check_same_shape(other, "matrix comparison")?;
        match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => Ok(a == b),
            (Entries::Float(a), Entries::Float(b)) => {
                Ok(a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol))
            }
            (a, b) => Err(mismatch(a.backend(), b.backend())),
        }
    }

    pub fn try_eq(&self, other: &Matrix) -> Result<bool> {
        self.close_to(other, 0.0)
    }

    pub fn agrees_within(&self, other: &Matrix, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .as_f64()
                .iter()
                .zip(other.entries.as_f64())
                .all(|(x, y)| (x - y).abs() <= tol)
    }

    pub fn to_float(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.to_float(),
        }
    }

    /// Eigenvalues of a symmetric float matrix, in descending order, via
    /// cyclic Jacobi rotations run until the off-diagonal Frobenius norm
    /// drops below 1e-12.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.backend() != Backend::Float {
            return Err(Error::FloatBackendRequired);
        }
        assert_eq!(self.rows, self.cols, "eigenvalues of a square matrix");
        let n = self.rows;
        let data = self.entries.as_f64();
        let max_abs = data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let sym_tol = 1e-9 * max_abs.max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (data[i * n + j] - data[j * n + i]).abs();
                if diff > sym_tol {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
        // Work on the symmetrized copy so harmless float asymmetry
        // cannot bias the iteration.
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = 0.5 * (data[i * n + j] + data[j * n + i]);
            }
        }
        jacobi_eigenvalues(n, &mut a)
    }

    /// Trace norm (sum of absolute eigenvalues) of a symmetric float matrix.
    pub fn trace_norm_sym(&self) -> Result<f64> {
        Ok(self
            .symmetric_eigenvalues()?
            .into_iter()
            .map(f64::abs)
            .sum())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

const JACOBI_OFF_TARGET: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(n: usize, a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j] * a[i * n + j];
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi iteration on a symmetric matrix, diagonal returned in
/// descending order.
fn jacobi_eigenvalues(n: usize, a: &mut [f64]) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(n, a) < JACOBI_OFF_TARGET {
            let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            diag.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
            return Ok(diag);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < JACOBI_OFF_TARGET / (n as f64 * n as f64) {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[p * n + i] = a[i * n + p];
                    a[i * n + q] = s * aip + c * aiq;
                    a[q * n + i] = a[i * n + q];
                }
            }
        }
    }
    Err(Error::NoConvergence(off_diagonal_norm(n, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadScalar as Q;
    use proptest::prelude::*;

    fn exact_vec(parts: &[(i64, i64, i64, i64)]) -> Vector {
        Vector::exact(
            parts
                .iter()
                .map(|&(an, ad, bn, bd)| &Q::rational(an, ad) + &Q::sqrt2_times(bn, bd))
                .collect(),
        )
    }

    #[test]
    fn inner_of_standard_basis_is_kronecker() {
        let e0 = Vector::standard_basis(Backend::Exact, 3, 0).unwrap();
        let e1 = Vector::standard_basis(Backend::Exact, 3, 1).unwrap();
        assert!(e0
            .inner(&e0)
            .unwrap()
            .try_eq(&Scalar::one(Backend::Exact))
            .unwrap());
        assert!(e0.inner(&e1).unwrap().is_zero());
    }

    #[test]
    fn dyad_trace_equals_norm_sq() {
        let v = exact_vec(&[(1, 2, 0, 1), (0, 1, 1, 2), (-1, 1, 0, 1)]);
        let d = v.dyad();
        assert!(d.trace().try_eq(&v.norm_sq()).unwrap());
    }

    #[test]
    fn rotation_quarter_pi_on_last_basis_vector() {
        // Plane (1,4) in 1-based labels: rotating (0,0,0,1) by pi/4 gives
        // (1/sqrt2, 0, 0, 1/sqrt2).
        let e = Vector::standard_basis(Backend::Exact, 4, 3).unwrap();
        let r = e.rotated((0, 3), &Angle::QuarterPi(1)).unwrap();
        let expected = exact_vec(&[(0, 1, 1, 2), (0, 1, 0, 1), (0, 1, 0, 1), (0, 1, 1, 2)]);
        assert!(r.try_eq(&expected).unwrap());
    }

    #[test]
    fn rotation_matrix_matches_vector_rotation() {
        let m = Matrix::rotation(Backend::Exact, 4, (0, 3), &Angle::QuarterPi(1)).unwrap();
        let e = Vector::standard_basis(Backend::Exact, 4, 3).unwrap();
        let via_matrix = m.mul_vec(&e).unwrap();
        let direct = e.rotated((0, 3), &Angle::QuarterPi(1)).unwrap();
        assert!(via_matrix.try_eq(&direct).unwrap());
    }

    #[test]
    fn exact_rotation_composes_to_identity() {
        let m = Matrix::rotation(Backend::Exact, 3, (0, 2), &Angle::QuarterPi(3)).unwrap();
        let minv = Matrix::rotation(Backend::Exact, 3, (0, 2), &Angle::QuarterPi(-3)).unwrap();
        let prod = m.mul(&minv).unwrap();
        assert!(prod.try_eq(&Matrix::identity(Backend::Exact, 3)).unwrap());
    }

    #[test]
    fn float_angle_on_exact_vector_is_an_error() {
        let e = Vector::standard_basis(Backend::Exact, 2, 0).unwrap();
        assert!(matches!(
            e.rotated((0, 1), &Angle::Radians(0.3)),
            Err(Error::NonRepresentableAngle(_))
        ));
    }

    #[test]
    fn exact_cos_sin_covers_all_residues() {
        for k in -8..=8i64 {
            let (c, s) = Angle::QuarterPi(k).exact_cos_sin().unwrap();
            let t = (k as f64) * FRAC_PI_4;
            assert!((c.to_f64() - t.cos()).abs() < 1e-15, "cos at k={k}");
            assert!((s.to_f64() - t.sin()).abs() < 1e-15, "sin at k={k}");
        }
    }

    #[test]
    fn commutator_of_commuting_dyads_is_zero() {
        let v = exact_vec(&[(1, 1, 0, 1), (0, 1, 0, 1)]);
        let c = v.dyad().commutator(&v.dyad()).unwrap();
        assert!(c.is_zero_within(0.0));
    }

    #[test]
    fn trace_norm_of_diag_one_minus_one() {
        let m = Matrix::float(2, 2, vec![1.0, 0.0, 0.0, -1.0]);
        assert!((m.trace_norm_sym().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_rejects_non_symmetric() {
        let m = Matrix::float(2, 2, vec![0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            m.trace_norm_sym(),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn trace_norm_requires_float_backend() {
        let m = Matrix::identity(Backend::Exact, 2);
        assert!(matches!(
            m.trace_norm_sym(),
            Err(Error::FloatBackendRequired)
        ));
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2, 2 +- sqrt(2).
        let m = Matrix::float(3, 3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let ev = m.symmetric_eigenvalues().unwrap();
        let expected = [
            2.0 + std::f64::consts::SQRT_2,
            2.0,
            2.0 - std::f64::consts::SQRT_2,
        ];
        for (got, want) in ev.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn mixing_backends_in_inner_product_fails() {
        let a = Vector::exact(vec![Q::one()]);
        let b = Vector::float(vec![1.0]);
        assert!(matches!(a.inner(&b), Err(Error::BackendMismatch(_, _))));
    }

    #[test]
    fn matrix_vector_shapes_are_checked() {
        let m = Matrix::identity(Backend::Float, 3);
        let v = Vector::float(vec![1.0, 2.0]);
        assert!(matches!(
            m.mul_vec(&v),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn arb_exact_vector(dim: usize) -> impl Strategy<Value = Vector> {
        proptest::collection::vec((-4i64..=4, 1i64..=4, -4i64..=4, 1i64..=4), dim).prop_map(
            |parts| {
                Vector::exact(
                    parts
                        .into_iter()
                        .map(|(an, ad, bn, bd)| &Q::rational(an, ad) + &Q::sqrt2_times(bn, bd))
                        .collect(),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn cauchy_schwarz_exact(u in arb_exact_vector(4), v in arb_exact_vector(4)) {
            let uv = match u.inner(&v).unwrap() { Scalar::Exact(q) => q, _ => unreachable!() };
            let uu = match u.norm_sq() { Scalar::Exact(q) => q, _ => unreachable!() };
            let vv = match v.norm_sq() { Scalar::Exact(q) => q, _ => unreachable!() };
            let lhs = &uv * &uv;
            let rhs = &uu * &vv;
            prop_assert!((&rhs - &lhs).signum() >= 0);
        }

        #[test]
        fn commutator_is_antisymmetric(u in arb_exact_vector(3), v in arb_exact_vector(3)) {
            let c1 = u.dyad().commutator(&v.dyad()).unwrap();
            let c2 = v.dyad().commutator(&u.dyad()).unwrap();
            let sum = c1.add(&c2).unwrap();
            prop_assert!(sum.is_zero_within(0.0));
        }

        #[test]
        fn float_rotation_is_orthogonal(theta in -3.2f64..3.2, dim in 2usize..6) {
            let m = Matrix::rotation(Backend::Float, dim, (0, dim - 1), &Angle::Radians(theta)).unwrap();
            let prod = m.transpose().mul(&m).unwrap();
            let defect = prod.sub(&Matrix::identity(Backend::Float, dim)).unwrap();
            prop_assert!(defect.frobenius_norm() < 1e-14);
        }

        #[test]
        fn jacobi_preserves_trace(entries in proptest::collection::vec(-2.0f64..2.0, 9)) {
            let mut data = entries;
            // Symmetrize.
            for i in 0..3 {
                for j in 0..3 {
                    let avg = 0.5 * (data[i * 3 + j] + data[j * 3 + i]);
                    data[i * 3 + j] = avg;
                    data[j * 3 + i] = avg;
                }
            }
            let m = Matrix::float(3, 3, data.clone());
            let ev = m.symmetric_eigenvalues().unwrap();
            let trace: f64 = (0..3).map(|i| data[i * 3 + i]).sum();
            prop_assert!((ev.iter().sum::<f64>() - trace).abs() < 1e-10);
        }
    }
}
