//! Plane-rotation circuits for orthogonal matrices.
//!
//! A circuit is an ordered list of two-coordinate rotations (the
//! real-orthogonal analogue of beam-splitter gates) followed by an
//! optional layer of per-coordinate sign flips. Every orthogonal matrix
//! decomposes into at most m(m-1)/2 such gates plus signs, by Givens
//! elimination below the diagonal. On the exact backend only angles that
//! are integer multiples of pi/4 exist; decomposition fails with
//! `NonRepresentableAngle` whenever an elimination would need anything
//! else, and callers may then retry in floating point.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{check_plane, Angle, Entries, Matrix, Vector};
use crate::scalar::{Backend, QuadScalar};

/// A rotation by `angle` in the plane of coordinates `plane.0 < plane.1`
/// (0-based):
///
/// ```text
/// x_i' =  cos(t) x_i + sin(t) x_j
/// x_j' = -sin(t) x_i + cos(t) x_j
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationGate {
    pub plane: (usize, usize),
    pub angle: Angle,
}

impl RotationGate {
    pub fn new(plane: (usize, usize), angle: Angle) -> RotationGate {
        RotationGate { plane, angle }
    }
}

impl fmt::Display for RotationGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Human-facing, hence 1-based coordinates.
        write!(
            f,
            "rotate({}, {}) by {}",
            self.plane.0 + 1,
            self.plane.1 + 1,
            self.angle
        )
    }
}

/// An interferometer: gates applied in list order, then an optional
/// final layer of coordinate sign flips.
#[derive(Clone, Debug)]
pub struct RotationCircuit {
    dim: usize,
    gates: Vec<RotationGate>,
    signs: Option<Vec<i8>>,
}

impl RotationCircuit {
    pub fn new(dim: usize, gates: Vec<RotationGate>, signs: Option<Vec<i8>>) -> Result<Self> {
        for g in &gates {
            check_plane(g.plane, dim)?;
        }
        if let Some(s) = &signs {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "sign layer length",
                    left: dim,
                    right: s.len(),
                });
            }
            if s.iter().any(|&x| x != 1 && x != -1) {
                return Err(Error::InvalidSplit(
                    "sign layer entries must be +1 or -1".into(),
                ));
            }
        }
        Ok(RotationCircuit { dim, gates, signs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gates(&self) -> &[RotationGate] {
        &self.gates
    }

    pub fn signs(&self) -> Option<&[i8]> {
        self.signs.as_deref()
    }

    /// True when every gate angle is an exact multiple of pi/4, so the
    /// circuit can act on exact vectors.
    pub fn is_exact(&self) -> bool {
        self.gates.iter().all(|g| g.angle.is_exact())
    }

    /// Run the circuit on a state: every gate in order, then the signs.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "circuit input dimension",
                left: self.dim,
                right: v.dim(),
            });
        }
        let mut out = v.clone();
        for g in &self.gates {
            out = out.rotated(g.plane, &g.angle)?;
        }
        if let Some(signs) = &self.signs {
            out = apply_signs(&out, signs);
        }
        Ok(out)
    }

    /// The circuit as a matrix on the requested backend (columns are the
    /// images of the standard basis).
    pub fn matrix(&self, backend: Backend) -> Result<Matrix> {
        let columns = (0..self.dim)
            .map(|t| {
                let e = Vector::standard_basis(backend, self.dim, t)?;
                self.apply(&e)
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&columns)
    }

    /// The inverse circuit, still in gates-then-signs form. The sign
    /// layer is kept in place; pulling it through a gate on plane (i, j)
    /// multiplies the angle by `s_i * s_j`, and inversion negates it:
    /// the inverse runs the gates reversed with angle `-t * s_i * s_j`.
    pub fn invert(&self) -> RotationCircuit {
        let sign_at = |c: usize| -> i64 {
            match &self.signs {
                Some(s) => s[c] as i64,
                None => 1,
            }
        };
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                let parity = sign_at(g.plane.0) * sign_at(g.plane.1);
                let angle = match g.angle {
                    Angle::QuarterPi(k) => Angle::QuarterPi(-k * parity),
                    Angle::Radians(r) => Angle::Radians(-r * parity as f64),
                };
                RotationGate::new(g.plane, angle)
            })
            .collect();
        RotationCircuit {
            dim: self.dim,
            gates,
            signs: self.signs.clone(),
        }
    }
}

impl fmt::Display for RotationCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit on {} coordinates:", self.dim)?;
        for (t, g) in self.gates.iter().enumerate() {
            writeln!(f, "  {:>3}. {}", t + 1, g)?;
        }
        if let Some(signs) = &self.signs {
            let rendered: Vec<String> = signs
                .iter()
                .map(|s| {
                    if *s >= 0 {
                        "+1".into()
                    } else {
                        "-1".to_string()
                    }
                })
                .collect();
            writeln!(f, "  signs: {}", rendered.join(" "))?;
        }
        Ok(())
    }
}

fn apply_signs(v: &Vector, signs: &[i8]) -> Vector {
    let entries = match &v.entries {
        Entries::Exact(xs) => Entries::Exact(
            xs.iter()
                .zip(signs)
                .map(|(x, s)| if *s < 0 { -x.clone() } else { x.clone() })
                .collect(),
        ),
        Entries::Float(xs) => Entries::Float(
            xs.iter()
                .zip(signs)
                .map(|(x, s)| if *s < 0 { -x } else { *x })
                .collect(),
        ),
    };
    Vector::from_entries(entries)
}

/// Decompose an orthogonal matrix into a rotation circuit, at most
/// m(m-1)/2 gates plus a sign layer.
///
/// Orthogonality is checked first (`|Q^T Q - I|_F` exactly zero on the
/// exact backend, at most `tol` on floats). Elimination walks columns
/// left to right, zeroing each below-diagonal entry with a rotation in
/// the plane of the pivot row; identity rotations are dropped. On the
/// exact backend an elimination is representable only when the pivot
/// pair points along a multiple of pi/4, i.e. one component vanishes or
/// both have equal magnitude.
pub fn decompose(q: &Matrix, tol: f64) -> Result<RotationCircuit> {
    if q.rows() != q.cols() {
        return Err(Error::DimensionMismatch {
            context: "decompose needs a square matrix",
            left: q.rows(),
            right: q.cols(),
        });
    }
    let m = q.rows();
    let gram = q.transpose().mul(q)?;
    let defect_matrix = gram.sub(&Matrix::identity(q.backend(), m))?;
    let defect = defect_matrix.frobenius_norm();
    let orthogonal = match q.backend() {
        Backend::Exact => defect_matrix.is_zero_within(0.0),
        Backend::Float => defect <= tol,
    };
    if !orthogonal {
        return Err(Error::NotOrthogonal { defect });
    }

    // Left-multiply rotations onto a working copy until it is the
    // diagonal sign layer: R_N ... R_1 Q = D, so Q = R_1^T ... R_N^T D.
    let mut work = q.clone();
    let mut eliminations: Vec<RotationGate> = Vec::new();
    for col in 0..m {
        for row in col + 1..m {
            let angle = match elimination_angle(&work, col, row)? {
                Some(a) => a,
                None => continue,
            };
            let rot = Matrix::rotation(q.backend(), m, (col, row), &angle)?;
            work = rot.mul(&work)?;
            eliminations.push(RotationGate::new((col, row), angle));
        }
    }

    let signs: Vec<i8> = (0..m)
        .map(|j| {
            if work.entry(j, j).to_f64() < 0.0 {
                -1
            } else {
                1
            }
        })
        .collect();
    let trivial_signs = signs.iter().all(|&s| s == 1);

    // Q = R_1^T ... R_N^T D. Pull D to the front: D R^T(t) D is the
    // rotation by -t * s_i * s_j on the same plane, so
    // Q = D H_1 ... H_N and the gate list (first applied last in the
    // product) is H_N, ..., H_1.
    let gates = eliminations
        .iter()
        .rev()
        .map(|g| {
            let parity = (signs[g.plane.0] * signs[g.plane.1]) as i64;
            let angle = match g.angle {
                Angle::QuarterPi(k) => Angle::QuarterPi(-k * parity),
                Angle::Radians(r) => Angle::Radians(-r * parity as f64),
            };
            RotationGate::new(g.plane, angle)
        })
        .collect();

    RotationCircuit::new(m, gates, if trivial_signs { None } else { Some(signs) })
}

/// Angle zeroing `work[row][col]` against pivot `work[col][col]`, or
/// `None` when the entry is already zero with a nonnegative pivot.
fn elimination_angle(work: &Matrix, col: usize, row: usize) -> Result<Option<Angle>> {
    match work.backend() {
        Backend::Float => {
            let below = work.entry(row, col).to_f64();
            let pivot = work.entry(col, col).to_f64();
            let theta = below.atan2(pivot);
            Ok(if theta == 0.0 {
                None
            } else {
                Some(Angle::Radians(theta))
            })
        }
        Backend::Exact => {
            let below = exact_entry(work, row, col);
            let pivot = exact_entry(work, col, col);
            exact_eighth_angle(&pivot, &below)
        }
    }
}

fn exact_entry(m: &Matrix, i: usize, j: usize) -> QuadScalar {
    match m.entry(i, j) {
        crate::scalar::Scalar::Exact(q) => q,
        crate::scalar::Scalar::Float(_) => unreachable!("backend checked"),
    }
}

/// The exact angle k*pi/4 whose direction matches (pivot, below), if one
/// exists: requires below = 0, pivot = 0, or |pivot| = |below| exactly.
fn exact_eighth_angle(pivot: &QuadScalar, below: &QuadScalar) -> Result<Option<Angle>> {
    let k = if below.is_zero() {
        if pivot.is_zero() {
            return Err(Error::CompletionFailed(
                "zero pivot column during decomposition",
            ));
        }
        if pivot.signum() > 0 {
            return Ok(None);
        }
        4
    } else if pivot.is_zero() {
        if below.signum() > 0 {
            2
        } else {
            -2
        }
    } else if pivot == below {
        if pivot.signum() > 0 {
            1
        } else {
            -3
        }
    } else if *pivot == -below.clone() {
        if below.signum() > 0 {
            3
        } else {
            -1
        }
    } else {
        return Err(Error::NonRepresentableAngle(format!(
            "direction ({pivot}, {below}) is not a multiple of pi/4"
        )));
    };
    Ok(Some(Angle::QuarterPi(k)))
}
