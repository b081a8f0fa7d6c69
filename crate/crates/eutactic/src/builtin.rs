//! The built-in reference configuration.
//!
//! Everything here is written out literally, digit by digit, in Q(sqrt 2)
//! so the rest of the crate can be checked against fixed ground truth
//! rather than against its own output.
//!
//! The configuration lives in R^4 and is built from four *fragments*
//! named w, x, y, z:
//!
//! ```text
//! w = (0,        0,      -sqrt2/4,  sqrt2/2)
//! x = (0,        0,      -3/4,     -1/2    )
//! y = (sqrt2/4, -1/2,     0,        0      )
//! z = (-1/4,    -sqrt2/4, 0,        0      )
//! ```
//!
//! The two-message (bit) codebook encodes 0 as `w + y` and 1 as `x + z`;
//! both sums are unit vectors and orthogonal. Splitting along the
//! two-party coordinate split {1,2} | {3,4} hands party 1 the fragments
//! {y, z} and party 2 the fragments {w, x}. Neither pair commutes as
//! dyads, and neither pair is orthogonal, so no party can measure its
//! fragments without disturbing them — yet together the parties restore
//! the codewords by plain addition.
//!
//! Two further codewords extend the bit codebook to an orthonormal basis
//! of R^4, the four-message (quadrit) codebook. Restricting that basis to
//! either coordinate pair produces a eutactic star of four plane vectors
//! resolving the identity of R^2. The same basis is the matrix of the
//! built-in encoder circuit: four pi/4 rotations that map the last
//! standard basis vector to `w + y` and the first to `x + z`.

use crate::frames::{CoordinateProjector, EutacticStar, OrthonormalBasis};
use crate::interferometer::{RotationCircuit, RotationGate};
use crate::linalg::{Angle, Matrix, Vector};
use crate::scalar::{Backend, QuadScalar};
use crate::sharing::{Codebook, Share, ShareSplit};

const VALID: &str = "built-in reference data is valid by construction";

/// Rational shorthand.
fn q(num: i64, den: i64) -> QuadScalar {
    QuadScalar::rational(num, den)
}

/// sqrt(2)-multiple shorthand.
fn s2(num: i64, den: i64) -> QuadScalar {
    QuadScalar::sqrt2_times(num, den)
}

/// Fragment w = (0, 0, -sqrt2/4, sqrt2/2), held by party 2 for message 0.
pub fn fragment_w() -> Vector {
    Vector::exact(vec![q(0, 1), q(0, 1), s2(-1, 4), s2(1, 2)])
}

/// Fragment x = (0, 0, -3/4, -1/2), held by party 2 for message 1.
pub fn fragment_x() -> Vector {
    Vector::exact(vec![q(0, 1), q(0, 1), q(-3, 4), q(-1, 2)])
}

/// Fragment y = (sqrt2/4, -1/2, 0, 0), held by party 1 for message 0.
pub fn fragment_y() -> Vector {
    Vector::exact(vec![s2(1, 4), q(-1, 2), q(0, 1), q(0, 1)])
}

/// Fragment z = (-1/4, -sqrt2/4, 0, 0), held by party 1 for message 1.
pub fn fragment_z() -> Vector {
    Vector::exact(vec![q(-1, 4), s2(-1, 4), q(0, 1), q(0, 1)])
}

/// Codeword for message 0: w + y, written out literally.
fn codeword_zero() -> Vector {
    Vector::exact(vec![s2(1, 4), q(-1, 2), s2(-1, 4), s2(1, 2)])
}

/// Codeword for message 1: x + z, written out literally.
fn codeword_one() -> Vector {
    Vector::exact(vec![q(-1, 4), s2(-1, 4), q(-3, 4), q(-1, 2)])
}

/// Third quadrit codeword, orthogonal to both bit codewords.
fn codeword_two() -> Vector {
    Vector::exact(vec![q(1, 2), s2(1, 2), q(-1, 2), q(0, 1)])
}

/// Fourth quadrit codeword, completing the orthonormal basis.
fn codeword_three() -> Vector {
    Vector::exact(vec![q(3, 4), s2(-1, 4), q(1, 4), q(-1, 2)])
}

/// The two-message codebook {w + y, x + z}.
pub fn bit_codebook() -> Codebook {
    Codebook::new(vec![codeword_zero(), codeword_one()], 0.0).expect(VALID)
}

/// The four-message codebook: the bit codewords extended to an
/// orthonormal basis of R^4.
pub fn quadrit_codebook() -> Codebook {
    Codebook::new(
        vec![
            codeword_zero(),
            codeword_one(),
            codeword_two(),
            codeword_three(),
        ],
        0.0,
    )
    .expect(VALID)
}

/// The quadrit codewords as an orthonormal basis of R^4.
pub fn quadrit_basis() -> OrthonormalBasis {
    OrthonormalBasis::new(
        vec![
            codeword_zero(),
            codeword_one(),
            codeword_two(),
            codeword_three(),
        ],
        0.0,
    )
    .expect(VALID)
}

/// The two-party coordinate split: party 1 holds coordinates 1 and 2,
/// party 2 holds coordinates 3 and 4.
pub fn two_party_split() -> ShareSplit {
    ShareSplit::new(
        4,
        vec![
            CoordinateProjector::new(4, [0, 1]).expect(VALID),
            CoordinateProjector::new(4, [2, 3]).expect(VALID),
        ],
    )
    .expect(VALID)
}

/// The two parties' shares of the bit codebook, with the fragments
/// written out literally rather than computed by splitting, so that
/// recombination can be checked without circularity: party 1 holds
/// {y, z}, party 2 holds {w, x}.
pub fn reference_shares() -> Vec<Share> {
    vec![
        Share::new(
            0,
            CoordinateProjector::new(4, [0, 1]).expect(VALID),
            vec![fragment_y(), fragment_z()],
        )
        .expect(VALID),
        Share::new(
            1,
            CoordinateProjector::new(4, [2, 3]).expect(VALID),
            vec![fragment_w(), fragment_x()],
        )
        .expect(VALID),
    ]
}

/// The rank-one projectors onto the two bit codewords, entry by entry.
/// These are independent renderings of dyad(w + y) and dyad(x + z); the
/// test suite checks the dyads reproduce them exactly.
pub fn codeword_projectors() -> (Matrix, Matrix) {
    let onto_zero = Matrix::exact(
        4,
        4,
        vec![
            q(1, 8),
            s2(-1, 8),
            q(-1, 8),
            q(1, 4),
            s2(-1, 8),
            q(1, 4),
            s2(1, 8),
            s2(-1, 4),
            q(-1, 8),
            s2(1, 8),
            q(1, 8),
            q(-1, 4),
            q(1, 4),
            s2(-1, 4),
            q(-1, 4),
            q(1, 2),
        ],
    );
    let onto_one = Matrix::exact(
        4,
        4,
        vec![
            q(1, 16),
            s2(1, 16),
            q(3, 16),
            q(1, 8),
            s2(1, 16),
            q(1, 8),
            s2(3, 16),
            s2(1, 8),
            q(3, 16),
            s2(3, 16),
            q(9, 16),
            q(3, 8),
            q(1, 8),
            s2(1, 8),
            q(3, 8),
            q(1, 4),
        ],
    );
    (onto_zero, onto_one)
}

/// The encoder: four pi/4 rotations that send the fourth standard basis
/// vector to `w + y` and the first to `x + z`.
pub fn encoder_circuit() -> RotationCircuit {
    RotationCircuit::new(
        4,
        vec![
            RotationGate::new((0, 2), Angle::QuarterPi(1)),
            RotationGate::new((0, 3), Angle::QuarterPi(1)),
            RotationGate::new((0, 1), Angle::QuarterPi(1)),
            RotationGate::new((0, 2), Angle::QuarterPi(1)),
        ],
        None,
    )
    .expect(VALID)
}

/// The encoder as a matrix: columns are the images of the standard
/// basis, i.e. the quadrit codewords in the order
/// (x + z, third, fourth, w + y).
pub fn encoder_matrix() -> Matrix {
    Matrix::from_columns(&[
        codeword_one(),
        codeword_two(),
        codeword_three(),
        codeword_zero(),
    ])
    .expect(VALID)
}

/// The eutactic star obtained by restricting the quadrit basis to
/// coordinates 1 and 2: four plane vectors resolving the identity.
pub fn quadrit_star_12() -> EutacticStar {
    project_quadrit([0, 1])
}

/// The companion star on coordinates 3 and 4.
pub fn quadrit_star_34() -> EutacticStar {
    project_quadrit([2, 3])
}

fn project_quadrit(coords: [usize; 2]) -> EutacticStar {
    let projector = CoordinateProjector::new(4, coords).expect(VALID);
    crate::frames::project_basis(&quadrit_basis(), &projector).expect(VALID)
}

/// Party 1's fragments {y, z} restricted to their own plane. Two vectors
/// in R^2; *not* a Parseval frame (its resolution is
/// [[3/16, -sqrt2/16], [-sqrt2/16, 3/8]]).
pub fn party1_substar() -> EutacticStar {
    EutacticStar::new(
        Backend::Exact,
        2,
        vec![
            Vector::exact(vec![s2(1, 4), q(-1, 2)]),
            Vector::exact(vec![q(-1, 4), s2(-1, 4)]),
        ],
    )
    .expect(VALID)
}

/// Party 2's fragments {w, x} restricted to their own plane. Two vectors
/// in R^2; *not* a Parseval frame (its resolution is
/// [[11/16, 1/8], [1/8, 3/4]]).
pub fn party2_substar() -> EutacticStar {
    EutacticStar::new(
        Backend::Exact,
        2,
        vec![
            Vector::exact(vec![s2(-1, 4), s2(1, 2)]),
            Vector::exact(vec![q(-3, 4), q(-1, 2)]),
        ],
    )
    .expect(VALID)
}

/// The worst-case codebook: three messages encoded as the reversed
/// standard basis of R^3. Every codeword is an axis, so every fragment
/// is either a full codeword or nothing.
pub fn worst_case_codebook() -> Codebook {
    Codebook::new(
        vec![
            Vector::exact(vec![q(0, 1), q(0, 1), q(1, 1)]),
            Vector::exact(vec![q(0, 1), q(1, 1), q(0, 1)]),
            Vector::exact(vec![q(1, 1), q(0, 1), q(0, 1)]),
        ],
        0.0,
    )
    .expect(VALID)
}

/// The split under which the worst-case codebook leaks everything:
/// party 1 holds coordinate 3 alone, party 2 holds coordinates 1 and 2.
pub fn worst_case_split() -> ShareSplit {
    ShareSplit::new(
        3,
        vec![
            CoordinateProjector::new(3, [2]).expect(VALID),
            CoordinateProjector::new(3, [0, 1]).expect(VALID),
        ],
    )
    .expect(VALID)
}
