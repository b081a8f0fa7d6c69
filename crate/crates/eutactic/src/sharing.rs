//! Coherent secret sharing over coordinate splits.
//!
//! A message is encoded as one codeword of an orthonormal codebook in
//! R^m. Each party receives the codeword's restriction to its own block
//! of coordinates (a fragment). All fragments together recombine to the
//! codeword by plain vector addition; any incomplete collection leaves
//! the message undetermined, and `analyze_leakage` quantifies exactly how
//! undetermined through pairwise Helstrom discrimination of the padded
//! conditional states each party holds.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::CoordinateProjector;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{rational_from_f64, Backend, Scalar};

/// Tolerance within which a pairwise probability counts as 1 or 1/2 when
/// classifying leakage.
pub const LEAKAGE_FLAG_TOL: f64 = 1e-9;

/// An orthonormal codebook: k pairwise-orthogonal unit vectors in R^m,
/// one per message, with 2 <= k <= m.
#[derive(Clone, Debug)]
pub struct Codebook {
    vectors: Vec<Vector>,
}

impl Codebook {
    /// Validates unit norms and orthogonality (exactly on the exact
    /// backend, within `tol` on floats); reports the offending pair and
    /// its inner product otherwise.
    pub fn new(vectors: Vec<Vector>, tol: f64) -> Result<Self> {
        let k = vectors.len();
        let first = vectors
            .first()
            .ok_or(Error::InvalidCodebookSize { count: 0, dim: 0 })?;
        let dim = first.dim();
        let backend = first.backend();
        if k < 2 || k > dim {
            return Err(Error::InvalidCodebookSize { count: k, dim });
        }
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "codeword dimension",
                    left: dim,
                    right: v.dim(),
                });
            }
            if v.backend() != backend {
                return Err(Error::BackendMismatch(backend.name(), v.backend().name()));
            }
        }
        for i in 0..k {
            for j in i..k {
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
        Ok(Codebook { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    /// Number of messages.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a codebook always holds at least two codewords
    }

    pub fn backend(&self) -> Backend {
        self.vectors[0].backend()
    }

    pub fn codewords(&self) -> &[Vector] {
        &self.vectors
    }

    /// The codeword carrying message `message`.
    pub fn encode(&self, message: usize) -> Result<Vector> {
        self.vectors
            .get(message)
            .cloned()
            .ok_or(Error::IndexOutOfRange {
                context: "message",
                index: message,
                bound: self.len(),
            })
    }

    pub fn to_float(&self) -> Codebook {
        Codebook {
            vectors: self.vectors.iter().map(Vector::to_float).collect(),
        }
    }
}

/// A partition of the m coordinates into disjoint covering blocks, one
/// per party.
#[derive(Clone, Debug)]
pub struct ShareSplit {
    dim: usize,
    parts: Vec<CoordinateProjector>,
}

impl ShareSplit {
    pub fn new(dim: usize, parts: Vec<CoordinateProjector>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSplit(
                "a split needs at least one part".into(),
            ));
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for (idx, p) in parts.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "split part dimension",
                    left: dim,
                    right: p.dim(),
                });
            }
            for c in p.kept() {
                if !seen.insert(c) {
                    return Err(Error::InvalidSplit(format!(
                        "coordinate {} appears in more than one part (part {})",
                        c + 1,
                        idx + 1
                    )));
                }
            }
        }
        let missing: Vec<usize> = (0..dim).filter(|c| !seen.contains(c)).collect();
        if !missing.is_empty() {
            return Err(Error::InvalidSplit(format!(
                "coordinates {:?} belong to no part",
                missing.iter().map(|c| c + 1).collect::<Vec<_>>()
            )));
        }
        Ok(ShareSplit { dim, parts })
    }

    /// Two-party split from one projector and its complement; a full
    /// projector yields a single-party split.
    pub fn two_party(projector: CoordinateProjector) -> Result<Self> {
        let dim = projector.dim();
        let parts = match projector.complement() {
            Some(rest) => vec![projector, rest],
            None => vec![projector],
        };
        ShareSplit::new(dim, parts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[CoordinateProjector] {
        &self.parts
    }
}

/// One party's view: its projector and the fragment of every codeword.
#[derive(Clone, Debug)]
pub struct Share {
    party: usize,
    projector: CoordinateProjector,
    fragments: Vec<Vector>,
}

impl Share {
    /// Fragments must live in the projector's coordinates: every entry
    /// outside the kept set has to be exactly zero.
    pub fn new(
        party: usize,
        projector: CoordinateProjector,
        fragments: Vec<Vector>,
    ) -> Result<Self> {
        for (idx, f) in fragments.iter().enumerate() {
            if f.dim() != projector.dim() {
                return Err(Error::DimensionMismatch {
                    context: "fragment dimension",
                    left: projector.dim(),
                    right: f.dim(),
                });
            }
            for c in 0..f.dim() {
                if !projector.keeps(c) && !f.entry(c).is_zero() {
                    return Err(Error::FragmentOutsideProjector {
                        fragment: idx,
                        coord: c,
                    });
                }
            }
        }
        Ok(Share {
            party,
            projector,
            fragments,
        })
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn projector(&self) -> &CoordinateProjector {
        &self.projector
    }

    pub fn fragments(&self) -> &[Vector] {
        &self.fragments
    }

    pub fn dim(&self) -> usize {
        self.projector.dim()
    }

    pub fn to_float(&self) -> Share {
        Share {
            party: self.party,
            projector: self.projector.clone(),
            fragments: self.fragments.iter().map(Vector::to_float).collect(),
        }
    }
}

/// Cut every codeword along the split: share `p` holds
/// `projector_p(codeword_mu)` for every message `mu`.
pub fn split(book: &Codebook, split: &ShareSplit) -> Result<Vec<Share>> {
    if book.dim() != split.dim() {
        return Err(Error::DimensionMismatch {
            context: "codebook vs split dimension",
            left: book.dim(),
            right: split.dim(),
        });
    }
    split
        .parts()
        .iter()
        .enumerate()
        .map(|(party, projector)| {
            let fragments = book
                .codewords()
                .iter()
                .map(|c| projector.apply(c))
                .collect::<Result<Vec<_>>>()?;
            Share::new(party, projector.clone(), fragments)
        })
        .collect()
}

/// Coherently recombine shares by adding fragments message by message.
/// All parties must be present: the projectors have to be disjoint and
/// cover every coordinate.
pub fn recombine(shares: &[Share]) -> Result<Vec<Vector>> {
    let first = shares
        .first()
        .ok_or(Error::IncompleteShares { missing: vec![] })?;
    let dim = first.dim();
    let k = first.fragments().len();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    for share in shares {
        if share.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "share dimension",
                left: dim,
                right: share.dim(),
            });
        }
        if share.fragments().len() != k {
            return Err(Error::DimensionMismatch {
                context: "shares disagree on the message count",
                left: k,
                right: share.fragments().len(),
            });
        }
        for c in share.projector().kept() {
            if !covered.insert(c) {
                return Err(Error::InvalidSplit(format!(
                    "coordinate {} is held by two shares",
                    c + 1
                )));
            }
        }
    }
    let missing: Vec<usize> = (0..dim).filter(|c| !covered.contains(c)).collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteShares { missing });
    }
    (0..k)
        .map(|mu| {
            let mut acc = shares[0].fragments()[mu].clone();
            for share in &shares[1..] {
                acc = acc.add(&share.fragments()[mu])?;
            }
            Ok(acc)
        })
        .collect()
}

/// Decode a state against a codebook: the message whose codeword overlap
/// dominates. The winner must carry essentially all of the state's norm
/// (`overlap^2 >= (1 - tol) * |state|^2`) while every runner-up stays
/// below sqrt(tol); anything else is an ambiguity error. On the exact
/// backend with `tol = 0` these are exact identities.
pub fn decode(state: &Vector, book: &Codebook, tol: f64) -> Result<usize> {
    if state.dim() != book.dim() {
        return Err(Error::DimensionMismatch {
            context: "state vs codebook dimension",
            left: state.dim(),
            right: book.dim(),
        });
    }
    match state.backend() {
        Backend::Exact => {
            let sq = |s: &Scalar| match s {
                Scalar::Exact(q) => q * q,
                Scalar::Float(_) => unreachable!("backend checked"),
            };
            let ns = sq_norm_exact(state)?;
            if ns.is_zero() {
                return Err(Error::ZeroState);
            }
            let overlaps: Vec<crate::scalar::QuadScalar> = book
                .codewords()
                .iter()
                .map(|c| state.inner(c).map(|s| sq(&s)))
                .collect::<Result<Vec<_>>>()?;
            let best = (0..overlaps.len())
                .max_by(|&a, &b| overlaps[a].cmp(&overlaps[b]))
                .expect("codebook is nonempty");
            let runner = (0..overlaps.len())
                .filter(|&i| i != best)
                .max_by(|&a, &b| overlaps[a].cmp(&overlaps[b]))
                .expect("at least two codewords");
            let one_minus_tol = crate::scalar::QuadScalar::new(
                rational_from_f64(1.0 - tol),
                rational_from_f64(0.0),
            );
            let tol_exact =
                crate::scalar::QuadScalar::new(rational_from_f64(tol), rational_from_f64(0.0));
            let dominant = (&overlaps[best] - &(&one_minus_tol * &ns)).signum() >= 0;
            let clean = (&tol_exact - &overlaps[runner]).signum() >= 0;
            if dominant && clean {
                Ok(best)
            } else {
                Err(Error::AmbiguousState {
                    best: overlaps[best].to_f64(),
                    runner: overlaps[runner].to_f64(),
                })
            }
        }
        Backend::Float => {
            let ns = state.norm_sq().to_f64();
            if ns <= tol * tol {
                return Err(Error::ZeroState);
            }
            let overlaps: Vec<f64> = book
                .codewords()
                .iter()
                .map(|c| state.inner(c).map(|s| s.to_f64().powi(2)))
                .collect::<Result<Vec<_>>>()?;
            let best = (0..overlaps.len())
                .max_by(|&a, &b| overlaps[a].total_cmp(&overlaps[b]))
                .expect("codebook is nonempty");
            let runner = (0..overlaps.len())
                .filter(|&i| i != best)
                .max_by(|&a, &b| overlaps[a].total_cmp(&overlaps[b]))
                .expect("at least two codewords");
            if overlaps[best] >= (1.0 - tol) * ns && overlaps[runner] <= tol {
                Ok(best)
            } else {
                Err(Error::AmbiguousState {
                    best: overlaps[best],
                    runner: overlaps[runner],
                })
            }
        }
    }
}

fn sq_norm_exact(v: &Vector) -> Result<crate::scalar::QuadScalar> {
    match v.norm_sq() {
        Scalar::Exact(q) => Ok(q),
        Scalar::Float(_) => Err(Error::FloatBackendRequired),
    }
}

/// Witness for noncommeasurability: the first fragment pair whose dyads
/// fail to commute, along with the commutator itself.
#[derive(Clone, Debug)]
pub struct CommutatorWitness {
    pub pair: (usize, usize),
    pub commutator: Matrix,
}

/// Outcome of `noncommeasurability_check`.
#[derive(Clone, Debug)]
pub struct NoncommeasurabilityReport {
    pub noncommeasurable: bool,
    pub witness: Option<CommutatorWitness>,
}

/// A share's fragments are comeasurable exactly when all their dyads
/// commute. Returns the first non-commuting pair as a witness. Requires
/// at least two nonzero fragments; zero fragments commute with everything
/// and are skipped.
pub fn noncommeasurability_check(share: &Share, tol: f64) -> Result<NoncommeasurabilityReport> {
    let nonzero: Vec<usize> = (0..share.fragments().len())
        .filter(|&i| !share.fragments()[i].is_zero_within(tol))
        .collect();
    if nonzero.len() < 2 {
        return Err(Error::TooFewFragments(nonzero.len()));
    }
    for (a, &mu) in nonzero.iter().enumerate() {
        for &nu in &nonzero[a + 1..] {
            let c = share.fragments()[mu]
                .dyad()
                .commutator(&share.fragments()[nu].dyad())?;
            let nonzero_comm = match c.backend() {
                Backend::Exact => !c.is_zero_within(0.0),
                Backend::Float => c.frobenius_norm() > tol,
            };
            if nonzero_comm {
                return Ok(NoncommeasurabilityReport {
                    noncommeasurable: true,
                    witness: Some(CommutatorWitness {
                        pair: (mu, nu),
                        commutator: c,
                    }),
                });
            }
        }
    }
    Ok(NoncommeasurabilityReport {
        noncommeasurable: false,
        witness: None,
    })
}

/// Classification of one party's discrimination power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LeakageFlag {
    /// Some message pair is distinguished with certainty.
    Deterministic,
    /// No message pair does better than guessing.
    NoLeak,
    /// Some pair lies strictly between guessing and certainty.
    Partial,
}

impl fmt::Display for LeakageFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeakageFlag::Deterministic => "DETERMINISTIC",
            LeakageFlag::NoLeak => "NO_LEAK",
            LeakageFlag::Partial => "PARTIAL",
        })
    }
}

/// Helstrom success probability for one message pair at one party.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairProbability {
    /// Message indices, 0-based, first < second.
    pub pair: (usize, usize),
    pub probability: f64,
}

/// Everything one party leaks: pairwise probabilities (upper triangle in
/// lexicographic order), the fragment Gram matrix, and flags.
#[derive(Clone, Debug, Serialize)]
pub struct PartyLeakage {
    pub party: usize,
    pub pairwise: Vec<PairProbability>,
    pub gram: Vec<Vec<f64>>,
    pub flags: BTreeSet<LeakageFlag>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeakageReport {
    pub dim: usize,
    pub messages: usize,
    pub parties: Vec<PartyLeakage>,
}

/// What each party can learn about the message from its fragment alone.
///
/// A party holding fragment `f_mu` of message `mu` effectively holds the
/// (m+1)-dimensional conditional density `dyad(f_mu) (+) (1 - |f_mu|^2)`:
/// the fragment dyad padded with a vacuum weight carrying the missing
/// norm. For messages `mu != nu` with renormalized priors `q_mu, q_nu`,
/// the optimal (Helstrom) success probability of telling them apart is
/// `1/2 + 1/2 * trace_norm(q_mu rho_mu - q_nu rho_nu)`.
///
/// Exact inputs are converted to floats internally: trace norms need
/// eigenvalues, which live outside Q(sqrt 2).
pub fn analyze_leakage(
    book: &Codebook,
    parts: &ShareSplit,
    priors: Option<&[f64]>,
) -> Result<LeakageReport> {
    let k = book.len();
    let priors = match priors {
        Some(p) => {
            if p.len() != k {
                return Err(Error::InvalidPriors(format!(
                    "{} priors for {} messages",
                    p.len(),
                    k
                )));
            }
            if p.iter().any(|&x| !(x >= 0.0)) {
                return Err(Error::InvalidPriors("priors must be nonnegative".into()));
            }
            let total: f64 = p.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidPriors(format!("priors sum to {total}")));
            }
            p.to_vec()
        }
        None => vec![1.0 / k as f64; k],
    };
    let shares = split(&book.to_float(), parts)?;
    let m = book.dim();
    let parties = shares
        .iter()
        .map(|share| analyze_party(share, m, k, &priors))
        .collect::<Result<Vec<_>>>()?;
    Ok(LeakageReport {
        dim: m,
        messages: k,
        parties,
    })
}

fn analyze_party(share: &Share, m: usize, k: usize, priors: &[f64]) -> Result<PartyLeakage> {
    let fragments: Vec<Vec<f64>> = share.fragments().iter().map(Vector::as_f64).collect();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    fragments[i]
                        .iter()
                        .zip(&fragments[j])
                        .map(|(x, y)| x * y)
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut pairwise = Vec::with_capacity(k * (k - 1) / 2);
    for mu in 0..k {
        for nu in mu + 1..k {
            let probability = pair_probability(
                &fragments[mu],
                gram[mu][mu],
                priors[mu],
                &fragments[nu],
                gram[nu][nu],
                priors[nu],
                m,
            )?;
            pairwise.push(PairProbability {
                pair: (mu, nu),
                probability,
            });
        }
    }
    let mut flags = BTreeSet::new();
    let probs = pairwise.iter().map(|p| p.probability);
    if probs.clone().any(|p| p >= 1.0 - LEAKAGE_FLAG_TOL) {
        flags.insert(LeakageFlag::Deterministic);
    }
    if probs.clone().all(|p| p <= 0.5 + LEAKAGE_FLAG_TOL) {
        flags.insert(LeakageFlag::NoLeak);
    }
    if probs
        .clone()
        .any(|p| p > 0.5 + LEAKAGE_FLAG_TOL && p < 1.0 - LEAKAGE_FLAG_TOL)
    {
        flags.insert(LeakageFlag::Partial);
    }
    Ok(PartyLeakage {
        party: share.party(),
        pairwise,
        gram,
        flags,
    })
}

#[allow(clippy::too_many_arguments)]
fn pair_probability(
    f_mu: &[f64],
    norm_mu: f64,
    prior_mu: f64,
    f_nu: &[f64],
    norm_nu: f64,
    prior_nu: f64,
    m: usize,
) -> Result<f64> {
    let total = prior_mu + prior_nu;
    if total <= 0.0 {
        // The pair never occurs; discrimination is vacuous.
        return Ok(0.5);
    }
    let (q_mu, q_nu) = (prior_mu / total, prior_nu / total);
    let vac_mu = (1.0 - norm_mu).max(0.0);
    let vac_nu = (1.0 - norm_nu).max(0.0);
    // Weighted difference of the two padded conditional densities.
    let n = m + 1;
    let mut d = vec![0.0; n * n];
    for i in 0..m {
        for j in 0..m {
            d[i * n + j] = q_mu * f_mu[i] * f_mu[j] - q_nu * f_nu[i] * f_nu[j];
        }
    }
    d[m * n + m] = q_mu * vac_mu - q_nu * vac_nu;
    let diff = Matrix::float(n, n, d);
    let p = 0.5 + 0.5 * diff.trace_norm_sym()?;
    Ok(p.clamp(0.5, 1.0))
}
