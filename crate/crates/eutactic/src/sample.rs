//! Seeded random generators for orthogonal matrices, codebooks,
//! coordinate splits, and rotation circuits.
//!
//! Everything here takes the RNG as an argument, so callers control the
//! seed and the results are reproducible byte for byte.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::CoordinateProjector;
use crate::interferometer::{RotationCircuit, RotationGate};
use crate::linalg::{Angle, Matrix, Vector};
use crate::scalar::Backend;
use crate::sharing::{self, Codebook, ShareSplit};

/// A Gram-Schmidt residual below this norm means the draw was (nearly)
/// degenerate and is thrown away.
const RESAMPLE_TOL: f64 = 1e-8;

/// A random orthogonal matrix on the float backend: columns drawn with
/// uniform entries in [-1, 1), orthonormalized by Gram-Schmidt, and each
/// signed so that its first entry of magnitude above 1e-8 is positive.
/// Degenerate draws (vanishing residuals) are resampled.
pub fn random_orthogonal(rng: &mut impl Rng, dim: usize) -> Matrix {
    loop {
        if let Some(m) = try_orthogonal(rng, dim) {
            return m;
        }
    }
}

fn try_orthogonal(rng: &mut impl Rng, dim: usize) -> Option<Matrix> {
    let mut columns: Vec<Vector> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // Orthogonalize twice: a single sweep can lose up to eight digits
        // of orthogonality to cancellation when the draw is nearly
        // dependent on the earlier columns.
        for _ in 0..2 {
            for c in &columns {
                let c = c.as_f64();
                let overlap: f64 = v.iter().zip(&c).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(&c) {
                    *vi -= overlap * ci;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < RESAMPLE_TOL {
            return None;
        }
        let flip = match v.iter().find(|x| x.abs() > RESAMPLE_TOL) {
            Some(lead) if *lead < 0.0 => -1.0,
            _ => 1.0,
        };
        columns.push(Vector::float(v.iter().map(|x| flip * x / norm).collect()));
    }
    Some(Matrix::from_columns(&columns).expect("columns share the dimension"))
}

/// A random codebook of `messages` orthonormal vectors in R^dim: the
/// leading columns of a random orthogonal matrix.
pub fn random_codebook(rng: &mut impl Rng, dim: usize, messages: usize) -> Result<Codebook> {
    if messages < 2 || messages > dim {
        return Err(Error::InvalidCodebookSize {
            count: messages,
            dim,
        });
    }
    let q = random_orthogonal(rng, dim);
    let vectors = (0..messages).map(|j| q.column(j)).collect();
    Codebook::new(vectors, 1e-12)
}

/// A random partition of the `dim` coordinates into `parties` nonempty
/// blocks: after dealing one shuffled coordinate to each party, the rest
/// are assigned uniformly.
pub fn random_split(rng: &mut impl Rng, dim: usize, parties: usize) -> Result<ShareSplit> {
    if parties == 0 || parties > dim {
        return Err(Error::InvalidSplit(format!(
            "cannot split {dim} coordinates among {parties} parties"
        )));
    }
    let mut coords: Vec<usize> = (0..dim).collect();
    coords.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); parties];
    for (i, c) in coords.into_iter().enumerate() {
        let p = if i < parties {
            i
        } else {
            rng.gen_range(0..parties)
        };
        blocks[p].push(c);
    }
    let parts = blocks
        .into_iter()
        .map(|kept| CoordinateProjector::new(dim, kept))
        .collect::<Result<Vec<_>>>()?;
    ShareSplit::new(dim, parts)
}

/// A random rotation circuit of `gates` gates. On the exact backend the
/// angles are random multiples of pi/4; on the float backend they are
/// uniform in (-pi, pi). With `with_signs` a random sign layer is added.
pub fn random_circuit(
    rng: &mut impl Rng,
    backend: Backend,
    dim: usize,
    gates: usize,
    with_signs: bool,
) -> Result<RotationCircuit> {
    if dim < 2 && gates > 0 {
        return Err(Error::DimensionMismatch {
            context: "a circuit with gates needs at least two coordinates",
            left: 2,
            right: dim,
        });
    }
    let gates = (0..gates)
        .map(|_| {
            let i = rng.gen_range(0..dim - 1);
            let j = rng.gen_range(i + 1..dim);
            let angle = match backend {
                Backend::Exact => Angle::QuarterPi(rng.gen_range(-3..=4)),
                Backend::Float => {
                    Angle::Radians(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                }
            };
            RotationGate::new((i, j), angle)
        })
        .collect();
    let signs = if with_signs {
        Some(
            (0..dim)
                .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect(),
        )
    } else {
        None
    };
    RotationCircuit::new(dim, gates, signs)
}

/// Decoding tolerance for simulated round trips; generous next to float
/// rounding but far below any genuine ambiguity.
const SIMULATE_DECODE_TOL: f64 = 1e-9;

/// Configuration of a Monte-Carlo run over random codebooks and splits.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SimulateConfig {
    pub dim: usize,
    /// How many coordinates the first party keeps; the complement (if
    /// any) goes to a second party.
    pub keep: usize,
    pub messages: usize,
    pub trials: u64,
    pub seed: u64,
}

/// Leakage statistics for one party, aggregated across all trials.
#[derive(Clone, Debug, Serialize)]
pub struct PartyStats {
    pub party: usize,
    pub min_probability: f64,
    pub mean_probability: f64,
    pub max_probability: f64,
    pub deterministic_trials: u64,
    pub partial_trials: u64,
    pub no_leak_trials: u64,
}

/// Outcome of [`simulate`]: round-trip failures (expected zero) and
/// per-party leakage aggregates.
#[derive(Clone, Debug, Serialize)]
pub struct SimulateReport {
    pub dim: usize,
    pub keep: usize,
    pub messages: usize,
    pub trials: u64,
    pub seed: u64,
    pub round_trips: u64,
    pub failures: u64,
    pub parties: Vec<PartyStats>,
}

struct StatsAcc {
    min: f64,
    max: f64,
    sum: f64,
    count: u64,
    deterministic: u64,
    partial: u64,
    no_leak: u64,
}

impl StatsAcc {
    fn new() -> Self {
        StatsAcc {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            sum: 0.0,
            count: 0,
            deterministic: 0,
            partial: 0,
            no_leak: 0,
        }
    }
}

/// Run `trials` independent experiments. Each trial draws a random
/// codebook of `messages` orthonormal vectors in R^dim and a random
/// kept-coordinate set of size `keep`, splits every codeword, recombines
/// the shares, decodes each recovered state, and analyzes the leakage of
/// both parties (one party when `keep == dim`).
///
/// Trial `t` uses a ChaCha8 generator seeded with `seed` on stream `t`,
/// so reports are byte-identical across runs and machines and do not
/// depend on any execution order.
pub fn simulate(config: &SimulateConfig) -> Result<SimulateReport> {
    if config.dim < 2 {
        return Err(Error::Simulation("dimension must be at least 2"));
    }
    if config.keep == 0 || config.keep > config.dim {
        return Err(Error::Simulation(
            "kept coordinates must number between 1 and the dimension",
        ));
    }
    if config.messages < 2 || config.messages > config.dim {
        return Err(Error::Simulation(
            "messages must number between 2 and the dimension",
        ));
    }
    if config.trials == 0 {
        return Err(Error::Simulation("at least one trial is required"));
    }

    let parties = if config.keep == config.dim { 1 } else { 2 };
    let mut stats: Vec<StatsAcc> = (0..parties).map(|_| StatsAcc::new()).collect();
    let mut round_trips = 0u64;
    let mut failures = 0u64;

    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial);

        let book = random_codebook(&mut rng, config.dim, config.messages)?;
        let mut coords: Vec<usize> = (0..config.dim).collect();
        coords.shuffle(&mut rng);
        let kept: Vec<usize> = coords.into_iter().take(config.keep).collect();
        let plan = ShareSplit::two_party(CoordinateProjector::new(config.dim, kept)?)?;

        let shares = sharing::split(&book, &plan)?;
        let recovered = sharing::recombine(&shares)?;
        for (message, state) in recovered.iter().enumerate() {
            round_trips += 1;
            match sharing::decode(state, &book, SIMULATE_DECODE_TOL) {
                Ok(decoded) if decoded == message => {}
                _ => failures += 1,
            }
        }

        let leak = sharing::analyze_leakage(&book, &plan, None)?;
        debug_assert_eq!(leak.parties.len(), parties);
        for (acc, party) in stats.iter_mut().zip(&leak.parties) {
            for p in &party.pairwise {
                acc.min = acc.min.min(p.probability);
                acc.max = acc.max.max(p.probability);
                acc.sum += p.probability;
                acc.count += 1;
            }
            for (flag, slot) in [
                (sharing::LeakageFlag::Deterministic, &mut acc.deterministic),
                (sharing::LeakageFlag::Partial, &mut acc.partial),
                (sharing::LeakageFlag::NoLeak, &mut acc.no_leak),
            ] {
                if party.flags.contains(&flag) {
                    *slot += 1;
                }
            }
        }
    }

    let parties = stats
        .into_iter()
        .enumerate()
        .map(|(party, acc)| PartyStats {
            party,
            min_probability: acc.min,
            mean_probability: acc.sum / acc.count as f64,
            max_probability: acc.max,
            deterministic_trials: acc.deterministic,
            partial_trials: acc.partial,
            no_leak_trials: acc.no_leak,
        })
        .collect();

    Ok(SimulateReport {
        dim: config.dim,
        keep: config.keep,
        messages: config.messages,
        trials: config.trials,
        seed: config.seed,
        round_trips,
        failures,
        parties,
    })
}
