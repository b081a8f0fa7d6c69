//! Eutactic stars, coherent secret sharing, and plane-rotation circuits.
//!
//! A eutactic star is a family of vectors obtained by orthogonally
//! projecting an orthonormal basis of a larger space; equivalently, a
//! Parseval tight frame, whose dyads resolve the identity. This crate
//! builds such stars, certifies them, lifts them back to orthonormal
//! bases (Naimark dilation), runs a coherent secret-sharing protocol in
//! which codewords are cut along coordinate splits, quantifies what each
//! share leaks through pairwise Helstrom discrimination, and compiles
//! orthogonal encoders into sequences of two-terminal plane rotations.
//!
//! Two numeric backends are available everywhere: an exact backend over
//! the field Q(sqrt 2), in which every constant of the built-in reference
//! configuration is representable and checks carry zero tolerance, and a
//! float backend with explicit absolute tolerances (default 1e-10).
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --example exact_arithmetic    scalars of Q(sqrt 2)
//! cargo run --example build_a_star        projection, Parseval checks, dilation
//! cargo run --example share_a_secret      encode, split, recombine, decode
//! cargo run --example leakage_report      pairwise Helstrom analysis per share
//! cargo run --example compile_circuit     plane-rotation decomposition
//! ```
//!
//! The same functionality is scriptable through the thin `eutactic`
//! binary (`verify-paper`, `star`, `share`, `compile`, `simulate`).

pub mod builtin;
pub mod error;
pub mod format;
pub mod frames;
pub mod interferometer;
pub mod linalg;
pub mod sample;
pub mod scalar;
pub mod sharing;
pub mod verify;

pub use error::{Error, Result};
pub use frames::{
    naimark_dilate, project_basis, resolution_of_identity, CoordinateProjector, EutacticStar,
    OrthonormalBasis, ParsevalReport,
};
pub use interferometer::{decompose, RotationCircuit, RotationGate};
pub use linalg::{Angle, Matrix, Vector};
pub use sample::{random_circuit, random_codebook, random_orthogonal, random_split};
pub use sample::{simulate, SimulateConfig, SimulateReport};
pub use scalar::{Backend, QuadScalar, Scalar, DEFAULT_TOL};
pub use sharing::{
    analyze_leakage, decode, noncommeasurability_check, recombine, split, Codebook,
    CommutatorWitness, LeakageFlag, LeakageReport, NoncommeasurabilityReport, PairProbability,
    PartyLeakage, Share, ShareSplit,
};
pub use verify::{verify_reference, VerifyCheck, VerifyReport};
