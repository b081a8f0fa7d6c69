//! End-to-end verification of the built-in reference configuration.
//!
//! Seven checks cover the whole chain: fragment recombination, quadrit
//! orthonormality, codeword projectors, share noncommeasurability,
//! Parseval status of the projected stars (and its failure for the
//! two-vector sub-stars), the encoder circuit with its inverse, and the
//! worst-case deterministic leakage. On the exact backend every identity
//! is tested with zero tolerance; on the float backend the same
//! computations are accepted within an absolute tolerance.
//!
//! Alongside the pass/fail verdicts the report collects every numeric
//! result by name, so the two backends can be compared against each
//! other programmatically.

use std::fmt::Write as _;

use serde::Serialize;

use crate::builtin;
use crate::error::Result;
use crate::frames::EutacticStar;
use crate::interferometer::RotationCircuit;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Backend, QuadScalar, Scalar};
use crate::sharing::{
    analyze_leakage, noncommeasurability_check, recombine, Codebook, LeakageFlag, Share,
};

/// One verdict line of the verification report.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

/// The full report: verdicts in fixed order plus every numeric result
/// by stable name.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub backend: String,
    pub tolerance: f64,
    pub checks: Vec<VerifyCheck>,
    pub numerics: Vec<(String, f64)>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn numeric(&self, name: &str) -> Option<f64> {
        self.numerics
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    /// Plain-text rendering with stable ordering and formatting.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "reference verification (backend {}, tolerance {:e})",
            self.backend, self.tolerance
        );
        for (i, c) in self.checks.iter().enumerate() {
            let _ = writeln!(
                out,
                "check {} {:<28} {} {}",
                i + 1,
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.details
            );
        }
        out.push_str("numerics\n");
        for (name, value) in &self.numerics {
            let _ = writeln!(out, "  {name} {value:.12}");
        }
        if self.all_passed() {
            let _ = writeln!(out, "all {} checks passed", self.checks.len());
        } else {
            let first = self
                .checks
                .iter()
                .find(|c| !c.passed)
                .expect("some check failed");
            let _ = writeln!(out, "FAILED: first failing check is `{}`", first.name);
        }
        out
    }
}

struct Ctx {
    backend: Backend,
    tol: f64,
    checks: Vec<VerifyCheck>,
    numerics: Vec<(String, f64)>,
}

impl Ctx {
    fn record(&mut self, name: &'static str, passed: bool, details: String) {
        self.checks.push(VerifyCheck {
            name,
            passed,
            details,
        });
    }

    fn numeric(&mut self, name: impl Into<String>, value: f64) {
        self.numerics.push((name.into(), value));
    }

    /// Pass criterion for a residual: exactly zero on the exact backend,
    /// within tolerance on floats. `exactly_zero` is the exact-arithmetic
    /// verdict and is ignored on the float backend.
    fn residual_ok(&self, exactly_zero: bool, residual: f64) -> bool {
        match self.backend {
            Backend::Exact => exactly_zero,
            Backend::Float => residual.abs() <= self.tol,
        }
    }
}

fn on_backend(v: Vector, backend: Backend) -> Vector {
    match backend {
        Backend::Exact => v,
        Backend::Float => v.to_float(),
    }
}

fn on_backend_m(m: Matrix, backend: Backend) -> Matrix {
    match backend {
        Backend::Exact => m,
        Backend::Float => m.to_float(),
    }
}

fn on_backend_star(s: EutacticStar, backend: Backend) -> EutacticStar {
    match backend {
        Backend::Exact => s,
        Backend::Float => s.to_float(),
    }
}

fn on_backend_book(b: Codebook, backend: Backend) -> Codebook {
    match backend {
        Backend::Exact => b,
        Backend::Float => b.to_float(),
    }
}

fn diff_norm(a: &Vector, b: &Vector) -> Result<f64> {
    Ok(a.sub(b)?.norm_f64())
}

/// Run the verification suite. `corrupt` is a test hook that perturbs
/// one built-in fragment by 1/1000 before checking, so the failure path
/// (first FAIL line, nonzero exit) can itself be exercised.
pub fn verify_reference(backend: Backend, tolerance: f64, corrupt: bool) -> Result<VerifyReport> {
    let mut ctx = Ctx {
        backend,
        tol: tolerance,
        checks: Vec::new(),
        numerics: Vec::new(),
    };

    let mut w = builtin::fragment_w();
    if corrupt {
        let bump = Vector::standard_basis(Backend::Exact, 4, 2)?
            .scale(&Scalar::Exact(QuadScalar::rational(1, 1000)))?;
        w = w.add(&bump)?;
    }
    let w = on_backend(w, backend);
    let x = on_backend(builtin::fragment_x(), backend);
    let y = on_backend(builtin::fragment_y(), backend);
    let z = on_backend(builtin::fragment_z(), backend);
    let book = on_backend_book(builtin::bit_codebook(), backend);
    let split = builtin::two_party_split();

    let shares = vec![
        Share::new(0, split.parts()[0].clone(), vec![y.clone(), z.clone()])?,
        Share::new(1, split.parts()[1].clone(), vec![w.clone(), x.clone()])?,
    ];

    check_recombination(&mut ctx, &shares, &book)?;
    check_quadrit_orthonormality(&mut ctx)?;
    check_codeword_projectors(&mut ctx, &book)?;
    check_commutators(&mut ctx, &shares)?;
    check_parseval(&mut ctx)?;
    check_encoder(&mut ctx, &book)?;
    check_worst_case(&mut ctx)?;

    // Key protocol numbers beyond the pass/fail set: what each party of
    // the two-party split can learn about the encoded bit.
    let leak = analyze_leakage(&book, &split, None)?;
    for party in &leak.parties {
        ctx.numeric(
            format!("bit-leakage-party{}", party.party + 1),
            party.pairwise[0].probability,
        );
    }

    Ok(VerifyReport {
        backend: backend.name().to_string(),
        tolerance,
        checks: ctx.checks,
        numerics: ctx.numerics,
    })
}

/// Check 1: fragments recombine to the codewords by plain addition.
fn check_recombination(ctx: &mut Ctx, shares: &[Share], book: &Codebook) -> Result<()> {
    let recovered = recombine(shares)?;
    let mut exact_ok = true;
    let mut residual = 0.0f64;
    for (r, c) in recovered.iter().zip(book.codewords()) {
        exact_ok &= r.try_eq(c)?;
        residual = residual.max(diff_norm(r, c)?);
    }
    let passed = ctx.residual_ok(exact_ok, residual);
    ctx.numeric("recombination-residual", residual);
    ctx.record("recombination", passed, format!("residual {residual:.3e}"));
    Ok(())
}

/// Check 2: the four quadrit codewords are orthonormal.
fn check_quadrit_orthonormality(ctx: &mut Ctx) -> Result<()> {
    let book = on_backend_book(builtin::quadrit_codebook(), ctx.backend);
    let m = Matrix::from_columns(book.codewords())?;
    let gram = m.transpose().mul(&m)?;
    let defect = gram.sub(&Matrix::identity(ctx.backend, 4))?;
    let residual = defect.frobenius_norm();
    let passed = ctx.residual_ok(defect.is_zero_within(0.0), residual);
    ctx.numeric("quadrit-gram-residual", residual);
    ctx.record(
        "quadrit-orthonormality",
        passed,
        format!("residual {residual:.3e}"),
    );
    Ok(())
}

/// Check 3: the codeword dyads equal the stated projector matrices.
fn check_codeword_projectors(ctx: &mut Ctx, book: &Codebook) -> Result<()> {
    let (p0, p1) = builtin::codeword_projectors();
    let expected = [on_backend_m(p0, ctx.backend), on_backend_m(p1, ctx.backend)];
    let mut exact_ok = true;
    let mut residual = 0.0f64;
    for (c, e) in book.codewords().iter().zip(&expected) {
        let diff = c.dyad().sub(e)?;
        exact_ok &= diff.is_zero_within(0.0);
        residual = residual.max(diff.frobenius_norm());
    }
    let passed = ctx.residual_ok(exact_ok, residual);
    ctx.numeric("codeword-projector-residual", residual);
    ctx.record(
        "codeword-projectors",
        passed,
        format!("residual {residual:.3e}"),
    );
    Ok(())
}

/// Check 4: neither party's fragments are comeasurable.
fn check_commutators(ctx: &mut Ctx, shares: &[Share]) -> Result<()> {
    let mut passed = true;
    let mut norms = Vec::new();
    for share in shares {
        let report = noncommeasurability_check(
            share,
            if ctx.backend == Backend::Exact {
                0.0
            } else {
                ctx.tol
            },
        )?;
        passed &= report.noncommeasurable;
        let norm = report
            .witness
            .map(|w| w.commutator.frobenius_norm())
            .unwrap_or(0.0);
        ctx.numeric(format!("commutator-norm-party{}", share.party() + 1), norm);
        norms.push(format!("{norm:.3e}"));
    }
    ctx.record(
        "share-commutators",
        passed,
        format!("norms {}", norms.join(" ")),
    );
    Ok(())
}

/// Check 5: the two projected quadrit stars are Parseval; the two
/// fragment sub-stars are not.
fn check_parseval(ctx: &mut Ctx) -> Result<()> {
    let stars = [
        (
            "star-12",
            on_backend_star(builtin::quadrit_star_12(), ctx.backend),
            true,
        ),
        (
            "star-34",
            on_backend_star(builtin::quadrit_star_34(), ctx.backend),
            true,
        ),
        (
            "substar-yz",
            on_backend_star(builtin::party1_substar(), ctx.backend),
            false,
        ),
        (
            "substar-wx",
            on_backend_star(builtin::party2_substar(), ctx.backend),
            false,
        ),
    ];
    let mut passed = true;
    let mut details = Vec::new();
    for (name, star, want_parseval) in stars {
        let defect = star.eutacticity_defect();
        let is_parseval = match ctx.backend {
            Backend::Exact => star.is_parseval(0.0),
            Backend::Float => star.is_parseval(ctx.tol),
        };
        passed &= is_parseval == want_parseval;
        ctx.numeric(format!("{name}-defect"), defect);
        details.push(format!("{name} {defect:.3e}"));
    }
    ctx.record("projected-stars-parseval", passed, details.join(" "));
    Ok(())
}

/// Check 6: the encoder maps the two designated basis states to the
/// codewords, and its inverse really inverts it.
fn check_encoder(ctx: &mut Ctx, book: &Codebook) -> Result<()> {
    let circuit = builtin::encoder_circuit();
    let apply = |circuit: &RotationCircuit, index: usize| -> Result<Vector> {
        let e = Vector::standard_basis(ctx.backend, 4, index)?;
        circuit.apply(&e)
    };
    // The built-in labeling: the fourth input carries message 0, the
    // first input carries message 1.
    let got0 = apply(&circuit, 3)?;
    let got1 = apply(&circuit, 0)?;
    let mut exact_ok = got0.try_eq(&book.codewords()[0])?;
    exact_ok &= got1.try_eq(&book.codewords()[1])?;
    let map_residual =
        diff_norm(&got0, &book.codewords()[0])?.max(diff_norm(&got1, &book.codewords()[1])?);

    let inverse_product = circuit
        .invert()
        .matrix(ctx.backend)?
        .mul(&circuit.matrix(ctx.backend)?)?;
    let identity_defect = inverse_product.sub(&Matrix::identity(ctx.backend, 4))?;
    let inverse_residual = identity_defect.frobenius_norm();
    exact_ok &= identity_defect.is_zero_within(0.0);

    let passed = ctx.residual_ok(exact_ok, map_residual.max(inverse_residual));
    ctx.numeric("encoder-map-residual", map_residual);
    ctx.numeric("encoder-inverse-residual", inverse_residual);
    ctx.record(
        "encoder-circuit",
        passed,
        format!("map {map_residual:.3e} inverse {inverse_residual:.3e}"),
    );
    Ok(())
}

/// Check 7: under the worst-case split every pair involving a fully
/// held or fully absent codeword is discriminated with certainty, and
/// both parties carry the DETERMINISTIC flag.
fn check_worst_case(ctx: &mut Ctx) -> Result<()> {
    let book = on_backend_book(builtin::worst_case_codebook(), ctx.backend);
    let report = analyze_leakage(&book, &builtin::worst_case_split(), None)?;
    let mut passed = true;
    for party in &report.parties {
        passed &= party.flags.contains(&LeakageFlag::Deterministic);
        for p in &party.pairwise {
            // Party 1 holds codeword 0 outright and nothing of the other
            // two; only its (1, 2) pair is a coin flip.
            let expected = if party.party == 0 && p.pair == (1, 2) {
                0.5
            } else {
                1.0
            };
            passed &= (p.probability - expected).abs() <= 1e-9;
            ctx.numeric(
                format!(
                    "worst-party{}-pair-{}-{}",
                    party.party + 1,
                    p.pair.0 + 1,
                    p.pair.1 + 1
                ),
                p.probability,
            );
        }
    }
    ctx.record(
        "worst-case-discrimination",
        passed,
        "deterministic flags on both parties".to_string(),
    );
    Ok(())
}
