//! Compile orthogonal matrices into two-terminal plane rotations and
//! run the built-in encoder circuit: four eighth-turn rotations that
//! turn basis states into codewords.
//!
//! Run with `cargo run --example compile_circuit`.

use eutactic::{
    builtin, decompose, Angle, Backend, Error, RotationCircuit, RotationGate, Vector, DEFAULT_TOL,
};

fn main() -> eutactic::Result<()> {
    // The encoder: pi/4 rotations on planes (1,3), (1,4), (1,2), (1,3),
    // applied in that order.
    let encoder = builtin::encoder_circuit();
    println!("encoder circuit:");
    for gate in encoder.gates() {
        println!(
            "  rotate plane ({}, {}) by {}",
            gate.plane.0 + 1,
            gate.plane.1 + 1,
            gate.angle
        );
    }

    // It sends the fourth basis vector to codeword 0 and the first to
    // codeword 1 -- exactly, since pi/4 rotations stay inside Q(sqrt 2).
    let book = builtin::bit_codebook();
    let e4 = Vector::standard_basis(Backend::Exact, 4, 3)?;
    let e1 = Vector::standard_basis(Backend::Exact, 4, 0)?;
    let c0 = encoder.apply(&e4)?;
    let c1 = encoder.apply(&e1)?;
    assert!(c0.try_eq(&book.codewords()[0])?);
    assert!(c1.try_eq(&book.codewords()[1])?);
    println!("\nencoder(e4) = {c0}");
    println!("encoder(e1) = {c1}");

    // Running the inverse circuit undoes the encoding exactly.
    let decoder = encoder.invert();
    assert!(decoder.apply(&c0)?.try_eq(&e4)?);
    assert!(decoder.apply(&c1)?.try_eq(&e1)?);
    println!("decoder(codeword 0) = e4, decoder(codeword 1) = e1");

    // Compiling the encoder *matrix* back into rotations is a different
    // problem: the triangular elimination scheme needs angles that are
    // not eighth turns, so the exact compiler refuses...
    let matrix = builtin::encoder_matrix();
    match decompose(&matrix, DEFAULT_TOL) {
        Err(Error::NonRepresentableAngle(msg)) => {
            println!("\nexact compilation declines: {msg}");
        }
        other => panic!("expected a non-representable angle, got {other:?}"),
    }

    // ...and the float compiler takes over, reconstructing the matrix
    // to machine precision with at most n(n-1)/2 gates.
    let compiled = decompose(&matrix.to_float(), DEFAULT_TOL)?;
    let residual = compiled
        .matrix(Backend::Float)?
        .sub(&matrix.to_float())?
        .frobenius_norm();
    println!(
        "float compilation: {} gates, reconstruction residual {residual:.3e}",
        compiled.gates().len()
    );
    assert!(residual < 1e-12);

    // Matrices generated by eighth-turn rotations and sign flips do
    // compile exactly. Signs come out as a separate final layer.
    let circuit = RotationCircuit::new(
        3,
        vec![
            RotationGate::new((0, 1), Angle::QuarterPi(1)),
            RotationGate::new((1, 2), Angle::QuarterPi(-2)),
        ],
        Some(vec![1, -1, 1]),
    )?;
    let m = circuit.matrix(Backend::Exact)?;
    let recompiled = decompose(&m, DEFAULT_TOL)?;
    println!("\nan exactly compilable matrix in R^3:");
    for gate in recompiled.gates() {
        println!(
            "  rotate plane ({}, {}) by {}",
            gate.plane.0 + 1,
            gate.plane.1 + 1,
            gate.angle
        );
    }
    if let Some(signs) = recompiled.signs() {
        println!("  then flip signs {signs:?}");
    }
    assert!(recompiled.matrix(Backend::Exact)?.try_eq(&m)?);
    println!("reconstruction is exact: recompiled matrix equals the input");
    Ok(())
}
