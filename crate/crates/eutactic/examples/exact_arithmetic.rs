//! A tour of the exact backend: numbers of the form a + b*sqrt(2) with
//! rational a and b, closed under +, -, *, /, with decidable signs,
//! exact comparisons, and in-field square roots where they exist.
//!
//! Run with `cargo run --example exact_arithmetic`.

use eutactic::{Backend, QuadScalar, Scalar};

fn main() {
    // Constructors: rationals, integer multiples of sqrt 2, and both.
    let half = QuadScalar::rational(1, 2);
    let root2 = QuadScalar::sqrt2();
    let mixed = QuadScalar::rational(3, 4) + QuadScalar::sqrt2_times(-1, 8);
    println!("half        = {half}");
    println!("sqrt 2      = {root2}");
    println!("mixed       = {mixed}");

    // The defining identity: sqrt(2) squared is exactly 2.
    let two = &root2 * &root2;
    println!("sqrt2^2     = {two}");
    assert_eq!(two, QuadScalar::from_integer(2));

    // Inversion works through the field conjugate a - b*sqrt2:
    // (1 + sqrt2)(sqrt2 - 1) = 1, so inv(1 + sqrt2) = -1 + sqrt2.
    let silver = QuadScalar::from_integer(1) + QuadScalar::sqrt2();
    let inv = silver.inv().expect("nonzero");
    println!("1/(1+sqrt2) = {inv}");
    assert_eq!(&silver * &inv, QuadScalar::one());

    // Signs and ordering are decided exactly, never through floats:
    // 3/2 > sqrt 2 because (3/2)^2 = 9/4 > 2.
    let three_halves = QuadScalar::rational(3, 2);
    assert!(three_halves > root2);
    assert_eq!((three_halves.clone() - root2.clone()).signum(), 1);
    println!("3/2 - sqrt2 has sign {}", (three_halves - root2).signum());

    // Square roots inside the field: (1 + sqrt2/2)^2 = 3/2 + sqrt2, so
    // 3/2 + sqrt2 has an exact square root; 3 does not (sqrt 3 is not
    // in the field), and try_sqrt reports that honestly.
    let square = QuadScalar::rational(3, 2) + QuadScalar::sqrt2();
    let root = square.try_sqrt().expect("perfect square in the field");
    println!("sqrt(3/2 + 1*s2) = {root}");
    assert_eq!(&root * &root, square);
    assert!(QuadScalar::from_integer(3).try_sqrt().is_none());
    println!("sqrt(3) stays outside the field -> try_sqrt is None");

    // Round trip through the text form used by all file formats.
    let token = "-5/8 + 7/3*s2";
    let parsed: QuadScalar = token.parse().expect("valid token");
    println!("parse `{token}` -> display `{parsed}`");
    assert_eq!(parsed.to_string().parse::<QuadScalar>().unwrap(), parsed);

    // The Scalar wrapper carries the backend; exact and float values
    // refuse to mix silently instead of corrupting a computation.
    let exact = Scalar::Exact(QuadScalar::rational(1, 3));
    let float = Scalar::Float(1.0 / 3.0);
    assert!(exact.add(&float).is_err());
    println!("exact + float -> {}", exact.add(&float).unwrap_err());

    // For honest cross-backend comparisons there is an explicit bridge.
    assert!(exact.agrees_within(&float, 1e-12));
    println!(
        "but |{exact} - {float}| <= 1e-12 via agrees_within on backend {}",
        Backend::Float
    );
}
