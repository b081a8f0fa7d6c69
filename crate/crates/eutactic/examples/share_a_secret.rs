//! Coherent secret sharing end to end: pick a codebook, cut every
//! codeword along a coordinate split, hand the pieces to two parties,
//! then recombine by plain vector addition and decode.
//!
//! Run with `cargo run --example share_a_secret`.

use eutactic::{builtin, decode, noncommeasurability_check, recombine, split, DEFAULT_TOL};

fn main() -> eutactic::Result<()> {
    // Two orthonormal codewords in R^4 with exact Q(sqrt 2) entries:
    // message 0 and message 1 of a one-bit secret.
    let book = builtin::bit_codebook();
    println!("codebook ({} messages in R^{}):", book.len(), book.dim());
    for (mu, c) in book.codewords().iter().enumerate() {
        println!("  message {mu}: {c}");
    }

    // The split assigns coordinates 1,2 to party 1 and 3,4 to party 2.
    // Splitting zeroes the other party's coordinates: each share holds
    // one fragment per message.
    let plan = builtin::two_party_split();
    let shares = split(&book, &plan)?;
    println!("\nshares:");
    for share in &shares {
        println!(
            "  party {} keeps coordinates {:?}",
            share.party() + 1,
            share.projector().kept().map(|c| c + 1).collect::<Vec<_>>()
        );
        for (mu, f) in share.fragments().iter().enumerate() {
            println!("    fragment of message {mu}: {f}");
        }
    }

    // No single party can measure its way to the secret: its fragments'
    // dyads do not commute, so there is no shared eigenbasis to read
    // them off in. The witness is the first non-commuting pair.
    println!("\nnoncommeasurability:");
    for share in &shares {
        let report = noncommeasurability_check(share, 0.0)?;
        let witness = report.witness.as_ref().expect("skew fragments");
        println!(
            "  party {}: noncommeasurable = {} (witness pair {:?}, commutator norm {:.4})",
            share.party() + 1,
            report.noncommeasurable,
            (witness.pair.0, witness.pair.1),
            witness.commutator.frobenius_norm()
        );
        assert!(report.noncommeasurable);
    }

    // Both parties together recover every codeword by addition alone --
    // no measurement, no basis change, exactly zero error.
    let recovered = recombine(&shares)?;
    println!("\nrecombination:");
    for (mu, state) in recovered.iter().enumerate() {
        let decoded = decode(state, &book, DEFAULT_TOL)?;
        println!("  recombined state {mu} decodes to message {decoded}");
        assert_eq!(decoded, mu);
        assert!(state.try_eq(&book.codewords()[mu])?);
    }

    // One share alone is not a share set: recombination refuses, naming
    // the uncovered coordinates instead of returning a wrong answer.
    let err = recombine(&shares[..1]).unwrap_err();
    println!("\nparty 1 alone: {err}");
    Ok(())
}
