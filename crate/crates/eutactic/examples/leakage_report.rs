//! What does a single share reveal about the secret? Each party's
//! fragments, padded with a vacuum component for the amplitude their
//! projector discards, are states it can try to tell apart. The report
//! scores every pair of messages by the optimal (Helstrom) success
//! probability of that discrimination: 1/2 means the share is blind,
//! 1 means the pair leaks deterministically.
//!
//! Run with `cargo run --example leakage_report`.

use eutactic::format::render_leakage;
use eutactic::{analyze_leakage, builtin, LeakageFlag};

fn main() -> eutactic::Result<()> {
    // The reference one-bit codebook under the two-party split.
    let book = builtin::bit_codebook();
    let plan = builtin::two_party_split();
    let report = analyze_leakage(&book, &plan, None)?;
    print!("{}", render_leakage(&report));

    // Both parties sit strictly between blind and deterministic; their
    // optimal guessing probabilities have closed forms, handy as an
    // independent cross-check of the whole pipeline:
    //   party 1: (35 + sqrt 73) / 64
    //   party 2: (35 + sqrt 521) / 64
    let p1 = report.parties[0].pairwise[0].probability;
    let p2 = report.parties[1].pairwise[0].probability;
    assert!((p1 - (35.0 + 73f64.sqrt()) / 64.0).abs() < 1e-12);
    assert!((p2 - (35.0 + 521f64.sqrt()) / 64.0).abs() < 1e-12);
    assert!(report
        .parties
        .iter()
        .all(|p| p.flags.contains(&LeakageFlag::Partial)));
    println!("\nboth parties leak, neither leaks everything:");
    println!("  party 1 guesses the bit with probability {p1:.6}");
    println!("  party 2 guesses the bit with probability {p2:.6}");

    // Priors tilt the game. If message 0 is sent 99 times out of 100,
    // even a blind guesser scores 0.99, and Helstrom can only improve
    // on that.
    let skewed = analyze_leakage(&book, &plan, Some(&[0.99, 0.01]))?;
    println!("\nwith priors 99:1 the same shares give:");
    for party in &skewed.parties {
        println!(
            "  party {} probability {:.6}",
            party.party + 1,
            party.pairwise[0].probability
        );
        assert!(party.pairwise[0].probability >= 0.99);
    }

    // The worst-case configuration: one party holds a codeword's entire
    // support. That pair of messages leaks with certainty, flagged
    // DETERMINISTIC.
    let worst = analyze_leakage(
        &builtin::worst_case_codebook(),
        &builtin::worst_case_split(),
        None,
    )?;
    println!("\nworst case (a party owns a codeword outright):");
    print!("{}", render_leakage(&worst));
    assert!(worst
        .parties
        .iter()
        .all(|p| p.flags.contains(&LeakageFlag::Deterministic)));
    Ok(())
}
