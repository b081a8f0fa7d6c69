//! Build a eutactic star by orthogonal projection, certify it as a
//! Parseval frame, watch a subfamily fail the same test, and lift the
//! star back to an orthonormal basis (Naimark dilation).
//!
//! Run with `cargo run --example build_a_star`.

use eutactic::{
    builtin, naimark_dilate, project_basis, Backend, CoordinateProjector, EutacticStar, DEFAULT_TOL,
};

fn main() -> eutactic::Result<()> {
    // An orthonormal basis of R^4 whose entries all live in Q(sqrt 2).
    let basis = builtin::quadrit_basis();
    println!("starting from an orthonormal basis of R^{}", basis.dim());

    // Project every basis vector onto the first two coordinates. The
    // shadows form a eutactic star: four vectors in R^2 whose dyads sum
    // to the identity (a Parseval tight frame).
    let plane = CoordinateProjector::new(4, [0, 1])?;
    let star = project_basis(&basis, &plane)?;
    println!("\nprojected onto coordinates 1 and 2:");
    for (i, v) in star.vectors().iter().enumerate() {
        println!("  star vector {}: {}", i + 1, v);
    }

    // The certificate: sum of dyads minus the identity must vanish. On
    // the exact backend "vanish" means identically zero.
    let report = star.parseval_report(DEFAULT_TOL);
    let resolution = star.resolution();
    println!("\nresolution of identity:");
    for row in 0..2 {
        println!(
            "  {}  {}",
            resolution.entry(row, 0),
            resolution.entry(row, 1)
        );
    }
    println!(
        "parseval: {} (defect {:.3e})",
        report.is_parseval, report.defect_norm
    );
    assert!(report.is_parseval);

    // Any two of the four shadows on their own are *not* a Parseval
    // frame: eutacticity is a property of the whole family.
    let pair = EutacticStar::new(Backend::Exact, 2, star.vectors()[..2].to_vec())?;
    let partial = pair.parseval_report(DEFAULT_TOL);
    println!(
        "\nfirst two vectors alone: parseval {} (defect {:.3e})",
        partial.is_parseval, partial.defect_norm
    );
    assert!(!partial.is_parseval);

    // Naimark dilation runs the projection backwards: the star vectors
    // become the shadows of an orthonormal basis one dimension up per
    // extra frame vector, with an explicit coordinate projector.
    let (lifted, kept) = naimark_dilate(&star, DEFAULT_TOL)?;
    println!(
        "\ndilated to an orthonormal basis of R^{}, kept coordinates {:?}",
        lifted.dim(),
        kept.kept().map(|c| c + 1).collect::<Vec<_>>()
    );

    // Round trip: projecting the lifted basis reproduces the star.
    let shadow = project_basis(&lifted, &kept)?;
    for (a, b) in shadow.vectors().iter().zip(star.vectors()) {
        assert!(a.try_eq(b)?, "dilation must reproduce the star exactly");
    }
    println!("projecting the lifted basis reproduces the star exactly");
    Ok(())
}
