//! Contract tests for the `eutactic` binary: exit codes, file round
//! trips, and byte-determinism of reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_eutactic")
}

fn data(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    path.to_str().expect("utf-8 path").to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn verification_passes_and_corrupt_hook_fails_first() {
    let ok = run(&["verify-paper"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("all 7 checks passed"));

    let bad = run(&["verify-paper", "--corrupt"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("check 1 recombination                FAIL"));
    assert!(text.contains("FAILED: first failing check is `recombination`"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["star"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify-paper", "--backend", "decimal"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["simulate", "--dim", "4"]).status.code(), Some(2));
    // Valid flags, impossible configuration.
    assert_eq!(
        run(&["simulate", "--dim", "4", "--keep", "9", "--messages", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn star_check_separates_parseval_from_not() {
    let parseval = run(&["star", "check", &data("quadrit_star_12.star")]);
    assert_eq!(parseval.status.code(), Some(0));
    assert!(stdout(&parseval).contains("parseval true"));

    let partial = run(&["star", "check", &data("party1_substar.star")]);
    assert_eq!(partial.status.code(), Some(1));
    assert!(stdout(&partial).contains("parseval false"));

    assert_eq!(
        run(&["star", "check", "/no/such/file.star"]).status.code(),
        Some(2)
    );
}

#[test]
fn star_dilate_writes_parseable_files_and_rejects_non_parseval() {
    let dir = tempfile::tempdir().unwrap();
    let basis_path = dir.path().join("lifted.basis");
    let projector_path = dir.path().join("lifted.projector");
    let ok = run(&[
        "star",
        "dilate",
        &data("quadrit_star_12.star"),
        "--basis-out",
        basis_path.to_str().unwrap(),
        "--projector-out",
        projector_path.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));

    let basis_text = std::fs::read_to_string(&basis_path).unwrap();
    let basis = eutactic::format::parse_basis(&basis_text, 1e-10).unwrap();
    assert_eq!(basis.dim(), 4);
    let projector_text = std::fs::read_to_string(&projector_path).unwrap();
    eutactic::format::parse_projector(&projector_text).unwrap();

    let bad = run(&["star", "dilate", &data("party2_substar.star")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn star_dilate_exact_can_run_out_of_candidates_but_float_succeeds() {
    // The second projected star is Parseval, yet no standard-basis
    // candidate completes it inside Q(sqrt 2): every residual norm
    // squared (3/8 for the first candidate) lacks an in-field square
    // root. The exact backend reports that honestly; floats complete it.
    let exact = run(&["star", "dilate", &data("quadrit_star_34.star")]);
    assert_eq!(exact.status.code(), Some(2));

    let float = run(&[
        "star",
        "dilate",
        &data("quadrit_star_34.star"),
        "--backend",
        "float",
    ]);
    assert_eq!(float.status.code(), Some(0));
    assert!(stdout(&float).contains("backend float"));
}

#[test]
fn split_then_recombine_recovers_the_codebook_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("bit");
    let prefix = prefix.to_str().unwrap();

    let split = run(&[
        "share",
        "split",
        &data("bit_codebook.book"),
        &data("two_party.split"),
        "--output-prefix",
        prefix,
    ]);
    assert_eq!(split.status.code(), Some(0));

    let share1 = format!("{prefix}-party1.share");
    let share2 = format!("{prefix}-party2.share");
    let out = dir.path().join("recovered.book");
    let recombine = run(&[
        "share",
        "recombine",
        &share1,
        &share2,
        "--book",
        &data("bit_codebook.book"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(recombine.status.code(), Some(0));
    let text = stdout(&recombine);
    assert!(text.contains("state 1 decodes to message 1"));
    assert!(text.contains("state 2 decodes to message 2"));

    // Exact recombination composed with the canonical writer is the
    // identity on the shipped file, byte for byte.
    let recovered = std::fs::read_to_string(&out).unwrap();
    let shipped = std::fs::read_to_string(data("bit_codebook.book")).unwrap();
    assert_eq!(recovered, shipped);
}

#[test]
fn incomplete_share_set_exits_one_but_garbage_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("q");
    let prefix = prefix.to_str().unwrap();
    let split = run(&[
        "share",
        "split",
        &data("quadrit_codebook.book"),
        &data("two_party.split"),
        "--output-prefix",
        prefix,
    ]);
    assert_eq!(split.status.code(), Some(0));

    let only_one = run(&["share", "recombine", &format!("{prefix}-party1.share")]);
    assert_eq!(
        only_one.status.code(),
        Some(1),
        "incomplete set is a protocol failure"
    );

    let garbage = dir.path().join("garbage.share");
    std::fs::write(&garbage, "# share\nbackend exact\nnot a real file\n").unwrap();
    let bad = run(&["share", "recombine", garbage.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2), "parse failure is a usage error");
}

#[test]
fn leakage_command_reports_and_validates_priors() {
    let ok = run(&[
        "share",
        "leakage",
        &data("bit_codebook.book"),
        &data("two_party.split"),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.contains("pair 1 2 probability 0.680375058521"));
    assert!(text.contains("pair 1 2 probability 0.903522256579"));
    assert!(text.contains("flags PARTIAL"));

    let bad = run(&[
        "share",
        "leakage",
        &data("bit_codebook.book"),
        &data("two_party.split"),
        "--priors",
        "0.9,0.2",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn compile_falls_back_to_float_unless_exact_is_forced() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("encoder.circuit");
    let fallback = run(&[
        "compile",
        &data("encoder.matrix"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(fallback.status.code(), Some(0));
    let text = stdout(&fallback);
    assert!(text.contains("float backend"));
    assert!(text.contains("residual"));
    let circuit_text = std::fs::read_to_string(&out).unwrap();
    let circuit = eutactic::format::parse_circuit(&circuit_text).unwrap();
    assert!(circuit.gates().len() <= 6);

    let forced = run(&["compile", &data("encoder.matrix"), "--backend", "exact"]);
    assert_eq!(forced.status.code(), Some(2));

    // Feeding a circuit file where a matrix is expected is a parse error.
    let wrong_type = run(&["compile", &data("encoder.circuit")]);
    assert_eq!(wrong_type.status.code(), Some(2));

    // An eighth-turn rotation matrix compiles exactly with no fallback.
    let eighth = dir.path().join("eighth.matrix");
    std::fs::write(
        &eighth,
        "# matrix\nbackend exact\nrows 2\ncols 2\n1/2*s2 1/2*s2\n-1/2*s2 1/2*s2\n",
    )
    .unwrap();
    let exact = run(&["compile", eighth.to_str().unwrap()]);
    assert_eq!(exact.status.code(), Some(0));
    let text = stdout(&exact);
    assert!(text.contains("exact backend"));
    assert!(!text.contains("fallback"));
}

#[test]
fn simulate_is_byte_deterministic_per_seed() {
    let args = [
        "simulate",
        "--dim",
        "5",
        "--keep",
        "2",
        "--messages",
        "3",
        "--trials",
        "25",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b), "same seed, same bytes");
    assert!(stdout(&a).contains("failures 0"));

    let mut other = args;
    other[other.len() - 1] = "8";
    let c = run(&other);
    assert_ne!(stdout(&a), stdout(&c), "different seed, different report");
}

#[test]
fn structured_output_is_valid_json() {
    let book = data("bit_codebook.book");
    let plan = data("two_party.split");
    for args in [
        vec!["verify-paper", "--format", "structured"],
        vec![
            "share",
            "leakage",
            book.as_str(),
            plan.as_str(),
            "--format",
            "structured",
        ],
        vec![
            "simulate",
            "--dim",
            "3",
            "--keep",
            "1",
            "--messages",
            "2",
            "--trials",
            "5",
            "--format",
            "structured",
        ],
    ] {
        let output = run(&args);
        assert_eq!(output.status.code(), Some(0), "{args:?}");
        let value: serde_json::Value = serde_json::from_str(&stdout(&output))
            .unwrap_or_else(|e| panic!("{args:?} produced invalid JSON: {e}"));
        assert!(value.is_object());
    }
}

#[test]
fn shipped_files_are_fixed_points_of_parse_then_write() {
    use eutactic::format::*;
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let header = text.lines().next().unwrap_or_default().to_string();
        let rewritten = match header.as_str() {
            "# star" => write_star(&parse_star(&text).unwrap()),
            "# basis" => write_basis(&parse_basis(&text, 1e-10).unwrap()),
            "# codebook" => write_codebook(&parse_codebook(&text, 1e-10).unwrap()),
            "# split" => write_split(&parse_split(&text).unwrap()),
            "# share" => write_share(&parse_share(&text).unwrap()),
            "# circuit" => write_circuit(&parse_circuit(&text).unwrap()),
            "# matrix" => write_matrix(&parse_matrix(&text).unwrap()),
            "# projector" => write_projector(&parse_projector(&text).unwrap()),
            other => panic!("unexpected header {other:?} in {path:?}"),
        };
        assert_eq!(rewritten, text, "{path:?} is not canonical");
        seen += 1;
    }
    assert!(
        seen >= 11,
        "expected the full set of shipped files, saw {seen}"
    );
}
