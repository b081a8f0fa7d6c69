//! Command-line front end: every capability of the library behind one
//! small binary. All computation lives in the library; this file only
//! parses arguments, moves file contents around, and chooses exit codes.
//!
//! Exit codes: 0 on success, 1 when a verification or decoding verdict
//! is negative (a failed check, a non-Parseval star, an incomplete or
//! ambiguous recombination, simulated round-trip failures), 2 on usage,
//! parse, or arithmetic errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use eutactic::format as fmt;
use eutactic::{
    analyze_leakage, decompose, naimark_dilate, recombine, simulate, split, verify_reference,
    Backend, Codebook, Error, Result, RotationCircuit, SimulateConfig, DEFAULT_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// Line-oriented, human-readable text.
    Text,
    /// Pretty-printed JSON.
    Structured,
}

#[derive(Parser)]
#[command(
    name = "eutactic",
    version,
    about = "Eutactic stars, coherent secret sharing, and plane-rotation circuits"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-verify the built-in reference configuration end to end.
    VerifyPaper(VerifyArgs),
    /// Inspect eutactic stars and lift them to orthonormal bases.
    #[command(subcommand)]
    Star(StarCmd),
    /// Split codebooks into shares, recombine them, analyze leakage.
    #[command(subcommand)]
    Share(ShareCmd),
    /// Decompose an orthogonal matrix into plane rotations.
    Compile(CompileArgs),
    /// Monte-Carlo round trips over random codebooks and splits.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Arithmetic backend to verify on.
    #[arg(long, default_value = "exact")]
    backend: Backend,
    /// Absolute tolerance for float-backend comparisons.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tolerance: f64,
    /// Perturb one built-in fragment first; exercises the failure path.
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Subcommand)]
enum StarCmd {
    /// Check the Parseval condition of a star file.
    Check {
        file: PathBuf,
        /// Defect tolerance on the float backend (exact stars must vanish).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
    },
    /// Complete a Parseval star to an orthonormal basis plus projector.
    Dilate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
        /// Dilate on this backend instead of the file's own. Exact
        /// completions do not always exist; `float` always succeeds on
        /// a Parseval star.
        #[arg(long)]
        backend: Option<Backend>,
        /// Where to write the completed basis (stdout if omitted).
        #[arg(long)]
        basis_out: Option<PathBuf>,
        /// Where to write the coordinate projector (stdout if omitted).
        #[arg(long)]
        projector_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ShareCmd {
    /// Cut every codeword along a split; writes one share file per party.
    Split {
        book: PathBuf,
        split: PathBuf,
        /// Share files are written to {prefix}-party{N}.share.
        #[arg(long)]
        output_prefix: String,
        /// Orthonormality tolerance when reading float codebooks.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
    },
    /// Add up fragments of a complete share set; recovers the codebook.
    Recombine {
        /// Share files, one per party.
        #[arg(required = true)]
        shares: Vec<PathBuf>,
        /// Reference codebook to decode the recovered states against.
        #[arg(long)]
        book: Option<PathBuf>,
        /// Where to write the recovered codebook (stdout if omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
    },
    /// Pairwise Helstrom leakage of every party of a split.
    Leakage {
        book: PathBuf,
        split: PathBuf,
        /// Comma-separated prior probabilities, one per message.
        #[arg(long, value_delimiter = ',')]
        priors: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct CompileArgs {
    matrix: PathBuf,
    /// Where to write the compiled circuit (stdout if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Force a backend; `exact` fails on non-eighth-turn angles instead
    /// of falling back to floats.
    #[arg(long)]
    backend: Option<Backend>,
    /// Orthogonality tolerance for float matrices.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tolerance: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Ambient dimension of the random codebooks.
    #[arg(long)]
    dim: usize,
    /// Coordinates kept by the first party; the complement, if nonempty,
    /// forms a second party.
    #[arg(long)]
    keep: usize,
    /// Codewords per codebook.
    #[arg(long)]
    messages: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Negative protocol verdicts exit 1; everything else that errors is a
/// usage, parse, or arithmetic problem and exits 2.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::IncompleteShares { .. } | Error::AmbiguousState { .. } | Error::ZeroState => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::from)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(Error::from)
}

/// Write to stdout; a broken pipe (the reader went away) is a quiet
/// success, not a panic.
fn emit_str(s: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn emit(format: OutputFormat, text: &str, value: serde_json::Value) {
    match format {
        OutputFormat::Text => emit_str(text),
        OutputFormat::Structured => {
            let mut json = serde_json::to_string_pretty(&value).expect("reports serialize");
            json.push('\n');
            emit_str(&json);
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::VerifyPaper(args) => cmd_verify(cli.format, args),
        Command::Star(cmd) => cmd_star(cli.format, cmd),
        Command::Share(cmd) => cmd_share(cli.format, cmd),
        Command::Compile(args) => cmd_compile(cli.format, args),
        Command::Simulate(args) => cmd_simulate(cli.format, args),
    }
}

fn cmd_verify(format: OutputFormat, args: VerifyArgs) -> Result<u8> {
    let report = verify_reference(args.backend, args.tolerance, args.corrupt)?;
    emit(
        format,
        &report.render(),
        serde_json::to_value(&report).expect("report serializes"),
    );
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn cmd_star(format: OutputFormat, cmd: StarCmd) -> Result<u8> {
    match cmd {
        StarCmd::Check { file, tolerance } => {
            let star = fmt::parse_star(&read(&file)?)?;
            let report = star.parseval_report(tolerance);
            let text = format!(
                "star check\nbackend {}\ndim {}\nvectors {}\ndefect {:.12e}\nparseval {}\n",
                star.backend().name(),
                star.ambient_dim(),
                star.source_dim(),
                report.defect_norm,
                report.is_parseval
            );
            let value = json!({
                "backend": star.backend().name(),
                "dim": star.ambient_dim(),
                "vectors": star.source_dim(),
                "defect": report.defect_norm,
                "parseval": report.is_parseval,
            });
            emit(format, &text, value);
            Ok(if report.is_parseval { 0 } else { 1 })
        }
        StarCmd::Dilate {
            file,
            tolerance,
            backend,
            basis_out,
            projector_out,
        } => {
            let star = fmt::parse_star(&read(&file)?)?;
            let star = match (backend, star.backend()) {
                (Some(Backend::Exact), Backend::Float) => {
                    return Err(Error::BackendMismatch("exact", "float"));
                }
                (Some(Backend::Float), Backend::Exact) => star.to_float(),
                _ => star,
            };
            let (basis, projector) = naimark_dilate(&star, tolerance)?;
            let basis_text = fmt::write_basis(&basis);
            let projector_text = fmt::write_projector(&projector);
            let kept: Vec<usize> = projector.kept().map(|c| c + 1).collect();

            let mut text = format!(
                "dilated star to an orthonormal basis of dimension {}\nkept coordinates{}\n",
                basis.dim(),
                kept.iter().map(|c| format!(" {c}")).collect::<String>()
            );
            let mut written = Vec::new();
            match &basis_out {
                Some(path) => {
                    write_file(path, &basis_text)?;
                    text.push_str(&format!("wrote basis to {}\n", path.display()));
                    written.push(path.display().to_string());
                }
                None => text.push_str(&basis_text),
            }
            match &projector_out {
                Some(path) => {
                    write_file(path, &projector_text)?;
                    text.push_str(&format!("wrote projector to {}\n", path.display()));
                    written.push(path.display().to_string());
                }
                None => text.push_str(&projector_text),
            }
            let value = json!({
                "basis_dim": basis.dim(),
                "kept": kept,
                "basis": basis_text,
                "projector": projector_text,
                "written": written,
            });
            emit(format, &text, value);
            Ok(0)
        }
    }
}

fn cmd_share(format: OutputFormat, cmd: ShareCmd) -> Result<u8> {
    match cmd {
        ShareCmd::Split {
            book,
            split: split_path,
            output_prefix,
            tolerance,
        } => {
            let book = fmt::parse_codebook(&read(&book)?, tolerance)?;
            let plan = fmt::parse_split(&read(&split_path)?)?;
            let shares = split(&book, &plan)?;
            let mut text = String::new();
            let mut written = Vec::new();
            for share in &shares {
                let path = format!("{output_prefix}-party{}.share", share.party() + 1);
                write_file(Path::new(&path), &fmt::write_share(share))?;
                text.push_str(&format!("wrote {path}\n"));
                written.push(path);
            }
            emit(format, &text, json!({ "written": written }));
            Ok(0)
        }
        ShareCmd::Recombine {
            shares,
            book,
            output,
            tolerance,
        } => {
            let shares = shares
                .iter()
                .map(|p| fmt::parse_share(&read(p)?))
                .collect::<Result<Vec<_>>>()?;
            let recovered = recombine(&shares)?;
            let recovered_book = match Codebook::new(recovered, tolerance) {
                Ok(b) => b,
                Err(err) => {
                    eprintln!("recovered states do not form a codebook: {err}");
                    return Ok(1);
                }
            };
            let book_text = fmt::write_codebook(&recovered_book);

            let mut text = String::new();
            let mut decoded = Vec::new();
            if let Some(reference) = book {
                let reference = fmt::parse_codebook(&read(&reference)?, tolerance)?;
                for (i, state) in recovered_book.codewords().iter().enumerate() {
                    let message = eutactic::decode(state, &reference, tolerance)?;
                    text.push_str(&format!(
                        "state {} decodes to message {}\n",
                        i + 1,
                        message + 1
                    ));
                    decoded.push(message + 1);
                }
            }
            let mut written = Vec::new();
            match &output {
                Some(path) => {
                    write_file(path, &book_text)?;
                    text.push_str(&format!("wrote {}\n", path.display()));
                    written.push(path.display().to_string());
                }
                None => text.push_str(&book_text),
            }
            let value = json!({
                "codebook": book_text,
                "decoded": decoded,
                "written": written,
            });
            emit(format, &text, value);
            Ok(0)
        }
        ShareCmd::Leakage {
            book,
            split: split_path,
            priors,
            tolerance,
        } => {
            let book = fmt::parse_codebook(&read(&book)?, tolerance)?;
            let plan = fmt::parse_split(&read(&split_path)?)?;
            let report = analyze_leakage(&book, &plan, priors.as_deref())?;
            emit(
                format,
                &fmt::render_leakage(&report),
                serde_json::to_value(&report).expect("report serializes"),
            );
            Ok(0)
        }
    }
}

fn cmd_compile(format: OutputFormat, args: CompileArgs) -> Result<u8> {
    let matrix = fmt::parse_matrix(&read(&args.matrix)?)?;
    let (circuit, note): (RotationCircuit, Option<&str>) = match (args.backend, matrix.backend()) {
        (Some(Backend::Exact), Backend::Float) => {
            return Err(Error::BackendMismatch("exact", "float"));
        }
        (Some(Backend::Exact), Backend::Exact) => (decompose(&matrix, args.tolerance)?, None),
        (Some(Backend::Float), _) => (decompose(&matrix.to_float(), args.tolerance)?, None),
        (None, Backend::Float) => (decompose(&matrix, args.tolerance)?, None),
        (None, Backend::Exact) => match decompose(&matrix, args.tolerance) {
            Ok(c) => (c, None),
            Err(Error::NonRepresentableAngle(_)) => (
                decompose(&matrix.to_float(), args.tolerance)?,
                Some("exact angles unavailable; compiled on the float backend"),
            ),
            Err(err) => return Err(err),
        },
    };

    let backend = if circuit.is_exact() {
        Backend::Exact
    } else {
        Backend::Float
    };
    let residual = circuit
        .matrix(backend)?
        .to_float()
        .sub(&matrix.to_float())?
        .frobenius_norm();
    let circuit_text = fmt::write_circuit(&circuit);

    let mut text = format!(
        "compiled {} gates on the {} backend\nresidual {residual:.12e}\n",
        circuit.gates().len(),
        backend.name()
    );
    if let Some(note) = note {
        text.push_str(note);
        text.push('\n');
    }
    let mut written = Vec::new();
    match &args.output {
        Some(path) => {
            write_file(path, &circuit_text)?;
            text.push_str(&format!("wrote {}\n", path.display()));
            written.push(path.display().to_string());
        }
        None => text.push_str(&circuit_text),
    }
    let value = json!({
        "backend": backend.name(),
        "gates": circuit.gates().len(),
        "residual": residual,
        "note": note,
        "circuit": circuit_text,
        "written": written,
    });
    emit(format, &text, value);
    Ok(0)
}

fn cmd_simulate(format: OutputFormat, args: SimulateArgs) -> Result<u8> {
    let report = simulate(&SimulateConfig {
        dim: args.dim,
        keep: args.keep,
        messages: args.messages,
        trials: args.trials,
        seed: args.seed,
    })?;
    emit(
        format,
        &fmt::render_simulate(&report),
        serde_json::to_value(&report).expect("report serializes"),
    );
    Ok(if report.failures == 0 { 0 } else { 1 })
}
