//! Line-oriented text formats for every value the tools exchange.
//!
//! All files share one shape: `#` starts a comment, blank lines are
//! skipped, header lines begin with a keyword (`backend`, `dim`,
//! `source_dim`, `party`, `kept`, `part`, `rows`, `cols`, `signs`), and
//! the remaining lines are content rows of whitespace-separated scalar
//! tokens in the grammar of the scalar module (`-1/4*s2`,
//! `1/2 + 1/4*s2`, `5e-1`, ...). Because the two-term exact form
//! contains spaces, a bare `+` or `-` token splices its neighbours back
//! into one scalar.
//!
//! Coordinates, party numbers, and message numbers are 1-based in files
//! (they are written for humans); the in-memory API is 0-based
//! throughout.
//!
//! Writers emit a canonical form — fixed header order, single spaces,
//! one trailing newline — so parse -> write is the identity on canonical
//! files, which every shipped data file is.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frames::{CoordinateProjector, EutacticStar, OrthonormalBasis};
use crate::interferometer::{RotationCircuit, RotationGate};
use crate::linalg::{Angle, Matrix, Vector};
use crate::sample::SimulateReport;
use crate::scalar::{Backend, Scalar};
use crate::sharing::{Codebook, LeakageReport, Share, ShareSplit};

// ---------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Comment-stripped, tokenized lines with 1-based line and column
/// numbers. Blank lines vanish.
fn logical_lines(text: &str) -> Vec<Vec<Tok<'_>>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut start: Option<usize> = None;
        for (pos, ch) in body.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push(Tok {
                        text: &body[s..pos],
                        line,
                        col: s + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
        if let Some(s) = start {
            toks.push(Tok {
                text: &body[s..],
                line,
                col: s + 1,
            });
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

fn is_header(toks: &[Tok]) -> bool {
    toks[0]
        .text
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic())
}

// ---------------------------------------------------------------------
// Header collection
// ---------------------------------------------------------------------

/// Headers seen so far, with duplicate and unknown-key detection left to
/// the per-type parsers via `take`.
struct Headers<'a> {
    entries: Vec<(Tok<'a>, Vec<Tok<'a>>)>,
}

impl<'a> Headers<'a> {
    fn collect(lines: &[Vec<Tok<'a>>], known: &[&str]) -> Result<(Headers<'a>, Vec<Vec<Tok<'a>>>)> {
        let mut entries: Vec<(Tok<'a>, Vec<Tok<'a>>)> = Vec::new();
        let mut rows = Vec::new();
        for toks in lines {
            if is_header(toks) {
                let key = toks[0];
                if !known.contains(&key.text) {
                    return Err(perr(
                        key.line,
                        key.col,
                        format!("unknown key `{}`", key.text),
                    ));
                }
                if entries.iter().any(|(k, _)| k.text == key.text) {
                    return Err(perr(
                        key.line,
                        key.col,
                        format!("duplicate key `{}`", key.text),
                    ));
                }
                entries.push((key, toks[1..].to_vec()));
            } else {
                rows.push(toks.clone());
            }
        }
        Ok((Headers { entries }, rows))
    }

    fn take(&self, key: &str) -> Option<(Tok<'a>, &[Tok<'a>])> {
        self.entries
            .iter()
            .find(|(k, _)| k.text == key)
            .map(|(k, v)| (*k, v.as_slice()))
    }

    fn require(&self, key: &str) -> Result<(Tok<'a>, &[Tok<'a>])> {
        self.take(key)
            .ok_or_else(|| perr(1, 1, format!("missing `{key}` header")))
    }
}

fn single_value<'a>(key: Tok<'a>, values: &[Tok<'a>]) -> Result<Tok<'a>> {
    match values {
        [v] => Ok(*v),
        [] => Err(perr(
            key.line,
            key.col,
            format!("`{}` needs a value", key.text),
        )),
        [_, extra, ..] => Err(perr(
            extra.line,
            extra.col,
            format!("`{}` takes a single value", key.text),
        )),
    }
}

fn parse_usize(tok: Tok<'_>) -> Result<usize> {
    tok.text.parse::<usize>().map_err(|_| {
        perr(
            tok.line,
            tok.col,
            format!("expected an integer, got `{}`", tok.text),
        )
    })
}

/// A 1-based index from a file, converted to 0-based.
fn parse_index(tok: Tok<'_>, what: &str, bound: usize) -> Result<usize> {
    let n = parse_usize(tok)?;
    if n == 0 || n > bound {
        return Err(perr(
            tok.line,
            tok.col,
            format!("{what} {n} out of range 1..={bound}"),
        ));
    }
    Ok(n - 1)
}

fn header_backend(headers: &Headers) -> Result<Backend> {
    let (key, values) = headers.require("backend")?;
    let v = single_value(key, values)?;
    v.text
        .parse::<Backend>()
        .map_err(|_| perr(v.line, v.col, format!("unknown backend `{}`", v.text)))
}

fn header_usize(headers: &Headers, key: &str) -> Result<usize> {
    let (k, values) = headers.require(key)?;
    parse_usize(single_value(k, values)?)
}

// ---------------------------------------------------------------------
// Scalar rows
// ---------------------------------------------------------------------

/// Splice rows around bare `+`/`-` tokens: the exact two-term form
/// `1/2 + 1/4*s2` tokenizes as three tokens that belong to one scalar.
fn glue_scalars<'a>(toks: &[Tok<'a>]) -> Result<Vec<(String, Tok<'a>)>> {
    let mut out: Vec<(String, Tok)> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let t = toks[i];
        if t.text == "+" || t.text == "-" {
            let prev = out
                .pop()
                .ok_or_else(|| perr(t.line, t.col, "dangling operator at row start"))?;
            let next = toks
                .get(i + 1)
                .ok_or_else(|| perr(t.line, t.col, "dangling operator at row end"))?;
            out.push((format!("{} {} {}", prev.0, t.text, next.text), prev.1));
            i += 2;
        } else {
            out.push((t.text.to_string(), t));
            i += 1;
        }
    }
    Ok(out)
}

fn parse_vector_row(toks: &[Tok], backend: Backend, dim: usize) -> Result<Vector> {
    let glued = glue_scalars(toks)?;
    if glued.len() != dim {
        let at = toks[0];
        return Err(perr(
            at.line,
            at.col,
            format!("expected {dim} entries, found {}", glued.len()),
        ));
    }
    let scalars = glued
        .into_iter()
        .map(|(text, at)| {
            Scalar::parse(&text, backend).map_err(|message| perr(at.line, at.col, message))
        })
        .collect::<Result<Vec<_>>>()?;
    Vector::from_scalars(scalars)
}

fn write_vector_row(out: &mut String, v: &Vector) {
    for (i, s) in v.scalars().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{s}");
    }
    out.push('\n');
}

// ---------------------------------------------------------------------
// Stars and bases
// ---------------------------------------------------------------------

/// Star file: `backend`, `dim` (ambient), `source_dim` (vector count),
/// then one vector row per star vector.
pub fn parse_star(text: &str) -> Result<EutacticStar> {
    let lines = logical_lines(text);
    let (headers, rows) = Headers::collect(&lines, &["backend", "dim", "source_dim"])?;
    let backend = header_backend(&headers)?;
    let dim = header_usize(&headers, "dim")?;
    let source_dim = header_usize(&headers, "source_dim")?;
    if rows.len() != source_dim {
        return Err(perr(
            1,
            1,
            format!(
                "source_dim {} does not match {} vector rows",
                source_dim,
                rows.len()
            ),
        ));
    }
    let vectors = rows
        .iter()
        .map(|r| parse_vector_row(r, backend, dim))
        .collect::<Result<Vec<_>>>()?;
    EutacticStar::new(backend, dim, vectors)
}

pub fn write_star(star: &EutacticStar) -> String {
    let mut out = String::from("# star\n");
    let _ = writeln!(out, "backend {}", star.backend());
    let _ = writeln!(out, "dim {}", star.ambient_dim());
    let _ = writeln!(out, "source_dim {}", star.source_dim());
    for v in star.vectors() {
        write_vector_row(&mut out, v);
    }
    out
}

/// Basis file: `backend`, `dim`, then exactly `dim` vector rows.
pub fn parse_basis(text: &str, tol: f64) -> Result<OrthonormalBasis> {
    let lines = logical_lines(text);
    let (headers, rows) = Headers::collect(&lines, &["backend", "dim"])?;
    let backend = header_backend(&headers)?;
    let dim = header_usize(&headers, "dim")?;
    let vectors = rows
        .iter()
        .map(|r| parse_vector_row(r, backend, dim))
        .collect::<Result<Vec<_>>>()?;
    OrthonormalBasis::new(vectors, tol)
}

pub fn write_basis(basis: &OrthonormalBasis) -> String {
    let mut out = String::from("# basis\n");
    let _ = writeln!(out, "backend {}", basis.backend());
    let _ = writeln!(out, "dim {}", basis.dim());
    for v in basis.vectors() {
        write_vector_row(&mut out, v);
    }
    out
}

/// Projector file: `dim` and the sorted 1-based `kept` coordinate list.
pub fn parse_projector(text: &str) -> Result<CoordinateProjector> {
    let lines = logical_lines(text);
    let (headers, rows) = Headers::collect(&lines, &["dim", "kept"])?;
    if let Some(first) = rows.first() {
        let at = first[0];
        return Err(perr(
            at.line,
            at.col,
            "projector files have no content rows",
        ));
    }
    let dim = header_usize(&headers, "dim")?;
    let (_, kept_toks) = headers.require("kept")?;
    let kept = kept_toks
        .iter()
        .map(|t| parse_index(*t, "coordinate", dim))
        .collect::<Result<Vec<_>>>()?;
    CoordinateProjector::new(dim, kept)
}

pub fn write_projector(p: &CoordinateProjector) -> String {
    let mut out = String::from("# projector\n");
    let _ = writeln!(out, "dim {}", p.dim());
    out.push_str("kept");
    for c in p.kept() {
        let _ = write!(out, " {}", c + 1);
    }
    out.push('\n');
    out
}

// ---------------------------------------------------------------------
// Codebooks, splits, shares
// ---------------------------------------------------------------------

/// Codebook file: `backend`, `dim`, then one row per codeword.
pub fn parse_codebook(text: &str, tol: f64) -> Result<Codebook> {
    let lines = logical_lines(text);
    let (headers, rows) = Headers::collect(&lines, &["backend", "dim"])?;
    let backend = header_backend(&headers)?;
    let dim = header_usize(&headers, "dim")?;
    let vectors = rows
        .iter()
        .map(|r| parse_vector_row(r, backend, dim))
        .collect::<Result<Vec<_>>>()?;
    Codebook::new(vectors, tol)
}

pub fn write_codebook(book: &Codebook) -> String {
    let mut out = String::from("# codebook\n");
    let _ = writeln!(out, "backend {}", book.backend());
    let _ = writeln!(out, "dim {}", book.dim());
    for v in book.codewords() {
        write_vector_row(&mut out, v);
    }
    out
}

/// Split file: `dim`, then one `part` header per party listing its
/// 1-based coordinates in party order.
pub fn parse_split(text: &str) -> Result<ShareSplit> {
    // `part` repeats, so it bypasses the duplicate detection of Headers.
    let lines = logical_lines(text);
    let mut dim: Option<usize> = None;
    let mut parts_toks: Vec<Vec<Tok>> = Vec::new();
    for toks in &lines {
        let key = toks[0];
        if !is_header(toks) {
            return Err(perr(key.line, key.col, "split files have no content rows"));
        }
        match key.text {
            "dim" => {
                if dim.is_some() {
                    return Err(perr(key.line, key.col, "duplicate key `dim`"));
                }
                dim = Some(parse_usize(single_value(key, &toks[1..])?)?);
            }
            "part" => parts_toks.push(toks[1..].to_vec()),
            other => return Err(perr(key.line, key.col, format!("unknown key `{other}`"))),
        }
    }
    let dim = dim.ok_or_else(|| perr(1, 1, "missing `dim` header"))?;
    let parts = parts_toks
        .iter()
        .map(|toks| {
            let kept = toks
                .iter()
                .map(|t| parse_index(*t, "coordinate", dim))
                .collect::<Result<Vec<_>>>()?;
            CoordinateProjector::new(dim, kept)
        })
        .collect::<Result<Vec<_>>>()?;
    ShareSplit::new(dim, parts)
}

pub fn write_split(split: &ShareSplit) -> String {
    let mut out = String::from("# split\n");
    let _ = writeln!(out, "dim {}", split.dim());
    for p in split.parts() {
        out.push_str("part");
        for c in p.kept() {
            let _ = write!(out, " {}", c + 1);
        }
        out.push('\n');
    }
    out
}

/// Share file: `backend`, `dim`, 1-based `party`, the party's `kept`
/// coordinates, then one fragment row per message.
pub fn parse_share(text: &str) -> Result<Share> {
    let lines = logical_lines(text);
    let (headers, rows) = Headers::collect(&lines, &["backend", "dim", "party", "kept"])?;
    let backend = header_backend(&headers)?;
    let dim = header_usize(&headers, "dim")?;
    let party = header_usize(&headers, "party")?;
    if party == 0 {
        return Err(perr(1, 1, "party numbers are 1-based"));
    }
    let (_, kept_toks) = headers.require("kept")?;
    let kept = kept_toks
        .iter()
        .map(|t| parse_index(*t, "coordinate", dim))
        .collect::<Result<Vec<_>>>()?;
    let projector = CoordinateProjector::new(dim, kept)?;
    let fragments = rows
        .iter()
        .map(|r| parse_vector_row(r, backend, dim))
        .collect::<Result<Vec<_>>>()?;
    Share::new(party - 1, projector, fragments)
}

pub fn write_share(share: &Share) -> String {
    let mut out = String::from("# share\n");
    let backend = share
        .fragments()
        .first()
        .map(|f| f.backend())
        .unwrap_or(Backend::Exact);
    let _ = writeln!(out, "backend {backend}");
    let _ = writeln!(out, "dim {}", share.dim());
    let _ = writeln!(out, "party {}", share.party() + 1);
    out.push_str("kept");
    for c in share.projector().kept() {
        let _ = write!(out, " {}", c + 1);
    }
    out.push('\n');
    for f in share.fragments() {
        write_vector_row(&mut out, f);
    }
    out
}

// ---------------------------------------------------------------------
// Circuits and matrices
// ---------------------------------------------------------------------

fn parse_angle(tok: Tok<'_>) -> Result<Angle> {
    if let Some(prefix) = tok.text.strip_suffix("/8*pi") {
        let n: i64 = prefix
            .parse()
            .map_err(|_| perr(tok.line, tok.col, format!("bad angle numerator `{prefix}`")))?;
        if n % 2 != 0 {
            return Err(perr(
                tok.line,
                tok.col,
                format!(
                    "angle {n}/8*pi is an odd multiple of pi/8; only multiples of pi/4 are exact"
                ),
            ));
        }
        return Ok(Angle::QuarterPi(n / 2));
    }
    let t: f64 = tok.text.parse().map_err(|_| {
        perr(
            tok.line,
            tok.col,
            format!("expected an angle, got `{}`", tok.text),
        )
    })?;
    if !t.is_finite() {
        return Err(perr(tok.line, tok.col, "angle must be finite"));
    }
    Ok(Angle::Radians(t))
}

/// Circuit file: `backend`, `dim`, gate rows `i j angle` in application
/// order (1-based plane coordinates; angles `k/8*pi` or float radians),
/// and an optional `signs` header of plus/minus ones.
pub fn parse_circuit(text: &str) -> Result<RotationCircuit> {
    let lines = logical_lines(text);
    let (headers, rows) = Headers::collect(&lines, &["backend", "dim", "signs"])?;
    let backend = header_backend(&headers)?;
    let dim = header_usize(&headers, "dim")?;
    let gates = rows
        .iter()
        .map(|toks| {
            if toks.len() != 3 {
                let at = toks[0];
                return Err(perr(
                    at.line,
                    at.col,
                    format!("gate rows have 3 fields `i j angle`, found {}", toks.len()),
                ));
            }
            let i = parse_index(toks[0], "plane coordinate", dim)?;
            let j = parse_index(toks[1], "plane coordinate", dim)?;
            let angle = parse_angle(toks[2])?;
            if backend == Backend::Exact && !angle.is_exact() {
                return Err(perr(
                    toks[2].line,
                    toks[2].col,
                    "exact circuits only take k/8*pi angles",
                ));
            }
            Ok(RotationGate::new((i, j), angle))
        })
        .collect::<Result<Vec<_>>>()?;
    let signs = match headers.take("signs") {
        None => None,
        Some((key, values)) => {
            if values.len() != dim {
                return Err(perr(
                    key.line,
                    key.col,
                    format!("`signs` needs {dim} entries, found {}", values.len()),
                ));
            }
            Some(
                values
                    .iter()
                    .map(|t| match t.text {
                        "1" | "+1" => Ok(1i8),
                        "-1" => Ok(-1i8),
                        other => Err(perr(
                            t.line,
                            t.col,
                            format!("signs are +1 or -1, got `{other}`"),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    RotationCircuit::new(dim, gates, signs)
}

pub fn write_circuit(circuit: &RotationCircuit) -> String {
    let mut out = String::from("# circuit\n");
    let backend = if circuit.is_exact() {
        Backend::Exact
    } else {
        Backend::Float
    };
    let _ = writeln!(out, "backend {backend}");
    let _ = writeln!(out, "dim {}", circuit.dim());
    for g in circuit.gates() {
        let _ = writeln!(out, "{} {} {}", g.plane.0 + 1, g.plane.1 + 1, g.angle);
    }
    if let Some(signs) = circuit.signs() {
        out.push_str("signs");
        for s in signs {
            let _ = write!(out, " {}", if *s >= 0 { "1" } else { "-1" });
        }
        out.push('\n');
    }
    out
}

/// Matrix file: `backend`, `rows`, `cols`, then the rows.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let lines = logical_lines(text);
    let (headers, content) = Headers::collect(&lines, &["backend", "rows", "cols"])?;
    let backend = header_backend(&headers)?;
    let rows = header_usize(&headers, "rows")?;
    let cols = header_usize(&headers, "cols")?;
    if content.len() != rows {
        return Err(perr(
            1,
            1,
            format!("expected {rows} matrix rows, found {}", content.len()),
        ));
    }
    let row_vectors = content
        .iter()
        .map(|r| parse_vector_row(r, backend, cols))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(&row_vectors)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = String::from("# matrix\n");
    let _ = writeln!(out, "backend {}", m.backend());
    let _ = writeln!(out, "rows {}", m.rows());
    let _ = writeln!(out, "cols {}", m.cols());
    for i in 0..m.rows() {
        write_vector_row(&mut out, &m.row(i));
    }
    out
}

// ---------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------

/// Leakage report as stable plain text: parties ascending, pairs in
/// lexicographic order, twelve decimal places throughout.
pub fn render_leakage(report: &LeakageReport) -> String {
    let mut out = String::from("leakage report\n");
    let _ = writeln!(out, "dim {}", report.dim);
    let _ = writeln!(out, "messages {}", report.messages);
    for party in &report.parties {
        let _ = writeln!(out, "party {}", party.party + 1);
        for p in &party.pairwise {
            let _ = writeln!(
                out,
                "  pair {} {} probability {:.12}",
                p.pair.0 + 1,
                p.pair.1 + 1,
                p.probability
            );
        }
        for row in &party.gram {
            out.push_str("  gram");
            for x in row {
                let _ = write!(out, " {x:.12}");
            }
            out.push('\n');
        }
        out.push_str("  flags");
        for f in &party.flags {
            let _ = write!(out, " {f}");
        }
        out.push('\n');
    }
    out
}

/// Plain-text rendering of a Monte-Carlo report. Field order and float
/// formatting are fixed, so identical configurations produce identical
/// bytes.
pub fn render_simulate(report: &SimulateReport) -> String {
    let mut out = String::from("simulate report\n");
    let _ = writeln!(out, "dim {}", report.dim);
    let _ = writeln!(out, "keep {}", report.keep);
    let _ = writeln!(out, "messages {}", report.messages);
    let _ = writeln!(out, "trials {}", report.trials);
    let _ = writeln!(out, "seed {}", report.seed);
    let _ = writeln!(out, "round-trips {}", report.round_trips);
    let _ = writeln!(out, "failures {}", report.failures);
    for party in &report.parties {
        let _ = writeln!(out, "party {}", party.party + 1);
        let _ = writeln!(
            out,
            "  probability min {:.12} mean {:.12} max {:.12}",
            party.min_probability, party.mean_probability, party.max_probability
        );
        let _ = writeln!(
            out,
            "  trials deterministic {} partial {} no-leak {}",
            party.deterministic_trials, party.partial_trials, party.no_leak_trials
        );
    }
    out
}
