//! The `feec` command line: dimension tables, bases, verification suites,
//! Gram matrices, geometric decomposition and DOF matrices.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad flags, 3 invalid
//! input (mesh, form or parameters).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::duality::{gram_matrix, verify_coefficient_identities, verify_wedge_phi_identities, Pairing};
use crate::error::Error;
use crate::forms::{verify_identities, NormalForm};
use crate::linalg::ExactMatrix;
use crate::rational::{to_f64, Rational};
use crate::report::Report;
use crate::simplicial::{build_complex, complex_from_json, geometric_decompose, global_form_from_json, SimplicialComplex};
use crate::spaces::{basis, dimension, Family, SpaceId};

const EXIT_VERIFY: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "feec", version, about = "Exact barycentric polynomial differential forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichArg {
    First,
    Second,
}

#[derive(Debug, Args)]
struct Common {
    /// Dimension of the reference simplex.
    #[arg(long)]
    n: Option<usize>,
    /// Polynomial degree.
    #[arg(long)]
    r: Option<usize>,
    /// Form degree.
    #[arg(long)]
    k: Option<usize>,
    /// P or Pminus.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Restrict to the trace-free spaces.
    #[arg(long)]
    ring: bool,
    /// Mesh file `{"cells": [[0,1,2], ...]}`.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension table for both families, all form degrees.
    Dims(Common),
    /// Basis of one space.
    Basis(Common),
    /// Run the identity suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Random coefficient vectors per configuration.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Gram matrix of a duality pairing.
    Pair {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        which: WhichArg,
    },
    /// Split a global form into trace-free face pieces.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Global form `{"<cell>": [[alpha, sigma, "p/q"], ...]}`.
        #[arg(long)]
        form: PathBuf,
    },
    /// DOF matrix against the global basis, with its determinant.
    Dofs(Common),
}

fn parse_family(text: &str) -> std::result::Result<Family, String> {
    text.parse::<Family>().map_err(|e| e.to_string())
}

/// Failure of a verb, mapped to an exit code by `run`.
enum Failure {
    Input(Error),
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(Error::Parse(e.to_string()))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the verb, writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Dims(c) => dims(c, out),
        Command::Basis(c) => basis_cmd(c, out),
        Command::Verify { common, samples } => verify(common, *samples, out),
        Command::Pair { common, which } => pair(common, *which, out),
        Command::Decompose { common, form } => decompose(common, form, out),
        Command::Dofs(c) => dofs(c, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_VERIFY
        }
    }
}

fn require(value: Option<usize>, flag: &str) -> std::result::Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn families(c: &Common) -> Vec<Family> {
    c.family.map_or_else(|| vec![Family::P, Family::Pminus], |f| vec![f])
}

fn space_label(family: Family, ring: bool) -> String {
    if ring {
        format!("ring{family}")
    } else {
        family.to_string()
    }
}

fn write_json(out: &mut dyn Write, value: &Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))?)?;
    Ok(())
}

fn dims(c: &Common, out: &mut dyn Write) -> Outcome {
    let n = require(c.n, "n")?;
    let r = require(c.r, "r")?;
    let ks: Vec<usize> = match c.k {
        Some(k) if k > n => return Err(Failure::Input(Error::ShapeMismatch(format!("k={k} exceeds n={n}")))),
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let rings: &[bool] = if c.ring { &[true] } else { &[false, true] };
    let mut rows = Vec::new();
    for &ring in rings {
        for family in families(c) {
            for &k in &ks {
                let dim = dimension(&SpaceId::new(family, ring, r, k, n)?);
                rows.push((space_label(family, ring), k, dim));
            }
        }
    }
    match c.format {
        Format::Text => {
            for (label, k, dim) in rows {
                writeln!(out, "n={n} r={r} {label} k={k} dim={dim}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,r,space,k,dim")?;
            for (label, k, dim) in rows {
                writeln!(out, "{n},{r},{label},{k},{dim}")?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(label, k, dim)| json!({"n": n, "r": r, "space": label, "k": k, "dim": dim}))
                .collect();
            write_json(out, &Value::Array(rows))?;
        }
    }
    Ok(())
}

fn single_space(c: &Common, n: usize) -> std::result::Result<SpaceId, Failure> {
    let family = c.family.ok_or_else(|| Failure::Usage("--family is required".into()))?;
    let r = require(c.r, "r")?;
    let k = require(c.k, "k")?;
    Ok(SpaceId::new(family, c.ring, r, k, n)?)
}

fn basis_cmd(c: &Common, out: &mut dyn Write) -> Outcome {
    let space = single_space(c, require(c.n, "n")?)?;
    let terms: Vec<String> = basis(&space).iter().map(ToString::to_string).collect();
    match c.format {
        Format::Text => {
            writeln!(out, "{space} dim={}", terms.len())?;
            for t in &terms {
                writeln!(out, "{t}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "index,term")?;
            for (i, t) in terms.iter().enumerate() {
                writeln!(out, "{i},{t}")?;
            }
        }
        Format::Json => write_json(out, &json!(terms))?,
    }
    Ok(())
}

fn verify(c: &Common, samples: usize, out: &mut dyn Write) -> Outcome {
    let n = require(c.n, "n")?;
    let r = require(c.r, "r")?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut report = verify_identities(n, r);
    report.merge(verify_wedge_phi_identities(n));
    for degree in 0..=r {
        report.merge(verify_coefficient_identities(n, degree, samples, &mut rng));
    }
    write_report(c.format, &report, out)?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed = report.failures().count();
        Err(Failure::Verify(format!("{failed} of {} checks failed", report.entries().len())))
    }
}

fn write_report(format: Format, report: &Report, out: &mut dyn Write) -> Outcome {
    let coverage = report.coverage();
    match format {
        Format::Text | Format::Csv => {
            if format == Format::Csv {
                writeln!(out, "family,passed,total")?;
            } else {
                writeln!(out, "coverage:")?;
            }
            for (family, (passed, total)) in &coverage {
                if format == Format::Csv {
                    writeln!(out, "{family},{passed},{total}")?;
                } else {
                    writeln!(out, "  {family}: {passed}/{total}")?;
                }
            }
            if format == Format::Text {
                for e in report.failures() {
                    writeln!(out, "FAIL {}: {}", e.family, e.instance)?;
                }
                if report.all_passed() {
                    writeln!(out, "all identities passed")?;
                }
            }
        }
        Format::Json => {
            let coverage: serde_json::Map<String, Value> = coverage
                .iter()
                .map(|(f, (p, t))| (f.to_string(), json!({"passed": p, "total": t})))
                .collect();
            let failures: Vec<Value> = report
                .failures()
                .map(|e| json!({"family": e.family, "instance": e.instance}))
                .collect();
            write_json(
                out,
                &json!({"coverage": coverage, "failures": failures, "passed": report.all_passed()}),
            )?;
        }
    }
    Ok(())
}

fn matrix_json(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn write_matrix_rows(format: Format, m: &ExactMatrix, out: &mut dyn Write) -> Outcome {
    for i in 0..m.rows() {
        let cells: Vec<String> = m
            .row(i)
            .iter()
            .map(|x| match format {
                Format::Csv => to_f64(x).to_string(),
                _ => x.to_string(),
            })
            .collect();
        let sep = if format == Format::Csv { "," } else { " " };
        writeln!(out, "{}", cells.join(sep))?;
    }
    Ok(())
}

fn check_nonsingular(det: &Rational) -> Outcome {
    if num_traits::Zero::is_zero(det) {
        Err(Failure::Verify("matrix is singular".into()))
    } else {
        Ok(())
    }
}

fn pair(c: &Common, which: WhichArg, out: &mut dyn Write) -> Outcome {
    let n = require(c.n, "n")?;
    let r = require(c.r, "r")?;
    let k = require(c.k, "k")?;
    let which = match which {
        WhichArg::First => Pairing::First,
        WhichArg::Second => Pairing::Second,
    };
    let gram = gram_matrix(which, r, k, n)?;
    let det = gram.determinant()?;
    match c.format {
        Format::Json => write_json(out, &matrix_json(&gram))?,
        Format::Csv => write_matrix_rows(Format::Csv, &gram, out)?,
        Format::Text => {
            writeln!(out, "{which} pairing n={n} r={r} k={k} size={}", gram.rows())?;
            write_matrix_rows(Format::Text, &gram, out)?;
            writeln!(out, "det={det}")?;
        }
    }
    check_nonsingular(&det)
}

fn load_complex(c: &Common) -> std::result::Result<SimplicialComplex, Failure> {
    match (&c.mesh, c.n) {
        (Some(path), _) => Ok(complex_from_json(&std::fs::read_to_string(path)?)?),
        (None, Some(n)) => Ok(build_complex(vec![(0..=n).collect()])?),
        (None, None) => Err(Failure::Usage("one of --mesh or --n is required".into())),
    }
}

fn terms_json(form: &NormalForm) -> Value {
    Value::Array(
        form.terms()
            .iter()
            .map(|((alpha, sigma), c)| json!([alpha.exps(), sigma.image(), c.to_string()]))
            .collect(),
    )
}

fn decompose(c: &Common, form_path: &PathBuf, out: &mut dyn Write) -> Outcome {
    let complex = load_complex(c)?;
    let space = single_space(c, complex.dim())?;
    let form = global_form_from_json(&complex, &space, &std::fs::read_to_string(form_path)?)?;
    let pieces = geometric_decompose(&complex, &form)?;
    match c.format {
        Format::Text => {
            for (face, piece) in &pieces {
                writeln!(out, "{face}: {piece}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "face,piece")?;
            for (face, piece) in &pieces {
                let vertices: Vec<String> = face.vertices().iter().map(ToString::to_string).collect();
                writeln!(out, "{},{piece}", vertices.join(" "))?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = pieces
                .iter()
                .map(|(face, piece)| json!({"face": face.vertices(), "piece": terms_json(piece)}))
                .collect();
            write_json(out, &Value::Array(rows))?;
        }
    }
    Ok(())
}

fn dofs(c: &Common, out: &mut dyn Write) -> Outcome {
    let complex = load_complex(c)?;
    let family = c.family.ok_or_else(|| Failure::Usage("--family is required".into()))?;
    let r = require(c.r, "r")?;
    let k = require(c.k, "k")?;
    let m = crate::dof::dof_matrix(&complex, family, r, k)?;
    let det = m.determinant()?;
    let rows: Vec<String> = m.rows.iter().map(ToString::to_string).collect();
    let cols: Vec<String> = m.columns.iter().map(|b| format!("{} {}", b.face, b.term)).collect();
    match c.format {
        Format::Json => write_json(
            out,
            &json!({
                "rows": rows,
                "columns": cols,
                "matrix": matrix_json(&m.matrix),
                "determinant": det.to_string(),
            }),
        )?,
        Format::Csv => write_matrix_rows(Format::Csv, &m.matrix, out)?,
        Format::Text => {
            writeln!(out, "{family} r={r} k={k} size={}", rows.len())?;
            for (i, row) in rows.iter().enumerate() {
                writeln!(out, "row {i}: {row}")?;
            }
            for (j, col) in cols.iter().enumerate() {
                writeln!(out, "column {j}: {col}")?;
            }
            write_matrix_rows(Format::Text, &m.matrix, out)?;
            writeln!(out, "det={det}")?;
        }
    }
    check_nonsingular(&det)
}

pub fn main_exit_code() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
