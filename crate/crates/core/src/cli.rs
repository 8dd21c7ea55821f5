//! Command-line front end. Exit codes: 0 success, 1 input error,
//! 2 mathematical inconsistency.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::report::{
    compare_specs, gap_table, gell_for, parse_certificate, parse_rational, read_json, rieffel_json,
    summarize, CompareVerdict, GEllReport, InputError, SpecDocument,
};
use crate::rotation::rieffel_projection;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gell", version, about = "Invariants of odometer crossed products and solenoidal tori")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the invariant of a spec and cross-check every route.
    Gell {
        spec: PathBuf,
        /// Truncation depth (default: the spec's, else 6).
        #[arg(long)]
        depth: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate both sides of the gap-labelling equality per depth.
    VerifyGap {
        spec: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Compare two specs, optionally checking an intertwiner certificate.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Build a Rieffel projection in the clock/shift model.
    Rieffel {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Ramp width as a rational, a multiple of 1/q (default 1/q).
        #[arg(long)]
        eps: Option<String>,
    },
}

/// Runs a parsed command, writing to the given streams.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Gell { spec, depth, out: path } => cmd_gell(&spec, depth, path.as_deref(), out),
        Command::VerifyGap { spec, depth } => cmd_verify_gap(&spec, depth, out),
        Command::Compare { a, b, certificate, depth } => {
            cmd_compare(&a, &b, certificate.as_deref(), depth, out)
        }
        Command::Rieffel { p, q, eps } => cmd_rieffel(p, q, eps.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<crate::GellError> for Failure {
    fn from(e: crate::GellError) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn load(path: &std::path::Path) -> std::result::Result<SpecDocument, Failure> {
    SpecDocument::from_path(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_gell(spec: &std::path::Path, depth: Option<usize>, path: Option<&std::path::Path>, out: &mut dyn Write) -> CmdResult {
    let doc = load(spec)?;
    let g = gell_for(&doc, depth)?;
    write!(out, "{}", summarize(&doc, &g)).map_err(io_failure)?;
    if let Some(p) = path {
        std::fs::write(p, GEllReport::new(&doc, &g).to_json()).map_err(io_failure)?;
    }
    Ok(if g.consistent() { EXIT_OK } else { EXIT_INCONSISTENT })
}

fn cmd_verify_gap(spec: &std::path::Path, depth: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let doc = load(spec)?;
    if doc.twist.is_some() {
        return Err(InputError::new("/theta", "verify-gap takes an untwisted spec").into());
    }
    let rows = gap_table(&doc, doc.effective_depth(depth))?;
    writeln!(out, "{:>5}  {:<24} {:<24} verdict", "depth", "trace image", "clopen measures").map_err(io_failure)?;
    for r in &rows {
        writeln!(
            out,
            "{:>5}  {:<24} {:<24} {}",
            r.depth,
            r.lhs,
            r.rhs,
            if r.equal { "PASS" } else { "FAIL" }
        )
        .map_err(io_failure)?;
    }
    Ok(if rows.iter().all(|r| r.equal) { EXIT_OK } else { EXIT_INCONSISTENT })
}

fn cmd_compare(
    a: &std::path::Path,
    b: &std::path::Path,
    certificate: Option<&std::path::Path>,
    depth: Option<usize>,
    out: &mut dyn Write,
) -> CmdResult {
    let da = load(a)?;
    let db = load(b)?;
    let depth = depth.unwrap_or(crate::report::DEFAULT_DEPTH);
    let cert = match certificate {
        Some(p) => Some(parse_certificate(&read_json(p)?, da.spec.rank()).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{}: {e}", p.display()),
        })?),
        None => None,
    };
    let c = compare_specs(&da.spec, &db.spec, cert.as_ref(), depth)?;
    writeln!(out, "verdict: {}", c.verdict).map_err(io_failure)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&c.to_json()).expect("serializes")).map_err(io_failure)?;
    Ok(match c.verdict {
        CompareVerdict::CertificateRejected(_) => EXIT_INPUT,
        _ => EXIT_OK,
    })
}

fn cmd_rieffel(p: u64, q: u64, eps: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let eps = match eps {
        Some(s) => parse_rational(&serde_json::Value::String(s.to_string()), "/eps")?,
        None => BigRational::new(BigInt::from(1), BigInt::from(q.max(1))),
    };
    let r = rieffel_projection(p, q, &eps).map_err(|e| Failure {
        code: match e {
            crate::GellError::Numerical(_) => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        },
        message: e.to_string(),
    })?;
    writeln!(out, "{}", serde_json::to_string_pretty(&rieffel_json(&r)).expect("serializes")).map_err(io_failure)?;
    Ok(if r.within_tolerances() { EXIT_OK } else { EXIT_INCONSISTENT })
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
