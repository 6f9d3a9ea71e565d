//! Command-line front end for the verification engine.
//!
//! Verification commands print a human-readable report per chain and can
//! additionally write the reports as JSON (`--json out.json`). Exit codes:
//! 0 when everything passed, 2 on any failure, 3 when a certificate search
//! exhausted its window growth.
//!
//! Inspection commands expose the building blocks directly: `enumerate`
//! lists the admissible colored partitions of a given total, `multisum`
//! prints one triple sum as a truncated series, and `certificate` searches
//! for or re-verifies linear-combination certificates.

use clap::{Args, Parser, Subcommand};
use qpi::certificates::{
    canonical_symbol, find_certificate, verify_certificate, Certificate, CertificateError,
    TargetId,
};
use qpi::exactmath::RatFn;
use qpi::multisum::{eval_multisum, Family, SumSpec};
use qpi::partitions::{enumerate_gamma, ForbiddenSet};
use qpi::pipeline::{
    check_conjecture, exit_code, sanity_classical, verify_all, verify_theorem1, verify_theorem2,
    Report, RunConfig,
};
use qpi::qseries::TruncSeries;
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qpi",
    version,
    about = "Exact-arithmetic verification of two three-colored partition identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReportOpts {
    /// Series truncation order for every check in the run.
    #[arg(long, default_value_t = 60)]
    order: u32,
    /// Also write the reports as a JSON array to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verification chain (both identities, the open weighted
    /// refinement, and the classical sanity identities).
    VerifyAll(ReportOpts),
    /// Run a single identity's verification chain.
    Theorem {
        /// Which identity: 1 or 2.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Compare the red-weighted count table against its conjectured sum
    /// side (finite-order evidence only).
    Conjecture(ReportOpts),
    /// Check classical series identities as an engine sanity run.
    Sanity(ReportOpts),
    /// List the admissible colored partitions of a total, one per line.
    Enumerate {
        /// The partition total (brute-force enumeration, capped).
        #[arg(long)]
        n: u32,
        /// Forbidden parts as comma-separated size-color pairs, e.g. "1R"
        /// or "1R,2R,1B"; empty forbids nothing.
        #[arg(long, default_value = "")]
        forbid: String,
    },
    /// Print one triple multisum as a truncated series.
    Multisum {
        /// Sum family: S or T.
        #[arg(long)]
        family: Family,
        /// Shift triple a,b,c — e.g. "3,0,1".
        #[arg(long)]
        abc: String,
        #[arg(long, default_value_t = 40)]
        order: u32,
        /// Specialize x before printing (only x = 1 is supported).
        #[arg(long, value_name = "VALUE")]
        x_eval: Option<u32>,
    },
    /// Search for or re-verify a linear-combination certificate.
    Certificate {
        #[command(subcommand)]
        action: CertAction,
    },
}

#[derive(Subcommand)]
enum CertAction {
    /// Search for a certificate, verify it, and emit it as JSON.
    Find {
        /// Target equation name: proofA … proofE.
        #[arg(long)]
        target: TargetId,
        /// Write the certificate JSON here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Verify a certificate from a JSON file (or the bundled one).
    Check {
        /// Expected target equation; checked against the certificate's
        /// target combination when given.
        #[arg(long)]
        target: Option<TargetId>,
        /// Certificate JSON file; defaults to the bundled certificate.
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Write to stdout, treating a closed pipe as a normal early exit so that
/// piping into `head` and friends does not report a crash.
fn write_stdout(text: &str) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing stdout: {e}");
        std::process::exit(2);
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::VerifyAll(opts) => {
            report_command(opts, |cfg| verify_all(cfg))
        }
        Command::Theorem { which, opts } => report_command(opts, move |cfg| {
            vec![match which {
                1 => verify_theorem1(cfg),
                _ => verify_theorem2(cfg),
            }]
        }),
        Command::Conjecture(opts) => report_command(opts, |cfg| vec![check_conjecture(cfg)]),
        Command::Sanity(opts) => report_command(opts, |cfg| vec![sanity_classical(cfg)]),
        Command::Enumerate { n, forbid } => {
            let forbidden: ForbiddenSet = forbid.parse().map_err(|e| format!("{e}"))?;
            let partitions = enumerate_gamma(n, &forbidden).map_err(|e| format!("{e}"))?;
            let mut lines = String::new();
            for p in &partitions {
                lines.push_str(&format!("{p}\n"));
            }
            write_stdout(&lines);
            Ok(0)
        }
        Command::Multisum {
            family,
            abc,
            order,
            x_eval,
        } => {
            let spec = parse_abc(family, &abc)?;
            let mut series = eval_multisum(&spec, order);
            match x_eval {
                None => {}
                Some(1) => series = series.at_x_one(),
                Some(v) => return Err(format!("only x = 1 evaluation is supported, got {v}")),
            }
            print_series(&series);
            Ok(0)
        }
        Command::Certificate { action } => certificate_command(action),
    }
}

fn report_command<F>(opts: ReportOpts, build: F) -> Result<u8, String>
where
    F: FnOnce(RunConfig) -> Vec<Report>,
{
    let reports = build(RunConfig { order: opts.order });
    for report in &reports {
        write_stdout(&report.to_string());
    }
    if let Some(path) = opts.json {
        let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
        fs::write(&path, json).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(exit_code(&reports) as u8)
}

fn parse_abc(family: Family, abc: &str) -> Result<SumSpec, String> {
    let parts: Vec<&str> = abc.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated shifts, got {abc:?}"));
    }
    let mut vals = [0u32; 3];
    for (slot, text) in vals.iter_mut().zip(&parts) {
        *slot = text
            .parse()
            .map_err(|_| format!("invalid shift {text:?} in {abc:?}"))?;
    }
    Ok(SumSpec::new(family, vals[0], vals[1], vals[2]))
}

fn print_series(series: &TruncSeries) {
    let mut lines = String::new();
    for qe in 0..=series.order() {
        let poly = series.x_poly_at(qe);
        if !poly.is_zero() {
            lines.push_str(&format!("[q^{qe}] {poly}\n"));
        }
    }
    write_stdout(&lines);
}

fn certificate_command(action: CertAction) -> Result<u8, String> {
    match action {
        CertAction::Find { target, out } => match find_certificate(target) {
            Ok(cert) => {
                verify_certificate(&cert).map_err(|e| format!("found but failed to verify: {e}"))?;
                let json = cert.to_json();
                match out {
                    Some(path) => fs::write(&path, json)
                        .map_err(|e| format!("writing {}: {e}", path.display()))?,
                    None => write_stdout(&format!("{json}\n")),
                }
                eprintln!("certificate for {target} verified ({} entries)", cert.entries.len());
                Ok(0)
            }
            Err(CertificateError::WindowExhausted { rounds }) => {
                eprintln!("error: window exhausted after {rounds} growth rounds");
                Ok(3)
            }
            Err(e) => Err(format!("{e}")),
        },
        CertAction::Check { target, input } => {
            let cert = match &input {
                Some(path) => {
                    let json = fs::read_to_string(path)
                        .map_err(|e| format!("reading {}: {e}", path.display()))?;
                    Certificate::from_json(&json).map_err(|e| format!("{e}"))?
                }
                None => qpi::pipeline::golden_certificate(),
            };
            if let Some(id) = target {
                check_target_matches(&cert, id)?;
            }
            verify_certificate(&cert).map_err(|e| format!("{e}"))?;
            eprintln!("certificate verified ({} entries)", cert.entries.len());
            Ok(0)
        }
    }
}

/// Assert that a certificate's target combination (after folding symbols
/// onto their canonical mirror) equals the named target equation.
fn check_target_matches(cert: &Certificate, id: TargetId) -> Result<(), String> {
    if cert.family != id.family() {
        return Err(format!(
            "certificate is for family {}, {id} needs {}",
            cert.family,
            id.family()
        ));
    }
    let fold = |terms: Vec<(SumSpec, RatFn)>| {
        let mut map: BTreeMap<SumSpec, RatFn> = BTreeMap::new();
        for (sym, coeff) in terms {
            let sym = canonical_symbol(sym);
            let entry = map.entry(sym).or_insert_with(RatFn::zero);
            *entry = entry.add(&coeff);
        }
        map.retain(|_, c| !c.is_zero());
        map
    };
    let got = fold(cert.target.clone());
    let want = fold(id.combination().into_iter().collect());
    if got != want {
        return Err(format!("certificate's target combination is not {id}"));
    }
    Ok(())
}
