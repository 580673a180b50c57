//! The `raynaud` command line. [`run`] parses arguments, dispatches to the
//! library and maps outcomes to exit codes: 0 when every requested check
//! passes, 1 on a verification failure, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bundle::{line_power, make_sym_quotient};
use crate::certificate::{
    bundle_row, certify, curve_summary, line_bundle_rows, write_tables, PointJson, RunConfig,
};
use crate::cohomology::{cocycle_regularity, h0_basis, phi_report, PhiReport, Valuation};
use crate::curve::{curve_init_with_precision, sample_points_seeded, CurveParams, DivisorRec};
use crate::error::{Error, Result};
use crate::ff::DEFAULT_SPLIT_SEED;
use crate::suite::run_suite;
use crate::surface::{adjoint_summands, check_gates, verify_prop_main};

#[derive(Parser, Debug)]
#[command(
    name = "raynaud",
    version,
    about = "Base points of adjoint systems on generalized Raynaud surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    e: u64,
    /// Series precision (relative coefficients); derived from the curve when omitted.
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Largest extension degree searched for fiber points.
    #[arg(long, default_value_t = 8)]
    kmax: u32,
    /// Number of points Q to sweep.
    #[arg(long, default_value_t = 12)]
    fibers: usize,
    #[arg(long, default_value_t = DEFAULT_SPLIT_SEED)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// `O(d inf)` for `d` in `--dmin..=--dmax`.
    Line,
    /// `Sq^r(-Delta)` for every `r`.
    SymQuotient,
    /// `L^i(-Delta)` for `0 <= i <= q`.
    LinePower,
    /// Adjoint summands at the first sampled point.
    Adjoint,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisibility and (★) gates.
    Gates {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value_t = 1)]
        m: i64,
    },
    /// Genus, Weierstrass semigroup and series identities.
    CurveInfo(CurveArgs),
    /// Dimension table for a bundle family (CSV).
    H0 {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[arg(long, value_enum, default_value_t = Family::Line)]
        family: Family,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        dmin: i64,
        #[arg(long, default_value_t = 30, allow_negative_numbers = true)]
        dmax: i64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Connecting-map reports and cocycle checks for every `r` (and every `m` unless given).
    Phi {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: Option<i64>,
    },
    /// Compare `h0` with and without `Q` over a sweep of points.
    PropMain {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Full base-point certificate (JSON, plus CSV tables when --out is given).
    Certify {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every verification tier.
    Suite,
}

#[derive(Serialize)]
struct Failure<'a> {
    error: &'a str,
    reason: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "NotPrime",
        Error::DegreeTooLarge { .. } => "DegreeTooLarge",
        Error::NotPPower { .. } => "NotPPower",
        Error::ZeroPolynomial => "ZeroPolynomial",
        Error::PrecisionTooLow { .. } => "PrecisionTooLow",
        Error::DegenerateParams(_) => "DegenerateParams",
        Error::SmoothnessCheckFailed(_) => "SmoothnessCheckFailed",
        Error::ZeroFiberValue => "ZeroFiberValue",
        Error::UnsupportedDivisor(_) => "UnsupportedDivisor",
        Error::RankOutOfRange { .. } => "RankOutOfRange",
        Error::BoundInstability { .. } => "BoundInstability",
        Error::NotAGlobalSection(_) => "NotAGlobalSection",
        Error::GateFailure(_) => "GateFailure",
        Error::InadmissiblePoint(_) => "InadmissiblePoint",
        Error::MixedSurfaces => "MixedSurfaces",
        Error::NonMonomialInverse { .. } => "NonMonomialInverse",
        Error::FieldMismatch(_) => "FieldMismatch",
        Error::Io(_) => "Io",
    }
}

fn fail_line(kind: &str, reason: String) -> String {
    serde_json::to_string(&Failure {
        error: kind,
        reason,
    })
    .expect("failure serializes")
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

struct Outcome {
    stdout: String,
    pass: bool,
    reason: Option<String>,
}

fn ok(stdout: String, pass: bool, reason: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(Outcome {
        stdout,
        pass,
        reason: (!pass).then(reason),
    })
}

/// Runs the command line and returns the exit code; output goes to the given writers.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            if let Some(r) = o.reason {
                let _ = writeln!(err, "{}", fail_line("VerificationFailed", r));
            }
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", fail_line(error_kind(&e), e.to_string()));
            1
        }
    }
}

/// Entry point used by the binary: process arguments and standard streams.
pub fn run(argv: Vec<OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Gates { p, n, e, m } => {
            let g = check_gates(p, n, e, m)?;
            let reason = g.violations.join("; ");
            ok(json(&g), g.pass(), || reason)
        }
        Command::CurveInfo(c) => {
            let ctx = curve_init_with_precision(CurveParams::new(c.p, c.n, c.e), c.precision)?;
            let s = curve_summary(&ctx)?;
            let failed: Vec<String> = s
                .identity_checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.clone())
                .collect();
            ok(json(&s), failed.is_empty(), || {
                format!("failed checks: {}", failed.join(", "))
            })
        }
        Command::H0 {
            curve,
            m,
            family,
            dmin,
            dmax,
            sweep,
        } => h0_table(&curve, m, family, dmin, dmax, &sweep),
        Command::Phi { curve, m } => phi_command(&curve, m),
        Command::PropMain { curve, m, sweep } => {
            let params = check_gates(curve.p, curve.n, curve.e, m)?.params()?;
            let ctx = curve_init_with_precision(
                CurveParams::new(curve.p, curve.n, curve.e),
                curve.precision,
            )?;
            let points = sample_points_seeded(&ctx, sweep.fibers, sweep.kmax, sweep.seed)?;
            #[derive(Serialize)]
            struct Row {
                #[serde(rename = "Q")]
                q: PointJson,
                #[serde(rename = "h0_noQ")]
                h0_no_q: usize,
                #[serde(rename = "h0_withQ")]
                h0_with_q: usize,
                iso: bool,
            }
            let rows: Vec<Row> = points
                .iter()
                .map(|pt| {
                    let r = verify_prop_main(&ctx, &params, pt)?;
                    Ok(Row {
                        q: PointJson::of(pt),
                        h0_no_q: r.h0_no_q,
                        h0_with_q: r.h0_with_q,
                        iso: r.iso,
                    })
                })
                .collect::<Result<_>>()?;
            let iso = rows.iter().filter(|r| r.iso).count();
            let total = rows.len();
            ok(json(&rows), iso > 0, || {
                format!("no isomorphism among {total} points")
            })
        }
        Command::Certify {
            curve,
            m,
            sweep,
            out,
        } => {
            let cfg = RunConfig {
                command: "certify".into(),
                p: curve.p,
                n: curve.n,
                e: curve.e,
                m,
                kmax: sweep.kmax,
                fibers: sweep.fibers,
                precision: curve.precision,
                out: out.clone(),
                seed: sweep.seed,
            };
            let cert = certify(&cfg)?;
            let body = cert.to_json();
            let stdout = match &out {
                Some(path) => {
                    std::fs::write(path, &body)?;
                    let mut written = vec![path.clone()];
                    written.extend(write_tables(&cert, path)?);
                    written
                        .iter()
                        .map(|p| format!("wrote {}\n", p.display()))
                        .collect()
                }
                None => body,
            };
            let verdict = cert.base_point.verdict;
            ok(stdout, cert.passes(), || format!("verdict {verdict:?}"))
        }
        Command::Suite => {
            let results = run_suite();
            let stdout: String = results.iter().map(|r| r.line() + "\n").collect();
            let failed: Vec<String> = results
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.id.to_string())
                .collect();
            ok(stdout, failed.is_empty(), || {
                format!("failed criteria: {}", failed.join(", "))
            })
        }
    }
}

fn h0_table(
    curve: &CurveArgs,
    m: i64,
    family: Family,
    dmin: i64,
    dmax: i64,
    sweep: &SweepArgs,
) -> Result<Outcome> {
    let ctx =
        curve_init_with_precision(CurveParams::new(curve.p, curve.n, curve.e), curve.precision)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    let mut pass = true;
    if family == Family::Line {
        w.write_record(["name", "degree", "h0", "h1", "chi", "semigroup_count"])
            .map_err(csv_err)?;
        for (row, count) in line_bundle_rows(&ctx, dmin..=dmax)? {
            pass &= row.riemann_roch && row.h0 == count;
            w.write_record([
                row.name,
                row.degree.to_string(),
                row.h0.to_string(),
                row.h1.to_string(),
                row.chi.to_string(),
                count.to_string(),
            ])
            .map_err(csv_err)?;
        }
    } else {
        let params = check_gates(curve.p, curve.n, curve.e, m)?.params()?;
        let delta = DivisorRec::at_infinity(-params.big_n);
        let q = params.q;
        let bundles = match family {
            Family::SymQuotient => (0..=q - 2)
                .map(|r| make_sym_quotient(&ctx, r, delta.clone()))
                .collect::<Result<Vec<_>>>()?,
            Family::LinePower => (0..=q)
                .map(|i| line_power(&ctx, i, delta.clone()))
                .collect::<Result<Vec<_>>>()?,
            _ => {
                let pt = sample_points_seeded(&ctx, 1, sweep.kmax, sweep.seed)?
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::InadmissiblePoint("no admissible point found".into()))?;
                adjoint_summands(&ctx, &params, &pt)?
                    .into_iter()
                    .map(|s| s.bundle)
                    .filter(|b| b.rank > 0)
                    .collect()
            }
        };
        w.write_record(["name", "rank", "degree", "h0", "h1", "chi"])
            .map_err(csv_err)?;
        for b in &bundles {
            let row = bundle_row(&ctx, b)?;
            pass &= row.riemann_roch;
            w.write_record([
                row.name,
                row.rank.to_string(),
                row.degree.to_string(),
                row.h0.to_string(),
                row.h1.to_string(),
                row.chi.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let stdout = String::from_utf8(bytes).expect("csv output is utf-8");
    ok(stdout, pass, || "Riemann-Roch or semigroup mismatch".into())
}

#[derive(Serialize)]
struct PhiEntry {
    report: PhiReport,
    sections_checked: usize,
    min_valuation: Option<i64>,
    cocycle_bound: i64,
    cocycle_pass: bool,
}

fn phi_command(curve: &CurveArgs, m: Option<i64>) -> Result<Outcome> {
    let ctx =
        curve_init_with_precision(CurveParams::new(curve.p, curve.n, curve.e), curve.precision)?;
    let q = ctx.q() as i64;
    let ms: Vec<i64> = match m {
        Some(m) => vec![m],
        None => (1..=q).collect(),
    };
    let mut entries = Vec::new();
    for m in ms {
        check_gates(curve.p, curve.n, curve.e, m)?.params()?;
        for r in 0..=q - 2 {
            let report = phi_report(&ctx, r, m)?;
            let bound = report.big_n - ctx.params.e as i64 * (q - 2);
            let basis = h0_basis(
                &ctx,
                &make_sym_quotient(&ctx, r + 1, DivisorRec::at_infinity(-report.big_n))?,
            )?;
            let mut min_valuation: Option<i64> = None;
            let mut cocycle_pass = true;
            for s in &basis.sections {
                let chk = cocycle_regularity(&ctx, r, m, s)?;
                cocycle_pass &= chk.pass && chk.min_valuation.at_least(bound);
                if let Valuation::Finite(v) | Valuation::AtLeast(v) = chk.min_valuation {
                    min_valuation = Some(min_valuation.map_or(v, |x| x.min(v)));
                }
            }
            entries.push(PhiEntry {
                report,
                sections_checked: basis.dim,
                min_valuation,
                cocycle_bound: bound,
                cocycle_pass,
            });
        }
    }
    let pass = entries
        .iter()
        .all(|e| !e.report.surjective && e.report.w_codim >= 1 && e.cocycle_pass);
    ok(json(&entries), pass, || {
        "a connecting map is surjective or a cocycle bound fails".into()
    })
}
