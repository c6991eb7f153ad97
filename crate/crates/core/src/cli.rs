//! `primseq` command line. Every subcommand is a thin adapter over library
//! calls; output is exact `p/q` unless `--decimal` is given.
//!
//! Exit codes: 0 success, 1 domain outcome (inadmissible input, infeasible
//! prefix, rejected check), 2 usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;

use crate::admissibility::{
    certify_truncated, check_cm_prefix, hankel_check, quadratic_form, Verdict,
};
use crate::bounds::{
    cdf_bound_with, default_tol, envelope_sweep, moment_bound_with, recover_extremizer,
    BoundOptions, BoundResult, ConstraintPrefix, EnvelopePoint, Side,
};
use crate::distzoo::parse_dist_spec;
use crate::error::{Error, Result};
use crate::exactmath::{parse_rational, to_decimal, to_fixed, Polynomial, Rational};
use crate::seqcore::{
    check_elementary, format_moment_file, format_sequence_file, gamma_values,
    moments_from_primitive, parse_moment_file, parse_sequence_file, primitive_from_moments,
    MomentVector, NormalizedSeq, PrimitiveSeq,
};

/// Significant digits under `--decimal`.
pub const DECIMAL_DIGITS: usize = 12;
/// Digits after the point in envelope plot files.
pub const PLOT_PLACES: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "primseq", version, about = "Primitive sequences and sharp truncated-moment bounds")]
struct Cli {
    /// Render numbers as decimals with 12 significant digits.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Primitive sequence of a distribution up to order m.
    Seq {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between raw moments and primitive coordinates.
    Convert {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Screen a sequence file for admissibility.
    Check {
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        certify: bool,
        #[arg(long, requires = "certify")]
        grid: Option<usize>,
    },
    /// Sharp bound on F(x0) or on a higher primitive coordinate.
    Bound {
        #[arg(long, conflicts_with = "seq", required_unless_present = "seq")]
        dist: Option<String>,
        #[arg(long)]
        seq: Option<PathBuf>,
        #[arg(long)]
        order: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "k", required_unless_present = "k")]
        x0: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Both sides when omitted.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Upper and lower CDF bounds at x0 for m = 1..mmax.
    Envelope {
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long)]
        mmax: usize,
        #[arg(long)]
        out_upper: PathBuf,
        #[arg(long)]
        out_lower: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    M2p,
    P2m,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Upper,
    Lower,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Upper => Side::Upper,
            SideArg::Lower => Side::Lower,
        }
    }
}

/// Number rendering shared by all subcommands.
#[derive(Clone, Copy, Debug, Default)]
pub struct Render {
    pub decimal: bool,
}

impl Render {
    pub fn q(&self, x: &Rational) -> String {
        if self.decimal {
            to_decimal(x, DECIMAL_DIGITS)
        } else {
            x.to_string()
        }
    }

    pub fn poly(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.coeffs().iter().map(|c| self.q(c)).collect::<Vec<_>>().join(" ")
    }
}

/// Runs with the process's stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let r = Render { decimal: cli.decimal };
    match dispatch(cli.command, r) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Usage(_) | Error::Io { .. } => 2,
        _ => 1,
    }
}

fn dispatch(cmd: Command, r: Render) -> Result<(String, i32)> {
    match cmd {
        Command::Seq { dist, order, out } => {
            let text = seq_text(&dist, order, r)?;
            match out {
                Some(p) => {
                    write_file(&p, &text)?;
                    Ok((String::new(), 0))
                }
                None => Ok((text, 0)),
            }
        }
        Command::Convert { direction, b, a, input } => {
            let text = read_file(&input)?;
            let b = parse_rational(&b)?;
            let a = a.as_deref().map(parse_rational).transpose()?;
            let s = match direction {
                Direction::M2p => convert_m2p(&text, b, a.unwrap_or_default(), r)?,
                Direction::P2m => convert_p2m(&text, &b, a.as_ref(), r)?,
            };
            Ok((s, 0))
        }
        Command::Check { seq, certify, grid } => {
            let ps = parse_sequence_file(&read_file(&seq)?)?;
            let grid = if certify { Some(grid.unwrap_or(4 * ps.order() + 1)) } else { None };
            check_text(&ps, grid, r)
        }
        Command::Bound { dist, seq, order, x0, k, side, tol } => {
            let prefix = match (dist, seq) {
                (Some(d), _) => ConstraintPrefix::from_distribution(&parse_dist_spec(&d)?, order)?,
                (None, Some(p)) => prefix_from_file(&read_file(&p)?, order)?,
                (None, None) => unreachable!("clap requires --dist or --seq"),
            };
            let tol = match tol {
                Some(t) => parse_rational(&t)?,
                None => default_tol(),
            };
            if !tol.is_positive() {
                return Err(Error::Usage("--tol must be positive".into()));
            }
            let target = match (x0, k) {
                (Some(x), _) => Target::Cdf(parse_rational(&x)?),
                (None, Some(k)) => Target::Moment(k),
                (None, None) => unreachable!("clap requires --x0 or --k"),
            };
            let sides = match side {
                Some(s) => vec![s.into()],
                None => vec![Side::Upper, Side::Lower],
            };
            let mut text = String::new();
            for (i, s) in sides.into_iter().enumerate() {
                if i > 0 {
                    text.push('\n');
                }
                let res = bound(&prefix, &target, s, &tol)?;
                text.push_str(&bound_text(&res, &prefix, r)?);
            }
            Ok((text, 0))
        }
        Command::Envelope { dist, x0, mmax, out_upper, out_lower } => {
            let d = parse_dist_spec(&dist)?;
            let x0 = parse_rational(&x0)?;
            let pts = envelope_sweep(&d, &x0, mmax, &default_tol())?;
            emit_envelope_files(&pts, &out_upper, &out_lower)?;
            Ok((envelope_text(&pts, r), 0))
        }
    }
}

/// Bound target as given on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Cdf(Rational),
    Moment(usize),
}

pub fn bound(prefix: &ConstraintPrefix, target: &Target, side: Side, tol: &Rational) -> Result<BoundResult> {
    let opts = BoundOptions::with_tol(tol.clone());
    match target {
        Target::Cdf(x0) => cdf_bound_with(prefix, x0, side, &opts),
        Target::Moment(k) => moment_bound_with(prefix, *k, side, &opts),
    }
}

fn read_file(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io { path: p.display().to_string(), message: e.to_string() })
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    fs::write(p, text).map_err(|e| Error::Io { path: p.display().to_string(), message: e.to_string() })
}

fn sequence_text(ps: &PrimitiveSeq, r: Render) -> String {
    if !r.decimal {
        return format_sequence_file(ps);
    }
    let mut out = format!("interval {} {}\n", r.q(ps.interval().a()), r.q(ps.interval().b()));
    for (n, e) in ps.eps().iter().enumerate() {
        out.push_str(&format!("{n} {}\n", r.q(e)));
    }
    out
}

pub fn seq_text(dist: &str, order: usize, r: Render) -> Result<String> {
    let d = parse_dist_spec(dist)?;
    Ok(sequence_text(&d.eps(order)?, r))
}

pub fn convert_m2p(text: &str, b: Rational, a: Rational, r: Render) -> Result<String> {
    let mv = parse_moment_file(text, b)?;
    Ok(sequence_text(&primitive_from_moments(&mv, &a)?, r))
}

pub fn convert_p2m(text: &str, b: &Rational, a: Option<&Rational>, r: Render) -> Result<String> {
    let ps = parse_sequence_file(text)?;
    let iv = ps.interval();
    if iv.b() != b || a.is_some_and(|a| a != iv.a()) {
        return Err(Error::Usage(format!("--b/--a disagree with the file's interval {iv}")));
    }
    let mv: MomentVector = moments_from_primitive(&ps);
    if !r.decimal {
        return Ok(format_moment_file(&mv));
    }
    // reparse the exact rendering to reach the values
    let exact = format_moment_file(&mv);
    Ok(exact
        .lines()
        .map(|l| {
            let (n, v) = l.split_once(' ').expect("moment rows have two fields");
            format!("{n} {}\n", r.q(&parse_rational(v).expect("own output parses")))
        })
        .collect())
}

fn prefix_from_file(text: &str, order: usize) -> Result<ConstraintPrefix> {
    let ps = parse_sequence_file(text)?;
    if ps.order() < order {
        return Err(Error::Usage(format!(
            "sequence file has order {}, fewer than --order {order}",
            ps.order()
        )));
    }
    ConstraintPrefix::new(ps.truncate(order))
}

/// Screens (and with `grid`, certifies) a sequence. The exit code is 1 when
/// the sequence is rejected.
pub fn check_text(ps: &PrimitiveSeq, grid: Option<usize>, r: Render) -> Result<(String, i32)> {
    let (text, v) = check_report(ps, grid, r)?;
    Ok((text, i32::from(v == Verdict::Rejected)))
}

/// Report text and overall verdict; without a grid the best possible
/// verdict is `PASSES_NECESSARY`.
pub fn check_report(ps: &PrimitiveSeq, grid: Option<usize>, r: Render) -> Result<(String, Verdict)> {
    let mut out = format!("interval {} {}\norder {}\n", r.q(ps.interval().a()), r.q(ps.interval().b()), ps.order());
    let mut rejected = false;
    let elementary = check_elementary(ps);
    for v in &elementary {
        out.push_str(&format!("violation elementary {v}\n"));
    }
    rejected |= !elementary.is_empty();
    if let Some(n) = grid {
        // the certification report carries its own screen evidence
        let report = certify_truncated(ps, n)?;
        out.push_str(&report.to_text());
        let v = if rejected { Verdict::Rejected } else { report.verdict };
        return Ok((out, v));
    }
    let g = NormalizedSeq::from_raw(gamma_values(ps))?;
    let cm = check_cm_prefix(&g);
    for v in &cm {
        out.push_str(&format!("violation cm n={} k={} value={}\n", v.n, v.k, r.q(&v.value)));
    }
    rejected |= !cm.is_empty();
    if g.order() >= 1 {
        for b in hankel_check(&g).failures() {
            rejected = true;
            out.push_str(&format!("violation hankel {} size={}", b.family, b.matrix.len()));
            if let Some(v) = &b.direction {
                out.push_str(&format!(" value={}", r.q(&quadratic_form(&b.matrix, v))));
            }
            out.push('\n');
            if let Some(c) = b.certificate() {
                out.push_str(&format!("certificate-y {}\n", r.poly(&c)));
            }
        }
    }
    let v = if rejected { Verdict::Rejected } else { Verdict::PassesNecessary };
    out.push_str(&format!("verdict {v}\n"));
    Ok((out, v))
}

/// Value line, enclosure, certificate in the `(b - x)` basis, and the
/// extremal atoms.
pub fn bound_text(res: &BoundResult, prefix: &ConstraintPrefix, r: Render) -> Result<String> {
    let ext = recover_extremizer(res, prefix)?;
    let mut out = format!("{}\n", r.q(res.value()));
    out.push_str(&format!("side {}\n", res.side));
    out.push_str(&format!("target {}\n", res.kind));
    out.push_str(&format!("enclosure {} {}\n", r.q(&res.lo), r.q(&res.hi)));
    out.push_str(&format!("width {}\n", r.q(&res.width())));
    out.push_str(&format!("iterations {}\n", res.iterations));
    out.push_str(&format!("certificate b={} {}\n", r.q(prefix.interval().b()), r.poly(&res.certificate)));
    out.push_str("extremizer\n");
    for (x, w) in ext.points().iter().zip(ext.weights()) {
        out.push_str(&format!("atom {} {}\n", r.q(x), r.q(w)));
    }
    Ok(out)
}

pub fn envelope_text(pts: &[EnvelopePoint], r: Render) -> String {
    pts.iter()
        .map(|p| format!("{} {} {}\n", p.m, r.q(&p.upper), r.q(&p.lower)))
        .collect()
}

/// Exact sidecar path next to a plot file.
pub fn sidecar_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".exact");
    PathBuf::from(s)
}

/// Plot rows `<m> <value>` with 12 digits after the point, plus a `.exact`
/// sidecar carrying the same rows as `p/q`.
pub fn emit_envelope_files(points: &[EnvelopePoint], out_upper: &Path, out_lower: &Path) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Domain("empty envelope sweep".into()));
    }
    let plot = |f: fn(&EnvelopePoint) -> &Rational| -> (String, String) {
        let mut dec = String::new();
        let mut exact = String::new();
        for p in points {
            dec.push_str(&format!("{} {}\n", p.m, to_fixed(f(p), PLOT_PLACES)));
            exact.push_str(&format!("{} {}\n", p.m, f(p)));
        }
        (dec, exact)
    };
    for (path, (dec, exact)) in [(out_upper, plot(|p| &p.upper)), (out_lower, plot(|p| &p.lower))] {
        write_file(path, &dec)?;
        write_file(&sidecar_path(path), &exact)?;
    }
    Ok(())
}
