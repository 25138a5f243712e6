//! The `clogkit` command line. `run` parses arguments, writes results to
//! `out` and diagnostics to `err`, and returns the process exit code:
//! 0 on success, 1 on a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clogkit::distribution::{
    dist_table, dn_limit_type1, dn_limit_type3, fit_type1, iterate_m, m_limit, DEFAULT_GRID,
    DEFAULT_ITERATIONS, DEFAULT_SUM_CAP,
};
use clogkit::expand::{
    convergents, expand, expand_gcf, reduced, sequence_by_name, Expansion, Input, Variant,
    DEFAULT_MAX_TERMS, HARD_MAX_TERMS,
};
use clogkit::gcfpredicates::{check_bounded_gap_ratio, check_divisible_gaps};
use clogkit::intervals::{all_specs, cylinder_endpoints, cylinder_measure, ratio_bounds};
use clogkit::khinchine::{
    classical_khinchine, kl_type1, kl_type2_estimate, kl_type3, term_stats, KhinchineValue,
    KL2_GRID,
};
use clogkit::numtypes::{parse_rational, rational_string};
use clogkit::output::{format_f64, format_sig, DEFAULT_DIGITS};
use clogkit::{Base, BigRational, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "clogkit",
    version,
    about = "Exact continued logarithms and generalized continued fractions"
)]
struct Cli {
    /// Significant digits for printed reals.
    #[arg(long, global = true, env = "CLOGKIT_DIGITS", default_value_t = DEFAULT_DIGITS)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a value as a continued logarithm or gcf.
    Expand(ExpandArgs),
    /// Convergents p_n/q_n of an expansion.
    Convergents(ConvergentArgs),
    /// Rank-n type III cylinders with their exact endpoints and measures.
    Cylinders(CylinderArgs),
    /// Iterate the m_n recurrence and compare against the limit.
    Dist(DistArgs),
    /// Fit the two-parameter type I model to the iterated distribution.
    Fit(FitArgs),
    /// Logarithmic Khinchine constants.
    Constants(ConstantArgs),
    /// Term statistics of one expansion.
    Stats(StatsArgs),
    /// Check a gcf sequence predicate on a prefix.
    GcfCheck(GcfCheckArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct Source {
    /// 1, 2, 3 or gcf.
    #[arg(long = "type", default_value = "3")]
    variant: String,
    /// Base b >= 2 for types I to III.
    #[arg(long, default_value_t = 2)]
    base: u64,
    /// Term sequence for gcf: naturals, factorials, powers:B or type3:B.
    #[arg(long, default_value = "naturals")]
    sequence: String,
    /// Input as p/q, an integer or a decimal.
    #[arg(long)]
    value: String,
    /// Treat a decimal value as exact rather than as a truncated real.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ConvergentArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct CylinderArgs {
    #[arg(long, default_value_t = 2)]
    base: u64,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Largest exponent per coordinate.
    #[arg(long, default_value_t = 3)]
    k_cap: u64,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// 1, 2 or 3.
    #[arg(long = "type", default_value = "3")]
    variant: String,
    #[arg(long, default_value_t = 2)]
    base: u64,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iters: usize,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Truncation of the k-sums.
    #[arg(long, default_value_t = DEFAULT_SUM_CAP)]
    cap: u64,
    /// Emit the term-mass table for k up to this value instead of the grid.
    #[arg(long)]
    table: Option<u64>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, default_value_t = 2)]
    base: u64,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iters: usize,
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_SUM_CAP)]
    cap: u64,
    #[arg(long, default_value_t = 0.9)]
    init_alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    init_beta: f64,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    /// 1, 2, 3 or classical.
    #[arg(long = "type", default_value = "3")]
    variant: String,
    /// Single base.
    #[arg(long, conflicts_with = "base_range")]
    base: Option<u64>,
    /// Inclusive range such as 2..10.
    #[arg(long)]
    base_range: Option<String>,
    /// Series length for the classical constant.
    #[arg(long, default_value_t = 10_000_000)]
    l_cap: u64,
    /// Iterations for the type II estimate.
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iters: usize,
    #[arg(long, default_value_t = KL2_GRID)]
    grid: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long = "type", default_value = "3")]
    variant: String,
    #[arg(long, default_value_t = 2)]
    base: u64,
    /// Input as p/q, an integer or a decimal.
    #[arg(
        long,
        conflicts_with = "random_digits",
        required_unless_present = "random_digits"
    )]
    value: Option<String>,
    /// Use a random decimal in (1, 2) with this many digits.
    #[arg(long)]
    random_digits: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    terms: usize,
    /// Leading terms excluded from the counts.
    #[arg(long, default_value_t = 1)]
    skip: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    BoundedGap,
    DivisibleGaps,
}

#[derive(Args, Debug)]
struct GcfCheckArgs {
    #[arg(long, default_value = "naturals")]
    sequence: String,
    #[arg(long, value_enum)]
    property: Property,
    /// Gap ratio bound M as p/q or an integer.
    #[arg(long, default_value = "1")]
    m: String,
    #[arg(long, default_value_t = 10_000)]
    prefix: u64,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let digits = cli.digits.max(1);
    let result = match cli.command {
        Command::Expand(a) => cmd_expand(a, out),
        Command::Convergents(a) => cmd_convergents(a, digits, out),
        Command::Cylinders(a) => cmd_cylinders(a, out),
        Command::Dist(a) => cmd_dist(a, digits, out),
        Command::Fit(a) => cmd_fit(a, digits, out),
        Command::Constants(a) => cmd_constants(a, digits, out),
        Command::Stats(a) => cmd_stats(a, digits, out),
        Command::GcfCheck(a) => cmd_gcf_check(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn base(b: u64) -> Result<Base, Failure> {
    Base::new(b).map_err(|_| Failure::Usage(format!("base must be at least 2, got {b}")))
}

fn variant(s: &str) -> Result<Variant, Failure> {
    Variant::parse(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn input(value: &str, exact: bool) -> Result<Input, Failure> {
    let v = value.trim();
    if exact || v.contains('/') || !v.contains(['.', 'e', 'E']) {
        Ok(Input::Exact(parse_rational(v)?))
    } else {
        Ok(Input::decimal(v)?)
    }
}

fn run_expansion(s: &Source) -> Result<Expansion, Failure> {
    if s.max_terms == 0 || s.max_terms > HARD_MAX_TERMS {
        return Err(Failure::Usage(format!(
            "max-terms must be in 1..={HARD_MAX_TERMS}"
        )));
    }
    let x = input(&s.value, s.exact)?;
    let v = variant(&s.variant)?;
    Ok(if v == Variant::Gcf {
        expand_gcf(x, sequence_by_name(&s.sequence)?, s.max_terms)?
    } else {
        expand(v, x, base(s.base)?, s.max_terms)?
    })
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn real(x: &BigRational, digits: usize) -> String {
    format_sig(x, digits)
}

fn cmd_expand(a: ExpandArgs, out: &mut dyn Write) -> Outcome {
    let e = run_expansion(&a.source)?;
    match a.format {
        Format::Text => writeln!(out, "{e}")?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["n", "c", "a", "j"])?;
            for (n, t) in e.terms.iter().enumerate() {
                let (c, p) = t
                    .digits()
                    .map(|(c, p)| (c.to_string(), p.to_string()))
                    .unwrap_or_default();
                let j = t.gcf_index().map(|j| j.to_string()).unwrap_or_default();
                w.write_record([n.to_string(), c, p, j])?;
            }
            w.flush()?;
        }
        Format::Json => writeln!(out, "{}", e.to_json())?,
    }
    Ok(())
}

fn cmd_convergents(a: ConvergentArgs, digits: usize, out: &mut dyn Write) -> Outcome {
    let e = run_expansion(&a.source)?;
    let cs = convergents(&e)?;
    let rows: Vec<[String; 5]> = cs
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let (p, q) = reduced(&c.p, &c.q);
            let v = BigRational::new(p, q);
            [
                n.to_string(),
                c.p.to_string(),
                c.q.to_string(),
                rational_string(&v),
                real(&v, digits),
            ]
        })
        .collect();
    match a.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| json!({"n": r[0].parse::<u64>().unwrap(), "p": r[1], "q": r[2], "value": r[3], "approx": r[4]}))
                .collect();
            writeln!(out, "{}", Value::Array(items))?;
        }
        _ => {
            let mut w = csv_writer(out);
            w.write_record(["n", "p", "q", "value", "approx"])?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

fn cmd_cylinders(a: CylinderArgs, out: &mut dyn Write) -> Outcome {
    let b = base(a.base)?;
    if a.rank == 0 {
        return Err(Failure::Usage("rank must be at least 1".into()));
    }
    let specs = all_specs(b, a.rank, a.k_cap);
    let mut w = csv_writer(out);
    w.write_record(["k_path", "l_path", "lo", "hi", "measure"])?;
    for s in specs {
        let iv = cylinder_endpoints(&s)?;
        let m = cylinder_measure(&s)?;
        w.write_record([
            join(&s.ks),
            join(&s.ls),
            rational_string(&iv.lo),
            rational_string(&iv.hi),
            rational_string(&m),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_dist(a: DistArgs, digits: usize, out: &mut dyn Write) -> Outcome {
    let b = base(a.base)?;
    let v = variant(&a.variant)?;
    if v == Variant::Gcf {
        return Err(Failure::Usage("dist supports types 1, 2 and 3".into()));
    }
    let m = iterate_m(v, b, a.grid, a.iters, a.cap)?;
    let f = |x: f64| format_f64(x, digits);
    let mut w = csv_writer(out);
    if let Some(k_max) = a.table {
        let t = dist_table(v, b, &m, k_max)?;
        w.write_record([
            "k",
            "l",
            "mass_iterated",
            "mass_closed_form",
            "bound_lo",
            "bound_hi",
        ])?;
        for (&(k, l), &mass) in &t.masses {
            let closed = match v {
                Variant::TypeI => f(dn_limit_type1(b, k)),
                Variant::TypeIII => f(dn_limit_type3(b, k, l)?),
                _ => String::new(),
            };
            let (lo, hi) = if v == Variant::TypeI {
                (String::new(), String::new())
            } else {
                let (lo, hi) = ratio_bounds(b, k, l);
                (rational_string(&lo), rational_string(&hi))
            };
            w.write_record([k.to_string(), l.to_string(), f(mass), closed, lo, hi])?;
        }
    } else {
        w.write_record(["x", "m_n", "m_limit", "abs_err"])?;
        for (&x, &y) in m.xs.iter().zip(&m.ys) {
            let (lim, e) = match m_limit(v, b, x) {
                Ok(l) => (f(l), f((y - l).abs())),
                Err(_) => (String::new(), String::new()),
            };
            w.write_record([f(x), f(y), lim, e])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_fit(a: FitArgs, digits: usize, out: &mut dyn Write) -> Outcome {
    let b = base(a.base)?;
    let m = iterate_m(Variant::TypeI, b, a.grid, a.iters, a.cap)?;
    let r = fit_type1(b, &m, a.init_alpha, a.init_beta)?;
    let f = |x: f64| format_f64(x, digits);
    let v = json!({
        "base": b.get(),
        "alpha": f(r.alpha),
        "beta": f(r.beta),
        "rss": f(r.rss),
        "sweeps": r.sweeps,
        "converged": r.converged,
    });
    writeln!(out, "{v}")?;
    Ok(())
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("bad base range {s:?}, expected A..B"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_constants(a: ConstantArgs, digits: usize, out: &mut dyn Write) -> Outcome {
    let mut rows: Vec<(String, KhinchineValue)> = Vec::new();
    let key;
    if a.variant.eq_ignore_ascii_case("classical") {
        key = "l_cap";
        rows.push((a.l_cap.to_string(), classical_khinchine(a.l_cap)?));
    } else {
        key = "b";
        let v = variant(&a.variant)?;
        let (lo, hi) = match (&a.base_range, a.base) {
            (Some(r), _) => parse_range(r)?,
            (None, Some(b)) => (b, b),
            (None, None) => (2, 10),
        };
        for bv in lo..=hi {
            let b = base(bv)?;
            let k = match v {
                Variant::TypeI => kl_type1(b),
                Variant::TypeII => kl_type2_estimate(b, a.iters, DEFAULT_SUM_CAP, a.grid)?,
                Variant::TypeIII => kl_type3(b),
                Variant::Gcf => {
                    return Err(Failure::Usage(
                        "constants supports types 1, 2, 3 and classical".into(),
                    ))
                }
            };
            rows.push((bv.to_string(), k));
        }
    }
    let fmt = |k: &KhinchineValue| {
        (
            k.format(digits),
            format_sig(&k.exponent_a.to_rational(), digits),
            format_f64(k.tail_bound, digits),
        )
    };
    match a.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(b, k)| {
                    let (v, e, t) = fmt(k);
                    json!({key: b.parse::<u64>().unwrap(), "value": v, "exponent": e, "tail_bound": t})
                })
                .collect();
            writeln!(out, "{}", Value::Array(items))?;
        }
        _ => {
            let mut w = csv_writer(out);
            w.write_record([key, "value", "exponent", "tail_bound"])?;
            for (b, k) in &rows {
                let (v, e, t) = fmt(k);
                w.write_record([b.as_str(), &v, &e, &t])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn random_decimal(digits: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tail: String = (0..digits)
        .map(|_| char::from(b'0' + rng.gen_range(0..10u8)))
        .collect();
    format!("1.{tail}")
}

fn cmd_stats(a: StatsArgs, digits: usize, out: &mut dyn Write) -> Outcome {
    let b = base(a.base)?;
    let v = variant(&a.variant)?;
    if v == Variant::Gcf {
        return Err(Failure::Usage("stats supports types 1, 2 and 3".into()));
    }
    let x = match (&a.value, a.random_digits) {
        (Some(s), _) => input(s, false)?,
        (None, Some(d)) => Input::decimal(&random_decimal(d, a.seed))?,
        (None, None) => unreachable!("clap requires one of value and random-digits"),
    };
    let max = a.terms.saturating_add(a.skip).min(HARD_MAX_TERMS);
    let e = expand(v, x, b, max)?;
    let s = term_stats(&e, a.skip)?;
    let mut j = s.to_json(digits);
    j["status"] = json!(e.status);
    j["p_0_1"] = json!(format_f64(s.proportion(0, 1), digits));
    writeln!(out, "{j}")?;
    Ok(())
}

fn cmd_gcf_check(a: GcfCheckArgs, out: &mut dyn Write) -> Outcome {
    let seq = sequence_by_name(&a.sequence)?;
    let cert = match a.property {
        Property::BoundedGap => check_bounded_gap_ratio(&seq, &parse_rational(&a.m)?, a.prefix),
        Property::DivisibleGaps => check_divisible_gaps(&seq, a.prefix),
    };
    writeln!(out, "{}", cert.to_json())?;
    Ok(())
}
