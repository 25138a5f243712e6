//! Iteration of the term-distribution recurrences `m_n`, their closed-form
//! limits, term masses and the type I model fit.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expand::Variant;
use crate::numtypes::Base;
use crate::precision::CompensatedSum;

pub const DEFAULT_GRID: usize = 101;
pub const DEFAULT_ITERATIONS: usize = 10;
pub const DEFAULT_SUM_CAP: u64 = 100;

/// A function sampled on `[lo, hi]`, evaluated by linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub lo: f64,
    pub hi: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Spacing when the samples are equally spaced.
    step: Option<f64>,
}

impl GridFunction {
    /// Samples `f` at `n` equally spaced points.
    pub fn uniform(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 3 || !(lo < hi) {
            return Err(Error::InvalidParameter(
                "grid needs at least 3 points on a proper interval".into(),
            ));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + i as f64 * h })
            .collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Ok(GridFunction {
            lo,
            hi,
            xs,
            ys,
            step: Some(h),
        })
    }

    /// Arbitrary strictly increasing samples.
    pub fn from_samples(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 3 || xs.len() != ys.len() || xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "samples must be strictly increasing, at least 3".into(),
            ));
        }
        Ok(GridFunction {
            lo: xs[0],
            hi: *xs.last().unwrap(),
            xs,
            ys,
            step: None,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_offset(x - self.lo)
    }

    /// Value at `lo + d`. Taking the offset directly keeps full relative
    /// precision for points very close to the left endpoint.
    pub fn eval_offset(&self, d: f64) -> f64 {
        let n = self.xs.len();
        if d <= 0.0 {
            return self.ys[0];
        }
        if d >= self.hi - self.lo {
            return self.ys[n - 1];
        }
        let (i, t) = match self.step {
            Some(h) => {
                let u = d / h;
                let i = (u as usize).min(n - 2);
                (i, u - i as f64)
            }
            None => {
                let x = self.lo + d;
                let i = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
                (
                    i,
                    (d - (self.xs[i] - self.lo)) / (self.xs[i + 1] - self.xs[i]),
                )
            }
        };
        self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
    }

    /// `max |self - f|` over the samples.
    pub fn sup_distance(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(&x, &y)| (y - f(x)).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.ys.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Domain of `m_n` for a variant: `[1, b]` for type I, `[1, 2]` otherwise.
pub fn domain(variant: Variant, b: Base) -> Result<(f64, f64)> {
    match variant {
        Variant::TypeI => Ok((1.0, b.get() as f64)),
        Variant::TypeII | Variant::TypeIII => Ok((1.0, 2.0)),
        Variant::Gcf => Err(Error::InvalidParameter(
            "no distribution recurrence for gcf".into(),
        )),
    }
}

/// `m_0`: `(x-1)/(b-1)` for type I, `x-1` otherwise.
pub fn seed(variant: Variant, b: Base, grid_points: usize) -> Result<GridFunction> {
    let (lo, hi) = domain(variant, b)?;
    GridFunction::uniform(lo, hi, grid_points, |x| (x - 1.0) / (hi - lo))
}

fn powers(b: Base, cap: u64) -> Vec<f64> {
    let inv = 1.0 / b.get() as f64;
    let mut v = Vec::with_capacity(cap as usize + 1);
    let mut p = 1.0;
    for _ in 0..=cap {
        v.push(p);
        p *= inv;
    }
    v
}

/// One application of the recurrence at the point `x`.
fn step_at(variant: Variant, b: Base, m: &GridFunction, x: f64, bk: &[f64]) -> f64 {
    let bf = b.get() as f64;
    let mut s = CompensatedSum::default();
    for &p in bk {
        match variant {
            Variant::TypeI => {
                let d = (bf - 1.0) * p;
                s.add(m.eval_offset(d) - m.eval_offset(d / x));
            }
            Variant::TypeII => {
                for l in 1..b.get() {
                    let lf = l as f64;
                    let hi = p / lf;
                    let lo = (p / (lf * x)).max(p / (lf + 1.0));
                    s.add(m.eval_offset(hi) - m.eval_offset(lo));
                }
            }
            _ => {
                for l in 1..b.get() {
                    let lf = l as f64;
                    s.add(m.eval_offset(p / lf) - m.eval_offset(p / (x + lf - 1.0)));
                }
            }
        }
    }
    s.value()
}

fn step(variant: Variant, b: Base, m: &GridFunction, bk: &[f64]) -> GridFunction {
    let mut ys: Vec<f64> =
        m.xs.iter()
            .map(|&x| step_at(variant, b, m, x, bk))
            .collect();
    let n = ys.len();
    ys[0] = 0.0;
    ys[n - 1] = 1.0;
    GridFunction { ys, ..m.clone() }
}

/// `m_0, m_1, ..., m_iterations` on an equally spaced grid, each `k`-sum
/// truncated after `k = sum_cap`.
pub fn iterate_m_history(
    variant: Variant,
    b: Base,
    grid_points: usize,
    iterations: usize,
    sum_cap: u64,
) -> Result<Vec<GridFunction>> {
    if sum_cap < 1 {
        return Err(Error::InvalidParameter("sum_cap must be at least 1".into()));
    }
    let bk = powers(b, sum_cap);
    let mut out = vec![seed(variant, b, grid_points)?];
    for _ in 0..iterations {
        let next = step(variant, b, out.last().unwrap(), &bk);
        out.push(next);
    }
    Ok(out)
}

/// `m_iterations` on an equally spaced grid.
pub fn iterate_m(
    variant: Variant,
    b: Base,
    grid_points: usize,
    iterations: usize,
    sum_cap: u64,
) -> Result<GridFunction> {
    let mut h = iterate_m_history(variant, b, grid_points, iterations, sum_cap)?;
    Ok(h.pop().unwrap())
}

fn check_range(x: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&x) {
        return Err(Error::OutOfDomain(
            x.to_string(),
            lo.to_string(),
            hi.to_string(),
        ));
    }
    Ok(())
}

/// `log(b x/(x+b-1))` at `x = 1 + d`, written to stay accurate for small `d`.
fn log_core(b: f64, d: f64) -> f64 {
    d.ln_1p() - (d / b).ln_1p()
}

fn type1_scale(b: f64) -> f64 {
    ((b - 1.0) * (b - 1.0) / (2.0 * b - 1.0)).ln_1p()
}

fn type3_scale(b: f64) -> f64 {
    ((b - 1.0) / (b + 1.0)).ln_1p()
}

/// `log(bx/(x+b-1)) / log(b^2/(2b-1))` on `[1, b]`.
pub fn m_limit_type1(b: Base, x: f64) -> Result<f64> {
    let bf = b.get() as f64;
    check_range(x, 1.0, bf)?;
    Ok(log_core(bf, x - 1.0) / type1_scale(bf))
}

/// `log(bx/(x+b-1)) / log(2b/(b+1))` on `[1, 2]`.
pub fn m_limit_type3(b: Base, x: f64) -> Result<f64> {
    check_range(x, 1.0, 2.0)?;
    let bf = b.get() as f64;
    Ok(log_core(bf, x - 1.0) / type3_scale(bf))
}

/// Closed-form limit of `m_n` for types I and III.
pub fn m_limit(variant: Variant, b: Base, x: f64) -> Result<f64> {
    match variant {
        Variant::TypeI => m_limit_type1(b, x),
        Variant::TypeIII => m_limit_type3(b, x),
        _ => Err(Error::InvalidParameter(
            "no closed form for this variant".into(),
        )),
    }
}

/// Closed-form limit sampled on the variant's grid.
pub fn limit_grid(variant: Variant, b: Base, grid_points: usize) -> Result<GridFunction> {
    let (lo, hi) = domain(variant, b)?;
    m_limit(variant, b, lo)?;
    GridFunction::uniform(lo, hi, grid_points, |x| {
        m_limit(variant, b, x).unwrap_or(f64::NAN)
    })
}

/// Mass of the term `l b^k` under the distribution `m`, as the
/// non-negative difference `m(1 + 1/(l b^k)) - m(1 + 1/((l+1) b^k))`;
/// for type I (where `l = 1`) the arguments are `1 + (b-1) b^{-k}` and
/// `1 + (b-1) b^{-(k+1)}`.
pub fn dn_mass(variant: Variant, b: Base, m: &GridFunction, k: u64, l: u64) -> Result<f64> {
    let bf = b.get() as f64;
    let bk = bf.powi(-(k.min(i32::MAX as u64) as i32));
    match variant {
        Variant::TypeI => {
            if l != 1 {
                return Err(Error::InvalidDigit { digit: l, max: 1 });
            }
            let d = (bf - 1.0) * bk;
            Ok(m.eval_offset(d) - m.eval_offset(d / bf))
        }
        Variant::TypeII | Variant::TypeIII => {
            if l == 0 || l >= b.get() {
                return Err(Error::InvalidDigit {
                    digit: l,
                    max: b.get() - 1,
                });
            }
            let lf = l as f64;
            Ok(m.eval_offset(bk / lf) - m.eval_offset(bk / (lf + 1.0)))
        }
        Variant::Gcf => Err(Error::InvalidParameter(
            "no distribution recurrence for gcf".into(),
        )),
    }
}

/// Limiting type III mass
/// `log[(l b^k + 1)((l+1) b^{k+1} + 1) / ((l b^{k+1} + 1)((l+1) b^k + 1))] / log(2b/(b+1))`.
pub fn dn_limit_type3(b: Base, k: u64, l: u64) -> Result<f64> {
    if l == 0 || l >= b.get() {
        return Err(Error::InvalidDigit {
            digit: l,
            max: b.get() - 1,
        });
    }
    let bf = b.get() as f64;
    let bk = bf.powi(-(k.min(i32::MAX as u64) as i32));
    let u = bk / l as f64;
    let v = bk / (l as f64 + 1.0);
    Ok((log_core(bf, u) - log_core(bf, v)) / type3_scale(bf))
}

/// Limiting type I mass of the term `b^k`,
/// `log(1 + b^k (b-1)^3 / (b^{k+1} + b - 1)^2) / log(b^2/(2b-1))`.
pub fn dn_limit_type1(b: Base, k: u64) -> f64 {
    let bf = b.get() as f64;
    let d = (bf - 1.0) * bf.powi(-(k.min(i32::MAX as u64) as i32));
    (log_core(bf, d) - log_core(bf, d / bf)) / type1_scale(bf)
}

/// Term masses indexed by `(k, l)` for `k <= k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistTable {
    pub b: Base,
    pub variant: Variant,
    pub masses: BTreeMap<(u64, u64), f64>,
    /// Bound `2 b^{-k_max}` on the mass of all omitted terms.
    pub tail_bound: f64,
}

impl DistTable {
    pub fn total(&self) -> f64 {
        let mut s = CompensatedSum::default();
        self.masses.values().for_each(|&v| s.add(v));
        s.value()
    }
}

pub fn dist_table(variant: Variant, b: Base, m: &GridFunction, k_max: u64) -> Result<DistTable> {
    let ls: Vec<u64> = if variant == Variant::TypeI {
        vec![1]
    } else {
        (1..b.get()).collect()
    };
    let mut masses = BTreeMap::new();
    for k in 0..=k_max {
        for &l in &ls {
            masses.insert((k, l), dn_mass(variant, b, m, k, l)?);
        }
    }
    let tail_bound = 2.0 * (b.get() as f64).powi(-(k_max.min(i32::MAX as u64) as i32));
    Ok(DistTable {
        b,
        variant,
        masses,
        tail_bound,
    })
}

/// Left side of the identity
/// `sum_k sum_l b^{-k}/(x+l-1)^2 / ((1 + b^{-k}/(x+l-1)) (b + b^{-k}/(x+l-1))) = 1/(x(x+b-1))`,
/// truncated after `k = k_cap`.
pub fn reciprocal_identity_sum(b: Base, x: f64, k_cap: u64) -> f64 {
    let mut s = CompensatedSum::default();
    let bf = b.get() as f64;
    for p in powers(b, k_cap) {
        for l in 1..b.get() {
            let w = x + l as f64 - 1.0;
            let t = p / w;
            s.add(p / (w * w) / ((1.0 + t) * (bf + t)));
        }
    }
    s.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub rss: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// `log((a x + c)/(x + a + c - 1)) / log((b a + c)/(a + c + b - 1))`.
/// At `a = 1` both logarithms vanish; the model is continued there by its
/// limit `(x-1)(b+c) / ((x+c)(b-1))`. NaN where `a + c <= 0` or `b a + c <= 0`.
pub fn type1_model(b: f64, alpha: f64, beta: f64, x: f64) -> f64 {
    if !(alpha + beta > 0.0 && b * alpha + beta > 0.0) {
        return f64::NAN;
    }
    if (alpha - 1.0).abs() < 1e-7 {
        return (x - 1.0) * (b + beta) / ((x + beta) * (b - 1.0));
    }
    let num = ((alpha * x + beta) / (x + alpha + beta - 1.0)).ln();
    let den = ((b * alpha + beta) / (alpha + beta + b - 1.0)).ln();
    num / den
}

fn rss(b: f64, m: &GridFunction, alpha: f64, beta: f64) -> f64 {
    let mut s = 0.0;
    for (&x, &y) in m.xs.iter().zip(&m.ys) {
        let r = type1_model(b, alpha, beta, x) - y;
        s += r * r;
    }
    if s.is_nan() {
        f64::INFINITY
    } else {
        s
    }
}

const GOLD: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimum of `f` on `[lo, hi]`.
fn golden(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut c = hi - GOLD * (hi - lo);
    let mut d = lo + GOLD * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + c.abs()) {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - GOLD * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + GOLD * (hi - lo);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimizes `g(t)` over `|t| <= s` (growing `s` while the minimum sits on
/// the edge), returning the best step if it improves on `g(0) = f0`.
fn line_search(g: impl Fn(f64) -> f64, f0: f64, scale: &mut f64) -> Option<(f64, f64)> {
    let mut s = *scale;
    let mut best = None;
    for _ in 0..60 {
        let (t, ft) = golden(&g, -s, s);
        if ft < best.map_or(f0, |(_, v)| v) {
            best = Some((t, ft));
        }
        if t.abs() > 0.9 * s && ft.is_finite() && s < 1e6 {
            s *= 4.0;
        } else {
            break;
        }
    }
    *scale = match best {
        Some((t, _)) => (2.0 * t.abs()).max(1e-12),
        None => (s / 4.0).max(1e-12),
    };
    best
}

/// Least-squares fit of [`type1_model`] to the samples of `m`.
///
/// Descent starts along the coordinate axes with golden-section line
/// searches; after each sweep the sweep's net displacement replaces the
/// oldest search direction (Powell's conjugate-direction update), which
/// follows the narrow curved valley of this objective far faster than
/// fixed axes. Stops when a sweep moves less than `1e-8` or after `10^4`
/// sweeps.
///
/// The objective is invariant under `(a, c) -> (1/a, (a+c-1)/a)`, whose
/// fixed line `a = 1` consists of saddle points; a run that stalls there is
/// restarted from `a - 0.1`. The result is reported with `a <= 1`.
pub fn fit_type1(b: Base, m: &GridFunction, init_alpha: f64, init_beta: f64) -> Result<FitResult> {
    let bf = b.get() as f64;
    let f = |p: [f64; 2]| rss(bf, m, p[0], p[1]);
    let mut p = [init_alpha, init_beta];
    let mut fx = f(p);
    if !fx.is_finite() {
        return Err(Error::InvalidParameter(
            "initial parameters outside alpha + beta > 0, b alpha + beta > 0".into(),
        ));
    }
    let axes = || vec![([0.0, 1.0], 0.1), ([1.0, 0.0], 0.1)];
    let along = |p: [f64; 2], u: [f64; 2], t: f64| [p[0] + t * u[0], p[1] + t * u[1]];
    let mut dirs = axes();
    let mut sweeps = 0;
    let mut converged = false;
    let mut restarts = 0;
    while sweeps < 10_000 {
        sweeps += 1;
        let start = p;
        for (u, scale) in dirs.iter_mut() {
            let u = *u;
            if let Some((t, v)) = line_search(|t| f(along(p, u, t)), fx, scale) {
                p = along(p, u, t);
                fx = v;
            }
        }
        let d = [p[0] - start[0], p[1] - start[1]];
        let moved = d[0].hypot(d[1]);
        if moved > 0.0 {
            let u = [d[0] / moved, d[1] / moved];
            let mut scale = moved;
            if let Some((t, v)) = line_search(|t| f(along(p, u, t)), fx, &mut scale) {
                p = along(p, u, t);
                fx = v;
            }
            // keep the direction set well conditioned
            let w = dirs[1].0;
            if (w[0] * u[1] - w[1] * u[0]).abs() > 1e-6 {
                dirs.remove(0);
                dirs.push((u, scale));
            } else {
                dirs = axes();
            }
        }
        if (p[0] - start[0]).hypot(p[1] - start[1]) < 1e-8 {
            if (p[0] - 1.0).abs() < 1e-3 && restarts < 3 && f([p[0] - 0.1, p[1]]).is_finite() {
                restarts += 1;
                p[0] -= 0.1;
                fx = f(p);
                dirs = axes();
                continue;
            }
            converged = true;
            break;
        }
    }
    let [mut a, mut c] = p;
    if a > 1.0 {
        (a, c) = (1.0 / a, (a + c - 1.0) / a);
        fx = f([a, c]);
    }
    Ok(FitResult {
        alpha: a,
        beta: c,
        rss: fx,
        sweeps,
        converged,
    })
}
