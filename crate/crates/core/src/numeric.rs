//! Bracketing root finder, golden-section maximiser and adaptive Simpson
//! quadrature used throughout the engine.

use crate::error::{EvacError, Result};

/// Bisection on a sign-changing bracket, stopping once the bracket is
/// narrower than `tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(EvacError::Numeric(format!(
            "bisection needs a sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    let lo_positive = flo > 0.0;
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo > tol {
        return Err(EvacError::Numeric(format!(
            "bisection stalled at width {:e} after {max_iter} iterations",
            hi - lo
        )));
    }
    Ok(0.5 * (lo + hi))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`, falling back to an endpoint when it is larger.
pub fn golden_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (fa, fb) = (f(a)?, f(b)?);
    let (lo0, flo0, hi0, fhi0) = (a, fa, b, fb);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    if flo0 > best.1 {
        best = (lo0, flo0);
    }
    if fhi0 > best.1 {
        best = (hi0, fhi0);
    }
    Ok(best)
}

/// Neumaier compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonConfig {
    /// Absolute tolerance on the integral.
    pub tol: f64,
    pub max_depth: u32,
    /// The interval is split into `2^min_depth` panels before adapting.
    pub min_depth: u32,
}

impl Default for SimpsonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_depth: 48,
            min_depth: 3,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct Adaptive<'a, F> {
    f: &'a mut F,
    cfg: SimpsonConfig,
    total: CompensatedSum,
    unresolved: f64,
}

impl<F> Adaptive<'_, F>
where
    F: FnMut(f64) -> Result<f64>,
{
    fn refine(&mut self, p: Panel, tol: f64, depth: u32) -> Result<()> {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = (self.f)(lm)?;
        let frm = (self.f)(rm)?;
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = left + right - p.whole;
        if depth >= self.cfg.min_depth && diff.abs() <= 15.0 * tol {
            self.total.add(left + right + diff / 15.0);
            return Ok(());
        }
        if depth >= self.cfg.max_depth {
            self.total.add(left + right + diff / 15.0);
            self.unresolved += diff.abs() / 15.0;
            return Ok(());
        }
        self.refine(
            Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            },
            0.5 * tol,
            depth + 1,
        )?;
        self.refine(
            Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            },
            0.5 * tol,
            depth + 1,
        )
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Panels that reach `max_depth` without meeting their share of the
/// tolerance are kept, and reported through [`EvacError::Tolerance`]
/// together with the partial integral when their combined error exceeds
/// `tol`.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, cfg: SimpsonConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(b > a) {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fm = f(0.5 * (a + b))?;
    let fb = f(b)?;
    let mut run = Adaptive {
        f: &mut f,
        cfg,
        total: CompensatedSum::default(),
        unresolved: 0.0,
    };
    run.refine(
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole: simpson(a, b, fa, fm, fb),
        },
        cfg.tol,
        0,
    )?;
    let value = run.total.value();
    if run.unresolved > cfg.tol {
        return Err(EvacError::Tolerance {
            partial: value,
            error: run.unresolved,
        });
    }
    Ok(value)
}
