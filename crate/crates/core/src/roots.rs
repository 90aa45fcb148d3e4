//! Grid scanning and bisection for real-valued eigenvalue conditions.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stopping rules for bracketing root searches.
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Accept once the bracket is narrower than this.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self { tol: T::tol_floor(1e-12), max_iter: 200 }
    }
}

/// A bracketed root together with `|f|` at the accepted point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub residual: T,
}

/// Bisection on `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign.
pub fn bisect<T: Real, F: Fn(T) -> T>(
    f: &F,
    mut lo: T,
    mut hi: T,
    mut f_lo: T,
    opts: &RootOptions<T>,
) -> Result<Root<T>> {
    for _ in 0..opts.max_iter {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if hi - lo <= opts.tol || mid <= lo || mid >= hi {
            let x = if f_lo.abs() < f(hi).abs() { lo } else { hi };
            return Ok(Root { x, residual: f(x).abs() });
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(Root { x: mid, residual: T::zero() });
        }
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "bisection did not reach width {} within {} iterations (bracket [{lo}, {hi}])",
        opts.tol, opts.max_iter
    )))
}

/// Scans `f` on the uniform grid `start, start + step, …` (up to `limit`) and
/// returns the first `wanted` roots in ascending order.
///
/// A grid point where `f` is exactly zero is a root in its own right. With
/// `skip_start` a zero at `start` itself is ignored, for conditions that
/// vanish trivially there.
pub fn scan_roots<T: Real, F: Fn(T) -> T>(
    f: F,
    start: T,
    step: T,
    limit: T,
    wanted: usize,
    skip_start: bool,
    opts: &RootOptions<T>,
) -> Result<Vec<Root<T>>> {
    if wanted == 0 {
        return Ok(Vec::new());
    }
    let roots = scan(&f, start, step, limit, Some(wanted), skip_start, opts)?;
    if roots.len() < wanted {
        return Err(Error::NoConvergence(format!(
            "found only {} of {} roots below {}",
            roots.len(),
            wanted,
            limit
        )));
    }
    Ok(roots)
}

/// Every sign-change root of `f` on the grid up to `limit`.
pub fn scan_all_roots<T: Real, F: Fn(T) -> T>(
    f: F,
    start: T,
    step: T,
    limit: T,
    skip_start: bool,
    opts: &RootOptions<T>,
) -> Result<Vec<Root<T>>> {
    scan(&f, start, step, limit, None, skip_start, opts)
}

fn scan<T: Real, F: Fn(T) -> T>(
    f: &F,
    start: T,
    step: T,
    limit: T,
    wanted: Option<usize>,
    skip_start: bool,
    opts: &RootOptions<T>,
) -> Result<Vec<Root<T>>> {
    let mut roots = Vec::new();
    let done = |roots: &Vec<Root<T>>| wanted.is_some_and(|w| roots.len() >= w);
    let mut x0 = start;
    let mut f0 = f(x0);
    if f0 == T::zero() && !skip_start {
        roots.push(Root { x: x0, residual: T::zero() });
    }
    let mut j = 1usize;
    while !done(&roots) {
        let x1 = start + step * T::from_index(j);
        if x1 > limit {
            break;
        }
        let f1 = f(x1);
        if !f1.is_finite() {
            return Err(Error::NoConvergence(format!("condition is not finite at {x1}")));
        }
        if f1 == T::zero() {
            roots.push(Root { x: x1, residual: T::zero() });
        } else if f0 != T::zero() && (f0 < T::zero()) != (f1 < T::zero()) {
            roots.push(bisect(f, x0, x1, f0, opts)?);
        }
        x0 = x1;
        f0 = f1;
        j += 1;
    }
    Ok(roots)
}

/// Like [`scan_roots`], but also resolves roots that the grid misses because
/// `f` returns to its sign before the next grid point: close pairs and double
/// roots where `f` only touches zero.
///
/// At each grid point where `|f|` is locally minimal with no sign change on
/// either side, the signed extremum between the neighbours is located by
/// golden-section search. An overshoot through zero yields two bracketed
/// roots; an extremum with `|f| ≤ touch_tol` is reported once as a touching
/// root.
///
/// Returns every root up to `limit`; the caller trims.
pub fn scan_roots_with_touching<T: Real, F: Fn(T) -> T>(
    f: F,
    start: T,
    step: T,
    limit: T,
    touch_tol: T,
    opts: &RootOptions<T>,
) -> Result<Vec<Root<T>>> {
    let mut roots: Vec<Root<T>> = Vec::new();
    let n = ((limit - start) / step).floor().to_usize().unwrap_or(0);
    let xs: Vec<T> = (0..=n).map(|j| start + step * T::from_index(j)).collect();
    let fs: Vec<T> = xs.iter().map(|&x| f(x)).collect();
    if let Some(bad) = fs.iter().position(|v| !v.is_finite()) {
        return Err(Error::NoConvergence(format!("condition is not finite at {}", xs[bad])));
    }
    let last = xs.len() - 1;
    for j in 0..xs.len() {
        let (x, fx) = (xs[j], fs[j]);
        if fx == T::zero() {
            roots.push(Root { x, residual: T::zero() });
            continue;
        }
        if j < last && fs[j + 1] != T::zero() && (fx < T::zero()) != (fs[j + 1] < T::zero()) {
            roots.push(bisect(&f, x, xs[j + 1], fx, opts)?);
            continue;
        }
        let negative = fx < T::zero();
        let same = |i: usize| fs[i] != T::zero() && (fs[i] < T::zero()) == negative;
        let left = if j > 0 { fs[j - 1].abs() } else { T::infinity() };
        let right = if j < last { fs[j + 1].abs() } else { T::infinity() };
        let isolated = (j == 0 || same(j - 1)) && (j == last || same(j + 1));
        if !(isolated && fx.abs() <= left && fx.abs() < right) {
            continue;
        }
        let lo = if j > 0 { xs[j - 1] } else { x };
        let hi = if j < last { xs[j + 1] } else { x };
        // minimise f on the positive side, -f on the negative side
        let sign = if negative { -T::one() } else { T::one() };
        let g = |t: T| sign * f(t);
        let xm = golden_min(&g, lo, hi, opts);
        let gm = g(xm);
        if gm < T::zero() {
            roots.push(bisect(&f, lo, xm, f(lo), opts)?);
            roots.push(bisect(&f, xm, hi, f(xm), opts)?);
        } else if gm <= touch_tol {
            roots.push(Root { x: xm, residual: gm });
        }
    }
    roots.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap_or(std::cmp::Ordering::Equal));
    roots.dedup_by(|a, b| (a.x - b.x).abs() <= opts.tol * T::lit(4.0));
    Ok(roots)
}

fn golden_min<T: Real, G: Fn(T) -> T>(g: &G, mut lo: T, mut hi: T, opts: &RootOptions<T>) -> T {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..opts.max_iter {
        if hi - lo <= opts.tol {
            break;
        }
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        x1
    } else {
        x2
    }
}
