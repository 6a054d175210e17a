//! Smoothly windowed lattice sums of slowly decaying oscillatory functions.
//!
//! The sums `sum_{n >= 1} f(lambda n)` and
//! `sum_{n1, n2 >= 1} f(sqrt(lambda1^2 n1^2 + lambda2^2 n2^2))` converge only
//! conditionally or slowly for the correction terms, whose summands oscillate
//! like `exp(+-i omega r)` with a power-law envelope. Multiplying by the
//! window `chi(r) = erfc((r - 7w)/w) / 2` leaves the sum unchanged up to the
//! continuum integral of `f (1 - chi)` and dual-lattice terms of size
//! `exp(-(delta w)^2 / 4)`, where `delta` is the distance of the nearest
//! nonzero dual-lattice point from the circle of radius `omega`. The
//! continuum integral is itself of order `exp(-(omega w)^2 / 4)` and is
//! added explicitly only for narrow windows.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::{integrate, wynn_epsilon, QuadOptions};
use crate::specfun::erfc;

/// Window centre in units of the width.
const CENTRE: f64 = 7.0;
/// Lattice points are kept out to this many widths.
const REACH: f64 = 14.0;
/// Widths above which the continuum integral is below double precision.
const WIDE: f64 = 8.0;
/// Ratio of the comparison window used for the error estimate.
const SHRINK: f64 = 0.8;
/// Lattice points beyond which a narrow window with continuum integral is
/// preferred over the wide one.
const SOFT_POINTS: usize = 20_000;

/// Controls for windowed lattice sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowOptions {
    /// Target value of `delta w`.
    pub width_factor: f64,
    /// Largest number of lattice points evaluated by a two-dimensional sum.
    pub max_points: usize,
    /// Largest index along one axis.
    pub n_max: u64,
}

impl Default for WindowOptions {
    fn default() -> Self {
        WindowOptions {
            width_factor: 14.0,
            max_points: 1_000_000,
            n_max: 10_000,
        }
    }
}

/// Result of a windowed sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedSum {
    pub value: f64,
    /// Difference to the sum with a window narrowed by 20 percent, plus the
    /// quadrature error of the continuum integral.
    pub error: f64,
    /// Window width `w` that was used.
    pub width: f64,
    /// Number of summand evaluations on the lattice.
    pub points: usize,
    /// Whether `delta w` reached the requested width factor within the
    /// point budget.
    pub resolved: bool,
}

fn window(r: f64, w: f64) -> f64 {
    0.5 * erfc((r - CENTRE * w) / w)
}

fn complement(r: f64, w: f64) -> f64 {
    0.5 * erfc((CENTRE * w - r) / w)
}

/// Distance of the nearest nonzero point of the dual lattice
/// `(2 pi k1 / lambda1, 2 pi k2 / lambda2)` from the circle of radius `omega`.
/// A `None` second axis gives the one-dimensional dual lattice.
fn dual_gap(l1: f64, l2: Option<f64>, omega: f64) -> f64 {
    let q1 = 2.0 * PI / l1;
    let k1_max = ((omega + q1) / q1).ceil() as i64 + 1;
    let mut best = f64::INFINITY;
    match l2 {
        None => {
            for k in 1..=k1_max {
                best = best.min(((k as f64) * q1 - omega).abs());
            }
        }
        Some(l2) => {
            let q2 = 2.0 * PI / l2;
            for k1 in 0..=k1_max {
                let x = k1 as f64 * q1;
                let rem = omega * omega - x * x;
                let centre = if rem > 0.0 { rem.sqrt() / q2 } else { 0.0 };
                let c = centre.floor() as i64;
                for k2 in (c - 1).max(0)..=c + 2 {
                    if k1 == 0 && k2 == 0 {
                        continue;
                    }
                    let y = k2 as f64 * q2;
                    best = best.min(((x * x + y * y).sqrt() - omega).abs());
                }
            }
        }
    }
    best
}

/// `int_0^inf f(r) r^p (1 - chi_w(r)) dr` for `p` in {0, 1}, returned for
/// each width in `widths` with a shared tail beyond the window reach.
fn continuum<F>(f: &F, power: i32, widths: &[f64], omega: f64) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let w_max = widths.iter().cloned().fold(0.0, f64::max);
    let reach = REACH * w_max;
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let mut failure: Option<Error> = None;
    let mut eval = |r: f64, weight: f64| -> Complex64 {
        if weight == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match f(r) {
            Ok(v) => Complex64::new(v * r.powi(power) * weight, 0.0),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };

    // tail: a smooth stretch, then half-period cycles accelerated by Wynn
    let half = PI / omega;
    let start = reach.max(16.0 * half);
    let head = integrate(|r| eval(r, 1.0), reach, start, &opts);
    let mut partial = Vec::with_capacity(40);
    let mut acc = 0.0;
    let mut tail_err = head.error;
    for k in 0..40 {
        let a = start + k as f64 * half;
        let piece = integrate(|r| eval(r, 1.0), a, a + half, &opts);
        acc += piece.value.re;
        tail_err += piece.error;
        partial.push(acc);
    }
    let (tail, wynn_err) = wynn_epsilon(&partial);
    let tail = tail + head.value.re;
    tail_err += wynn_err;

    let mut out = Vec::with_capacity(widths.len());
    for &w in widths {
        let lo = 0.5 * w;
        let n_panels = ((reach - lo) / (0.5 * half).min(0.5 * w)).ceil().max(1.0) as usize;
        let step = (reach - lo) / n_panels as f64;
        let mut value = 0.0;
        let mut err = tail_err;
        for j in 0..n_panels {
            let a = lo + j as f64 * step;
            let q = integrate(|r| eval(r, complement(r, w)), a, a + step, &opts);
            value += q.value.re;
            err += q.error;
        }
        out.push((value + tail, err));
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Error estimate from the two window widths. An unresolved window leaks
/// dual-lattice terms that decay only algebraically in `w`, for which the
/// raw difference understates the error of the wider window by
/// `1 / SHRINK - 1`.
fn window_error(sums: [f64; 2], resolved: bool) -> f64 {
    let diff = (sums[0] - sums[1]).abs();
    if resolved {
        diff
    } else {
        diff / (1.0 / SHRINK - 1.0)
    }
}

fn evaluate_all<F>(f: &F, radii: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    radii.par_iter().map(|&r| f(r)).collect()
}

/// Width of the window. The wide window without continuum integral is used
/// while it costs at most `soft` in width units; beyond that a narrower
/// resolving window with the continuum integral is cheaper. `hard` is the
/// largest width the point budget allows.
fn choose_width(gap: f64, soft: f64, hard: f64, opts: &WindowOptions) -> (f64, bool) {
    let ideal = opts.width_factor / gap;
    let target = ideal.max(WIDE);
    if target <= soft.min(hard) {
        (target, true)
    } else if ideal <= soft.min(hard) {
        (soft.min(hard), true)
    } else if target <= hard {
        (target, true)
    } else {
        (hard.max(f64::MIN_POSITIVE), ideal <= hard)
    }
}

fn check_inputs(lengths: &[f64], omega: f64) -> Result<()> {
    for &l in lengths {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Domain(format!(
                "lattice spacing must be positive and finite, got {l}"
            )));
        }
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!(
            "oscillation frequency must be positive, got {omega}"
        )));
    }
    Ok(())
}

fn line_radii(lambda: f64, reach: f64, n_max: u64) -> Vec<f64> {
    let count = ((reach / lambda).floor() as u64).clamp(1, n_max);
    (1..=count).map(|n| lambda * n as f64).collect()
}

fn quadrant_radii(lambda1: f64, lambda2: f64, reach: f64, n_max: u64) -> Vec<f64> {
    let n1_max = ((reach / lambda1).floor() as u64).min(n_max);
    let mut radii = Vec::new();
    for n1 in 1..=n1_max {
        let x = lambda1 * n1 as f64;
        let rem = reach * reach - x * x;
        if rem <= 0.0 {
            break;
        }
        let n2_max = ((rem.sqrt() / lambda2).floor() as u64).min(n_max);
        for n2 in 1..=n2_max {
            let y = lambda2 * n2 as f64;
            radii.push((x * x + y * y).sqrt());
        }
    }
    radii
}

/// Window sums at the widths `w` and `SHRINK w`.
fn window_pair(radii: &[f64], values: &[f64], w: f64) -> [f64; 2] {
    let windowed = |width: f64| -> f64 {
        radii
            .iter()
            .zip(values)
            .map(|(&r, &v)| v * window(r, width))
            .sum()
    };
    [windowed(w), windowed(SHRINK * w)]
}

/// `sum_{n >= 1} f(lambda n)` for a summand oscillating at angular frequency
/// `omega` in its argument.
pub fn half_line_sum<F>(lambda: f64, omega: f64, f: F, opts: &WindowOptions) -> Result<WindowedSum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_inputs(&[lambda], omega)?;
    let gap = dual_gap(lambda, None, omega);
    let cap = opts.n_max as f64 * lambda / REACH;
    let soft = SOFT_POINTS as f64 * lambda / REACH;
    let (w, resolved) = choose_width(gap, soft, cap, opts);
    let radii = line_radii(lambda, REACH * w, opts.n_max);
    let values = evaluate_all(&f, &radii)?;
    let mut sums = window_pair(&radii, &values, w);
    let mut quad_err = 0.0;
    if w < WIDE {
        let c = continuum(&f, 0, &[w, SHRINK * w], omega)?;
        for (s, (v, e)) in sums.iter_mut().zip(c) {
            *s += v / lambda;
            quad_err += e / lambda;
        }
    }
    Ok(WindowedSum {
        value: sums[0],
        error: window_error(sums, resolved) + quad_err,
        width: w,
        points: radii.len(),
        resolved,
    })
}

/// `sum_{n1, n2 >= 1} f(sqrt(lambda1^2 n1^2 + lambda2^2 n2^2))` for a radial
/// summand oscillating at angular frequency `omega`.
pub fn quadrant_sum<F>(
    lambda1: f64,
    lambda2: f64,
    omega: f64,
    f: F,
    opts: &WindowOptions,
) -> Result<WindowedSum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_inputs(&[lambda1, lambda2], omega)?;
    let gap = dual_gap(lambda1, Some(lambda2), omega);
    let axis_cap = opts.n_max as f64 * lambda1.min(lambda2) / REACH;
    let budget_cap = (opts.max_points as f64 * 4.0 * lambda1 * lambda2 / PI).sqrt() / REACH;
    let soft = (SOFT_POINTS as f64 * 4.0 * lambda1 * lambda2 / PI).sqrt() / REACH;
    let (w, resolved) = choose_width(gap, soft, axis_cap.min(budget_cap), opts);
    let radii = quadrant_radii(lambda1, lambda2, REACH * w, opts.n_max);
    let values = evaluate_all(&f, &radii)?;
    let mut sums = window_pair(&radii, &values, w);
    let mut quad_err = 0.0;
    if w < WIDE {
        let widths = [w, SHRINK * w];
        let area = continuum(&f, 1, &widths, omega)?;
        let line = continuum(&f, 0, &widths, omega)?;
        let edge = 0.5 * (1.0 / lambda1 + 1.0 / lambda2);
        let plane = PI / (2.0 * lambda1 * lambda2);
        for (k, s) in sums.iter_mut().enumerate() {
            *s += plane * area[k].0 - edge * line[k].0;
            quad_err += plane * area[k].1 + edge * line[k].1;
        }
    }
    Ok(WindowedSum {
        value: sums[0],
        error: window_error(sums, resolved) + quad_err,
        width: w,
        points: radii.len(),
        resolved,
    })
}

/// Smallest width accepted by the fixed-width sums.
pub const MIN_FIXED_WIDTH: f64 = WIDE;

/// Radius, in units of the window width, out to which lattice points enter.
pub const WINDOW_REACH: f64 = REACH;

/// Width `max(8, width_factor / delta)` that resolves the dual lattice of a
/// quadrant (`lambda2 = Some`) or half line (`None`).
pub fn resolving_width(
    lambda1: f64,
    lambda2: Option<f64>,
    omega: f64,
    width_factor: f64,
) -> Result<f64> {
    check_inputs(&[lambda1, lambda2.unwrap_or(1.0)], omega)?;
    Ok((width_factor / dual_gap(lambda1, lambda2, omega)).max(WIDE))
}

fn check_fixed_width(width: f64) -> Result<()> {
    if width.is_finite() && width >= WIDE {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "fixed window width must be at least {WIDE}, got {width}"
        )))
    }
}

/// [`half_line_sum`] at a prescribed width `w >= 8`, for which the continuum
/// integral is below double precision and is omitted. `resolved` reports
/// whether `delta w` reaches 14.
pub fn half_line_sum_fixed<F>(lambda: f64, omega: f64, f: F, width: f64) -> Result<WindowedSum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_inputs(&[lambda], omega)?;
    check_fixed_width(width)?;
    let resolved = dual_gap(lambda, None, omega) * width >= 14.0;
    let radii = line_radii(lambda, REACH * width, u64::MAX);
    let values = evaluate_all(&f, &radii)?;
    let sums = window_pair(&radii, &values, width);
    Ok(WindowedSum {
        value: sums[0],
        error: window_error(sums, resolved),
        width,
        points: radii.len(),
        resolved,
    })
}

/// [`quadrant_sum`] at a prescribed width `w >= 8`, without the continuum
/// correction.
pub fn quadrant_sum_fixed<F>(
    lambda1: f64,
    lambda2: f64,
    omega: f64,
    f: F,
    width: f64,
) -> Result<WindowedSum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_inputs(&[lambda1, lambda2], omega)?;
    check_fixed_width(width)?;
    let resolved = dual_gap(lambda1, Some(lambda2), omega) * width >= 14.0;
    let radii = quadrant_radii(lambda1, lambda2, REACH * width, u64::MAX);
    let values = evaluate_all(&f, &radii)?;
    let sums = window_pair(&radii, &values, width);
    Ok(WindowedSum {
        value: sums[0],
        error: window_error(sums, resolved),
        width,
        points: radii.len(),
        resolved,
    })
}
