//! Independent numerical pipeline for the correction terms.
//!
//! Every piece of the Wick-rotated heat-trace product is Mellin transformed
//! by adaptive quadrature, continued to `s = 0` and differentiated there,
//! without any hypergeometric or exponential-integral closed form.
//!
//! The shell pieces reduce to the contour integral
//! `E(w; a) = int_C u^{w - 1} exp(a / u) erf(sqrt(u)) du`, where `C` runs
//! from 0 to infinity through the upper half plane. It equals the analytic
//! continuation of `int_0^inf u^{w - 1} exp(-b / u) erf(sqrt(u)) du` to
//! `b = a e^{i pi}` and converges for `Re w < 0`. Far from the origin,
//! `a >= far_field`, a double asymptotic series replaces the quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::corrections::{
    axis_poisson_form, BoundaryCondition, DomainConfig, TermValues, LAMBDA_MIN,
};
use crate::error::{Error, Result};
use crate::lattice::{
    half_line_sum_fixed, quadrant_sum_fixed, resolving_width, WindowedSum, MIN_FIXED_WIDTH,
    WINDOW_REACH,
};
use crate::quad::{integrate, integrate_pieces, QuadOptions, QuadResult};
use crate::specfun::{erf_complex, gamma_fn};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SQRT_PI: f64 = 1.772_453_850_905_516;
/// Angular frequency of the shell summands in the shell radius.
const SHELL_FREQUENCY: f64 = 2.0;
/// Maximal tilt of the contour away from the imaginary axis.
const CONTOUR_TILT: f64 = PI / 6.0;
/// Erf Taylor terms subtracted on `(0, 1]` by the continuation.
const TAYLOR_TERMS: usize = 6;
/// Step of the finite differences in the Mellin exponent.
const W_STEP: f64 = 1e-3;

/// One piece of the heat-trace product entering the correction.
///
/// Each variant names its Euclidean trace factor `gamma(u)`; the Mellin
/// transform is `M(s) = int u^{s - 1} (4 pi u)^{-1/2} gamma(u) (-erf(sqrt(u))) du`,
/// with `exp(-r^2 / u)` replaced by `exp(+r^2 / u)` on the contour `C` for
/// the shell pieces. The energy extracted from `M` is
///
/// * a-type: `zeta = M / Gamma`, energy `zeta'(0) / 2`;
/// * `B`: `zeta = i^s M`, energy `Im zeta'(0) / 2 - 1 / (16 lambda n^2)`;
/// * `C`: `zeta = i^{-s} M / Gamma`, energy `4 Re zeta'(0)`;
/// * `D`: `zeta = i^{-s} M / Gamma`, energy `2 Re zeta'(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceTerm {
    /// `gamma = 1/4`.
    AConstant,
    /// `gamma = -lambda / (4 sqrt(pi u))`.
    ALinear { lambda: f64 },
    /// `gamma = lambda1 lambda2 / (4 pi u)`.
    ABulk { lambda1: f64, lambda2: f64 },
    /// `gamma = -lambda / (2 sqrt(pi u)) exp(-n^2 lambda^2 / u)`.
    B { n: u64, lambda: f64 },
    /// `gamma = lambda1 lambda2 / (2 pi u) exp(-n^2 mu^2 / u)`.
    C {
        n: u64,
        mu: f64,
        lambda1: f64,
        lambda2: f64,
    },
    /// `gamma = lambda1 lambda2 / (pi u) exp(-(n1^2 mu1^2 + n2^2 mu2^2) / u)`.
    D {
        n1: u64,
        n2: u64,
        mu1: f64,
        mu2: f64,
        lambda1: f64,
        lambda2: f64,
    },
}

impl TraceTerm {
    /// Open interval of `Re s` on which the Mellin integral converges.
    pub fn strip(&self) -> (f64, f64) {
        match self {
            TraceTerm::AConstant => (0.0, 0.5),
            TraceTerm::ALinear { .. } => (0.5, 1.0),
            TraceTerm::ABulk { .. } => (1.0, 1.5),
            TraceTerm::B { .. } => (f64::NEG_INFINITY, 1.0),
            TraceTerm::C { .. } | TraceTerm::D { .. } => (f64::NEG_INFINITY, 1.5),
        }
    }

    /// Euclidean trace factor `gamma(u)` of this piece.
    pub fn gamma(&self, u: f64) -> f64 {
        match *self {
            TraceTerm::AConstant => 0.25,
            TraceTerm::ALinear { lambda } => -lambda / (4.0 * (PI * u).sqrt()),
            TraceTerm::ABulk { lambda1, lambda2 } => lambda1 * lambda2 / (4.0 * PI * u),
            TraceTerm::B { lambda, .. } => {
                -lambda / (2.0 * (PI * u).sqrt()) * (-self.shell_square() / u).exp()
            }
            TraceTerm::C {
                lambda1, lambda2, ..
            } => lambda1 * lambda2 / (2.0 * PI * u) * (-self.shell_square() / u).exp(),
            TraceTerm::D {
                lambda1, lambda2, ..
            } => lambda1 * lambda2 / (PI * u) * (-self.shell_square() / u).exp(),
        }
    }

    /// Squared shell radius `a` of a shell piece, zero for the a-type pieces.
    fn shell_square(&self) -> f64 {
        match *self {
            TraceTerm::B { n, lambda } => (n as f64 * lambda).powi(2),
            TraceTerm::C { n, mu, .. } => (n as f64 * mu).powi(2),
            TraceTerm::D {
                n1, n2, mu1, mu2, ..
            } => (n1 as f64 * mu1).powi(2) + (n2 as f64 * mu2).powi(2),
            _ => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        let index = |name: &str, n: u64| -> Result<()> {
            if n >= 1 {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "shell index {name} must be at least 1"
                )))
            }
        };
        match *self {
            TraceTerm::AConstant => Ok(()),
            TraceTerm::ALinear { lambda } => positive("lambda", lambda),
            TraceTerm::ABulk { lambda1, lambda2 } => {
                positive("lambda1", lambda1)?;
                positive("lambda2", lambda2)
            }
            TraceTerm::B { n, lambda } => {
                index("n", n)?;
                positive("lambda", lambda)
            }
            TraceTerm::C {
                n,
                mu,
                lambda1,
                lambda2,
            } => {
                index("n", n)?;
                positive("mu", mu)?;
                positive("lambda1", lambda1)?;
                positive("lambda2", lambda2)
            }
            TraceTerm::D {
                n1,
                n2,
                mu1,
                mu2,
                lambda1,
                lambda2,
            } => {
                index("n1", n1)?;
                index("n2", n2)?;
                positive("mu1", mu1)?;
                positive("mu2", mu2)?;
                positive("lambda1", lambda1)?;
                positive("lambda2", lambda2)
            }
        }
    }
}

/// Accuracy controls of the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Relative tolerance of every quadrature.
    pub rel_tol: f64,
    /// Squared shell radius from which the asymptotic series is used.
    pub far_field: f64,
    /// Target `delta w` of the automatic shell cutoff.
    pub width_factor: f64,
    /// Largest number of shells of a two-dimensional sum.
    pub max_points: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            rel_tol: 1e-11,
            far_field: 900.0,
            width_factor: 14.0,
            max_points: 2_000_000,
        }
    }
}

impl OracleOptions {
    fn quad(&self) -> QuadOptions {
        QuadOptions {
            abs_tol: 1e-300,
            rel_tol: self.rel_tol,
            max_intervals: 4000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(Error::Domain(format!(
                "oracle tolerance must lie in (0, 1e-3), got {}",
                self.rel_tol
            )));
        }
        if !(self.far_field >= 400.0) {
            return Err(Error::Domain(format!(
                "far-field threshold must be at least 400, got {}",
                self.far_field
            )));
        }
        if !(self.width_factor > 0.0 && self.max_points > 0) {
            return Err(Error::Domain(
                "shell cutoff controls must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Mellin transform of one trace piece at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinSample {
    pub s: Complex64,
    pub value: Complex64,
    /// Quadrature error estimate of `value`.
    pub est_error: f64,
}

/// Derivative at `s = 0` of the zeta function of one trace piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaDerivative {
    pub zeta_prime: Complex64,
    /// Energy contribution in units of `hbar m c`.
    pub energy: f64,
    pub est_error: f64,
}

fn check_quad(r: &QuadResult, what: &str) -> Result<()> {
    if r.converged && r.value.re.is_finite() && r.value.im.is_finite() {
        Ok(())
    } else if r.value.re.is_finite() {
        Err(Error::PrecisionLoss {
            estimate: r.value.re,
            bound: r.error,
        })
    } else {
        Err(Error::Range(format!("{what} integrand is not finite")))
    }
}

// ---------------------------------------------------------------------------
// a-type pieces: int_0^inf u^{x - 1} erf(sqrt(u)) du and its continuation

fn erf_taylor(k: usize) -> f64 {
    // 2/sqrt(pi) (-1)^k / (k! (2k + 1))
    let mut fact = 1.0;
    for j in 1..=k {
        fact *= j as f64;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    2.0 / SQRT_PI * sign / (fact * (2 * k + 1) as f64)
}

/// `int_0^inf u^{x - 1} erf(sqrt(u)) du` for `-1/2 < Re x < 0`, split at
/// `u = 1` with `u = 1/v` on the outer interval.
fn erf_mellin_direct(x: Complex64, opts: &OracleOptions) -> Result<(Complex64, f64)> {
    let q = opts.quad();
    let inner = integrate(
        |u| {
            if u == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let e = erf_complex(Complex64::new(u.sqrt(), 0.0))
                .map(|e| e.re)
                .unwrap_or(f64::NAN);
            (x - 1.0).expf(u) * e
        },
        0.0,
        1.0,
        &q,
    );
    check_quad(&inner, "Mellin")?;
    let outer = integrate(
        |v| {
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let e = erf_complex(Complex64::new(1.0 / v.sqrt(), 0.0))
                .map(|e| e.re)
                .unwrap_or(f64::NAN);
            (-x - 1.0).expf(v) * e
        },
        0.0,
        1.0,
        &q,
    );
    check_quad(&outer, "Mellin")?;
    Ok((inner.value + outer.value, inner.error + outer.error))
}

/// Continuation of the erf Mellin transform to any `x` away from its poles,
/// `x = 0` and `x = -k - 1/2`. Pole terms listed in `skip_pole` are left out.
fn erf_mellin_continued(
    x: Complex64,
    skip_pole: Option<usize>,
    opts: &OracleOptions,
) -> Result<(Complex64, f64)> {
    let q = opts.quad();
    let inner = integrate(
        |u| {
            if u == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let r = u.sqrt();
            let mut rem = erf_complex(Complex64::new(r, 0.0))
                .map(|e| e.re)
                .unwrap_or(f64::NAN);
            if u < 0.25 {
                // direct tail of the Maclaurin series avoids the cancellation
                rem = 0.0;
                let mut pw = r * u.powi(TAYLOR_TERMS as i32);
                for k in TAYLOR_TERMS..TAYLOR_TERMS + 30 {
                    rem += erf_taylor(k) * pw;
                    pw *= u;
                }
            } else {
                let mut pw = r;
                for k in 0..TAYLOR_TERMS {
                    rem -= erf_taylor(k) * pw;
                    pw *= u;
                }
            }
            (x - 1.0).expf(u) * rem
        },
        0.0,
        1.0,
        &q,
    );
    check_quad(&inner, "continued Mellin")?;
    let outer = integrate(
        |v| {
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let r = 1.0 / v.sqrt();
            let erfc = crate::specfun::erfc(r);
            -(-x - 1.0).expf(v) * erfc
        },
        0.0,
        1.0,
        &q,
    );
    check_quad(&outer, "continued Mellin")?;
    let mut value = inner.value + outer.value - 1.0 / x;
    for k in 0..TAYLOR_TERMS {
        if skip_pole == Some(k) {
            continue;
        }
        value += erf_taylor(k) / (x + k as f64 + 0.5);
    }
    Ok((value, inner.error + outer.error))
}

/// Prefactor `k` and shift `q` with `M(s) = -(k / (2 sqrt(pi))) J(s + q)`.
fn a_piece(term: &TraceTerm) -> (f64, f64) {
    match *term {
        TraceTerm::AConstant => (0.25, -0.5),
        TraceTerm::ALinear { lambda } => (-lambda / (4.0 * SQRT_PI), -1.0),
        TraceTerm::ABulk { lambda1, lambda2 } => (lambda1 * lambda2 / (4.0 * PI), -1.5),
        _ => unreachable!("not an a-type piece"),
    }
}

// ---------------------------------------------------------------------------
// shell pieces: the contour integral E(w; a)

/// Large-`a` form `E = Gamma(-w) b^w - E_erfc` with `b = a e^{i pi}`, where
/// `E_erfc ~ (4 / sqrt(pi)) b^{nu/2} (pi / (4 sqrt(b)))^{1/2} e^{-zeta} / zeta
/// sum_N C_N zeta^{-N}`, `nu = w + 1/2` and `zeta = 2 sqrt(b)`.
struct FarField {
    w: Complex64,
    gamma_neg_w: Complex64,
    coeffs: Vec<Complex64>,
}

impl FarField {
    fn new(w: Complex64) -> Result<FarField> {
        let nu = w + 0.5;
        let n_max = 160;
        let mut a = vec![Complex64::new(1.0, 0.0)];
        for m in 1..n_max {
            let mf = m as f64;
            let next = a[m - 1] * (4.0 * nu * nu - (2.0 * mf - 1.0).powi(2)) / (8.0 * mf);
            a.push(next);
        }
        // C_N = sum_{m + j = N} a_m (-1)^j (nu + 1/2 + m)_j
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max];
        for (m, am) in a.iter().enumerate() {
            let p = nu + 0.5 + m as f64;
            let mut poch = Complex64::new(1.0, 0.0);
            for j in 0..n_max - m {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[m + j] += *am * poch * sign;
                poch *= p + j as f64;
            }
        }
        Ok(FarField {
            w,
            gamma_neg_w: gamma_fn(-w)?,
            coeffs,
        })
    }

    fn eval(&self, a: f64) -> (Complex64, f64) {
        let nu = self.w + 0.5;
        let ln_b = Complex64::new(a.ln(), PI);
        let sqrt_b = Complex64::new(0.0, a.sqrt());
        let zeta = 2.0 * sqrt_b;
        let inv = 1.0 / zeta;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        let mut prev = f64::INFINITY;
        let mut last = 0.0;
        for c in &self.coeffs {
            let t = *c * pw;
            let tn = t.norm();
            if tn > prev {
                break;
            }
            sum += t;
            last = tn;
            prev = tn;
            if tn <= 1e-17 * sum.norm() {
                break;
            }
            pw *= inv;
        }
        let pre = 4.0 / SQRT_PI
            * (0.5 * nu * ln_b).exp()
            * (PI / (4.0 * sqrt_b)).sqrt()
            * (-zeta).exp()
            * inv;
        let erfc_part = pre * sum;
        let gamma_part = self.gamma_neg_w * (self.w * ln_b).exp();
        let value = gamma_part - erfc_part;
        (
            value,
            pre.norm() * last + 1e-15 * (gamma_part.norm() + erfc_part.norm()),
        )
    }
}

/// Contour integral `E(w; a)` and, with `log_weight`, the same integral with
/// an extra factor `ln u`, which is `dE/dw`.
fn contour_integral(
    w: Complex64,
    a: f64,
    log_weight: bool,
    opts: &OracleOptions,
) -> Result<(Complex64, f64)> {
    if !(w.re < 0.0) {
        return Err(Error::Domain(format!(
            "shell Mellin integral needs Re w < 0, got {w}"
        )));
    }
    let r = a.sqrt();
    let integrand = |t: f64| -> Complex64 {
        if t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let d = a + t * t;
        let theta = 0.5 * PI + CONTOUR_TILT * (a - t * t) / d;
        let dtheta = -4.0 * CONTOUR_TILT * a * t / (d * d);
        let rot = Complex64::from_polar(1.0, theta);
        let u = t * rot;
        let ln_u = Complex64::new(t.ln(), theta);
        let sqrt_u = Complex64::from_polar(t.sqrt(), 0.5 * theta);
        let e = match erf_complex(sqrt_u) {
            Ok(e) => e,
            Err(_) => return Complex64::new(f64::NAN, f64::NAN),
        };
        let du = rot * Complex64::new(1.0, t * dtheta);
        let mut v = ((w - 1.0) * ln_u + a / u).exp() * e * du;
        if log_weight {
            v *= ln_u;
        }
        v
    };
    let mut points = vec![0.0, 0.25 * r, 0.5 * r, r, 2.0 * r, 4.0 * r];
    if !points.iter().any(|&p| (p - 1.0).abs() < 0.1 * r) && 1.0 < 4.0 * r {
        points.push(1.0);
        points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    }
    let q = opts.quad();
    let near = integrate_pieces(integrand, &points, &q);
    check_quad(&near, "contour")?;
    let end = 4.0 * r;
    let tail = integrate(
        |v| {
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            integrand(end / v) * (end / (v * v))
        },
        0.0,
        1.0,
        &q,
    );
    check_quad(&tail, "contour")?;
    Ok((near.value + tail.value, near.error + tail.error))
}

/// Evaluator of the shell integrals with cached far-field coefficients.
struct Shells {
    opts: OracleOptions,
    far_cd: FarField,
    far_b: [FarField; 5],
}

impl Shells {
    fn new(opts: OracleOptions) -> Result<Shells> {
        let b = |k: f64| FarField::new(Complex64::new(-1.0 + k * W_STEP, 0.0));
        Ok(Shells {
            opts,
            far_cd: FarField::new(Complex64::new(-1.5, 0.0))?,
            far_b: [b(-2.0)?, b(-1.0)?, b(0.0)?, b(1.0)?, b(2.0)?],
        })
    }

    /// `E(-3/2; a)`, the integral behind the c/d pieces.
    fn cd(&self, a: f64) -> Result<(Complex64, f64)> {
        if a >= self.opts.far_field {
            Ok(self.far_cd.eval(a))
        } else {
            contour_integral(Complex64::new(-1.5, 0.0), a, false, &self.opts)
        }
    }

    /// Per-shell c/d function `Re[-(sqrt(pi)/2) E(-3/2; a)]`.
    fn g(&self, a: f64) -> Result<(f64, f64)> {
        let (e, err) = self.cd(a)?;
        Ok((-0.5 * SQRT_PI * e.re, 0.5 * SQRT_PI * err))
    }

    /// `E(-1; a)` and `dE/dw (-1; a)`, the integrals behind the b pieces.
    fn b_parts(&self, a: f64) -> Result<(Complex64, Complex64, f64)> {
        let w = Complex64::new(-1.0, 0.0);
        if a >= self.opts.far_field {
            let f: Vec<(Complex64, f64)> = self.far_b.iter().map(|ff| ff.eval(a)).collect();
            let d = (8.0 * (f[3].0 - f[1].0) - (f[4].0 - f[0].0)) / (12.0 * W_STEP);
            let err = f.iter().map(|x| x.1).sum::<f64>() / W_STEP + 1e-12 * d.norm();
            Ok((f[2].0, d, err))
        } else {
            let (e0, e0_err) = contour_integral(w, a, false, &self.opts)?;
            let (d, d_err) = contour_integral(w, a, true, &self.opts)?;
            Ok((e0, d, e0_err + d_err))
        }
    }

    /// Per-shell b function `Im E'(-1; a) + (pi/2) Re E(-1; a)`.
    fn b(&self, a: f64) -> Result<(f64, f64)> {
        let (e0, d, err) = self.b_parts(a)?;
        Ok((d.im + 0.5 * PI * e0.re, err))
    }
}

// ---------------------------------------------------------------------------
// public per-term operations

fn check_strip(term: &TraceTerm, s: Complex64) -> Result<()> {
    let (lo, hi) = term.strip();
    if s.re > lo && s.re < hi {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Re s = {} lies outside the convergence strip ({lo}, {hi}) of {term:?}",
            s.re
        )))
    }
}

/// Mellin transform `M(s)` of one trace piece at default options.
pub fn mellin_term(s: Complex64, term: &TraceTerm) -> Result<MellinSample> {
    mellin_term_with(s, term, &OracleOptions::default())
}

/// Mellin transform `M(s)` of one trace piece by direct quadrature.
pub fn mellin_term_with(
    s: Complex64,
    term: &TraceTerm,
    opts: &OracleOptions,
) -> Result<MellinSample> {
    opts.validate()?;
    term.validate()?;
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite Mellin abscissa {s}")));
    }
    check_strip(term, s)?;
    let (value, est_error) = match *term {
        TraceTerm::AConstant | TraceTerm::ALinear { .. } | TraceTerm::ABulk { .. } => {
            let (k, q) = a_piece(term);
            let (j, err) = erf_mellin_direct(s + q, opts)?;
            let pre = -k / (2.0 * SQRT_PI);
            (pre * j, pre.abs() * err)
        }
        TraceTerm::B { lambda, .. } => {
            let (e, err) = contour_integral(s - 1.0, term.shell_square(), false, opts)?;
            let pre = lambda / (4.0 * PI);
            (pre * e, pre * err)
        }
        TraceTerm::C {
            lambda1, lambda2, ..
        }
        | TraceTerm::D {
            lambda1, lambda2, ..
        } => {
            let half = if matches!(term, TraceTerm::C { .. }) {
                0.5
            } else {
                1.0
            };
            let pre = -half * lambda1 * lambda2 / (2.0 * PI * SQRT_PI);
            let (e, err) = contour_integral(s - 1.5, term.shell_square(), false, opts)?;
            (pre * e, pre.abs() * err)
        }
    };
    Ok(MellinSample {
        s,
        value,
        est_error,
    })
}

/// Derivative at `s = 0` of the zeta function of one trace piece, with the
/// energy it contributes, at default options.
pub fn zeta_sderiv_at_zero(term: &TraceTerm) -> Result<ZetaDerivative> {
    zeta_sderiv_at_zero_with(term, &OracleOptions::default())
}

/// Derivative at `s = 0` of the zeta function of one trace piece.
///
/// The a-type pieces are continued by subtracting the small-`u` Taylor
/// terms of the error function, whose Mellin transforms are simple poles,
/// and the large-`u` constant; the remainders are integrated numerically.
/// The shell pieces are regular at `s = 0`.
pub fn zeta_sderiv_at_zero_with(term: &TraceTerm, opts: &OracleOptions) -> Result<ZetaDerivative> {
    opts.validate()?;
    term.validate()?;
    let shells = Shells::new(*opts)?;
    match *term {
        TraceTerm::AConstant | TraceTerm::ALinear { .. } | TraceTerm::ABulk { .. } => {
            let (k, q) = a_piece(term);
            let pre = -k / (2.0 * SQRT_PI);
            // pole of the erf Taylor term k* at s = 0
            let pole_k = -q - 0.5;
            let pole = if pole_k >= 0.0 && pole_k.fract() == 0.0 {
                Some(pole_k as usize)
            } else {
                None
            };
            let (regular, err) = erf_mellin_continued(Complex64::new(q, 0.0), pole, opts)?;
            let residue = pole.map_or(0.0, erf_taylor);
            let zeta_prime = pre * (regular + residue * EULER_GAMMA);
            let est_error = pre.abs() * err;
            if !(est_error <= 1e-9 * zeta_prime.norm().max(1e-300) || est_error <= 1e-12) {
                return Err(Error::PrecisionLoss {
                    estimate: 0.5 * zeta_prime.re,
                    bound: 0.5 * est_error,
                });
            }
            Ok(ZetaDerivative {
                zeta_prime,
                energy: 0.5 * zeta_prime.re,
                est_error: 0.5 * est_error,
            })
        }
        TraceTerm::B { n, lambda } => {
            let (e0, d, err) = shells.b_parts(term.shell_square())?;
            let pre = lambda / (4.0 * PI);
            let zeta_prime = pre * (Complex64::new(0.0, 0.5 * PI) * e0 + d);
            let nf = n as f64;
            let energy = 0.5 * zeta_prime.im - 1.0 / (16.0 * lambda * nf * nf);
            Ok(ZetaDerivative {
                zeta_prime,
                energy,
                est_error: 0.5 * pre * err,
            })
        }
        TraceTerm::C {
            lambda1, lambda2, ..
        }
        | TraceTerm::D {
            lambda1, lambda2, ..
        } => {
            let (e, err) = shells.cd(term.shell_square())?;
            let (half, weight) = if matches!(term, TraceTerm::C { .. }) {
                (0.5, 4.0)
            } else {
                (1.0, 2.0)
            };
            // zeta'(0) = M(0) since 1/Gamma(s) = s + O(s^2)
            let pre = -half * lambda1 * lambda2 / (2.0 * PI * SQRT_PI);
            let zeta_prime = pre * e;
            Ok(ZetaDerivative {
                zeta_prime,
                energy: weight * zeta_prime.re,
                est_error: weight * pre.abs() * err,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// end-to-end oracle

/// Extent of the shell sums of [`oracle_total`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShellCutoff {
    /// Window widths that resolve the dual lattice, within the point budget.
    Auto,
    /// Shells of radius `sqrt(a)` below this value enter, with a smooth
    /// window reaching zero at the cutoff. Must be at least `8 * 14`.
    Radius(f64),
}

/// Oracle estimate of a total correction.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleTotal {
    /// Dimensionless total in units of `hbar m c`.
    pub value: f64,
    /// Bound on the error from cutting the shell sums off.
    pub truncation_bound: f64,
    /// Sum of the quadrature error estimates of all shells.
    pub quadrature_bound: f64,
    pub terms: TermValues,
    /// Number of shells evaluated.
    pub shells: usize,
    /// Whether every shell sum resolved its dual lattice.
    pub resolved: bool,
}

/// [`oracle_total_with`] at default options.
pub fn oracle_total(
    bc1: BoundaryCondition,
    bc2: BoundaryCondition,
    cfg: &DomainConfig,
    cutoff: ShellCutoff,
) -> Result<OracleTotal> {
    oracle_total_with(bc1, bc2, cfg, cutoff, &OracleOptions::default())
}

struct Accumulator {
    terms: TermValues,
    truncation: f64,
    quadrature: f64,
    shells: usize,
    resolved: bool,
}

impl Accumulator {
    fn add_sum(&mut self, coefficient: f64, sum: &WindowedSum, quad_err: f64) -> f64 {
        self.truncation += coefficient.abs() * sum.error;
        self.quadrature += coefficient.abs() * quad_err;
        self.shells += sum.points;
        self.resolved &= sum.resolved;
        coefficient * sum.value
    }
}

fn cutoff_width(cutoff: ShellCutoff, auto: impl FnOnce() -> Result<f64>) -> Result<f64> {
    match cutoff {
        ShellCutoff::Auto => auto(),
        ShellCutoff::Radius(r) => {
            let w = r / WINDOW_REACH;
            if w.is_finite() && w >= MIN_FIXED_WIDTH {
                Ok(w)
            } else {
                Err(Error::Domain(format!(
                    "shell cutoff radius must be at least {}, got {r}",
                    MIN_FIXED_WIDTH * WINDOW_REACH
                )))
            }
        }
    }
}

/// Oracle estimate of the total correction of a pair of boundary
/// conditions, from the full expansion of the product of the two axis
/// traces into a-type, b, c and d pieces.
///
/// Every shell value comes from [`zeta_sderiv_at_zero`]'s integrals; the
/// shell sums are smoothly windowed lattice sums of fixed width, and the
/// non-oscillating large-shell limit of the b pieces is summed exactly.
pub fn oracle_total_with(
    bc1: BoundaryCondition,
    bc2: BoundaryCondition,
    cfg: &DomainConfig,
    cutoff: ShellCutoff,
    opts: &OracleOptions,
) -> Result<OracleTotal> {
    cfg.validate()?;
    opts.validate()?;
    let (l1, l2) = (cfg.lambda1(), cfg.lambda2());
    for (name, v) in [("lambda1", l1), ("lambda2", l2)] {
        if v <= LAMBDA_MIN {
            return Err(Error::Range(format!(
                "{name} = {v:e} is at or below the singularity guard {LAMBDA_MIN:e}"
            )));
        }
    }
    let shells = Shells::new(*opts)?;
    let (beta1, sums1) = axis_poisson_form(bc1, l1);
    let (beta2, sums2) = axis_poisson_form(bc2, l2);
    let mut acc = Accumulator {
        terms: TermValues::default(),
        truncation: 0.0,
        quadrature: 0.0,
        shells: 0,
        resolved: true,
    };

    let energy = |t: TraceTerm| zeta_sderiv_at_zero_with(&t, opts).map(|z| z.energy);
    acc.terms.const_term = 4.0 * beta1 * beta2 * energy(TraceTerm::AConstant)?;
    acc.terms.lin_l1 = -2.0 * beta2 * energy(TraceTerm::ALinear { lambda: l1 })?;
    acc.terms.lin_l2 = -2.0 * beta1 * energy(TraceTerm::ALinear { lambda: l2 })?;
    acc.terms.bulk = energy(TraceTerm::ABulk {
        lambda1: l1,
        lambda2: l2,
    })?;

    let quad_err = std::sync::Mutex::new(0.0f64);
    let record = |e: f64| *quad_err.lock().expect("error accumulator") += e;
    let take = || std::mem::replace(&mut *quad_err.lock().expect("error accumulator"), 0.0);
    let line_width = |mu: f64| {
        cutoff_width(cutoff, || {
            let w = resolving_width(mu, None, SHELL_FREQUENCY, opts.width_factor)?;
            Ok(w.min(opts.max_points as f64 * mu / WINDOW_REACH)
                .max(MIN_FIXED_WIDTH))
        })
    };

    // b pieces: sum_n energy(B{n, mu}) = (mu / 8 pi) sum_n (X(y) + 3 pi/2) / y^2 - pi^2 / (24 mu),
    // X(y) = y^2 b(y^2), which tends to -3 pi/2 through the Gamma part of E
    for (beta_other, lambda, sums) in [(beta2, l1, &sums1), (beta1, l2, &sums2)] {
        if beta_other == 0.0 {
            continue;
        }
        for &(c, mu) in sums.iter() {
            let w = line_width(mu)?;
            let sum = half_line_sum_fixed(
                mu,
                SHELL_FREQUENCY,
                |y| {
                    let a = y * y;
                    let (b, err) = shells.b(a)?;
                    record(mu / (8.0 * PI) * err);
                    Ok(mu / (8.0 * PI) * (a * b + 1.5 * PI) / a)
                },
                w,
            )?;
            let coefficient = -c * beta_other * lambda / mu;
            acc.terms.b_term +=
                acc.add_sum(coefficient, &sum, take()) - coefficient * PI * PI / (24.0 * mu);
        }
    }

    // c pieces: (c/2) sum_n energy(C{n, mu}) = c (lambda1 lambda2 / pi^2) sum_n g(mu^2 n^2)
    let area = l1 * l2 / (PI * PI);
    for &(c, mu) in sums1.iter().chain(sums2.iter()) {
        let w = line_width(mu)?;
        let sum = half_line_sum_fixed(
            mu,
            SHELL_FREQUENCY,
            |y| {
                let (g, err) = shells.g(y * y)?;
                record(err);
                Ok(g)
            },
            w,
        )?;
        acc.terms.c_term += acc.add_sum(c * area, &sum, take());
    }

    // d pieces: (c1 c2 / 4) sum energy(D) = (c1 c2 / 2) (lambda1 lambda2 / pi^2) sum g(r^2)
    for &(c1, mu1) in &sums1 {
        for &(c2, mu2) in &sums2 {
            let w = cutoff_width(cutoff, || {
                let w = resolving_width(mu1, Some(mu2), SHELL_FREQUENCY, opts.width_factor)?;
                let budget = (opts.max_points as f64 * 4.0 * mu1 * mu2 / PI).sqrt() / WINDOW_REACH;
                Ok(w.min(budget).max(MIN_FIXED_WIDTH))
            })?;
            let sum = quadrant_sum_fixed(
                mu1,
                mu2,
                SHELL_FREQUENCY,
                |r| {
                    let (g, err) = shells.g(r * r)?;
                    record(err);
                    Ok(g)
                },
                w,
            )?;
            acc.terms.d_term += acc.add_sum(0.5 * c1 * c2 * area, &sum, take());
        }
    }

    Ok(OracleTotal {
        value: acc.terms.total(),
        truncation_bound: acc.truncation,
        quadrature_bound: acc.quadrature,
        terms: acc.terms,
        shells: acc.shells,
        resolved: acc.resolved,
    })
}
