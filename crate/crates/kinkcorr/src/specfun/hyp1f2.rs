use num_complex::Complex64;
use std::f64::consts::PI;

use super::dd::CDd;
use super::gamma::{gamma_unchecked, rgamma};
use crate::error::{Error, Result};

/// Parameters of 1F2(a; b1, b2; z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp1F2Params {
    pub a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

fn is_pole(b: Complex64) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round()
}

impl Hyp1F2Params {
    pub fn new(a: Complex64, b1: Complex64, b2: Complex64) -> Result<Self> {
        let p = Hyp1F2Params { a, b1, b2 };
        p.validate()?;
        Ok(p)
    }

    pub fn real(a: f64, b1: f64, b2: f64) -> Result<Self> {
        Self::new(a.into(), b1.into(), b2.into())
    }

    fn validate(&self) -> Result<()> {
        for b in [self.b1, self.b2] {
            if is_pole(b) {
                return Err(Error::Pole(format!(
                    "lower parameter {b} is a non-positive integer"
                )));
            }
        }
        Ok(())
    }
}

/// Evaluation controls for [`hyp1f2_with`].
#[derive(Debug, Clone, Copy)]
pub struct Hyp1F2Options {
    /// Largest accepted |z|.
    pub ceiling: f64,
    /// Target relative accuracy.
    pub rel_tol: f64,
}

impl Default for Hyp1F2Options {
    fn default() -> Self {
        Hyp1F2Options {
            ceiling: 1e4,
            rel_tol: 1e-10,
        }
    }
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

/// 1F2(a; b1, b2; z) with default options.
pub fn hyp1f2(p: Hyp1F2Params, z: Complex64) -> Result<Complex64> {
    hyp1f2_with(p, z, &Hyp1F2Options::default()).map(|e| e.value)
}

/// 1F2 with explicit options, returning the value and its error estimate.
///
/// The Maclaurin series is summed in double precision first. When the
/// largest term dwarfs the result the evaluation is redone either with the
/// large-|z| expansion (negative real half-plane) or in double-double.
pub fn hyp1f2_with(p: Hyp1F2Params, z: Complex64, opts: &Hyp1F2Options) -> Result<Estimate> {
    Hyp1F2Prepared::new(p, *opts)?.eval(z)
}

/// 1F2 at fixed parameters, with the parameter-dependent coefficients of
/// the large-|z| expansion computed once for many arguments.
#[derive(Debug, Clone)]
pub struct Hyp1F2Prepared {
    p: Hyp1F2Params,
    opts: Hyp1F2Options,
    asym: Option<Asymptotic>,
}

impl Hyp1F2Prepared {
    pub fn new(p: Hyp1F2Params, opts: Hyp1F2Options) -> Result<Self> {
        p.validate()?;
        Ok(Hyp1F2Prepared {
            p,
            opts,
            asym: Asymptotic::new(p),
        })
    }

    fn asymptotic(&self, z: Complex64) -> Option<(Estimate, f64)> {
        self.asym.as_ref().and_then(|a| a.eval(z))
    }

    pub fn eval(&self, z: Complex64) -> Result<Estimate> {
        let (p, opts) = (self.p, &self.opts);
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("1F2 at non-finite argument {z}")));
        }
        if z.norm() > opts.ceiling {
            return Err(Error::Range(format!(
                "|z| = {:e} exceeds the 1F2 ceiling {:e}",
                z.norm(),
                opts.ceiling
            )));
        }
        if z == Complex64::new(0.0, 0.0) {
            return Ok(Estimate {
                value: Complex64::new(1.0, 0.0),
                error: 0.0,
            });
        }

        let r = z.norm();
        let ratio_ok = opts.rel_tol * 1e15;
        // Large negative argument: try the asymptotic expansion directly, the
        // series would only lose digits.
        // Near a zero of the function the relative error is meaningless; the
        // expansion is then accepted when accurate relative to its components.
        let far = if r >= 400.0 && z.re < 0.0 {
            self.asymptotic(z)
        } else {
            None
        };
        if let Some((est, scale)) = far {
            if est.error <= opts.rel_tol * est.value.norm().max(scale) {
                return Ok(est);
            }
        }

        let (sum, max_term) = series_f64(p, z);
        let cancel = max_term / sum.norm().max(f64::MIN_POSITIVE);
        if cancel <= ratio_ok {
            return Ok(Estimate {
                value: sum,
                error: 4.0 * f64::EPSILON * max_term,
            });
        }

        let asym = if far.is_some() {
            far
        } else if z.re < 0.0 && r >= 100.0 {
            self.asymptotic(z)
        } else {
            None
        };
        if let Some((est, _)) = asym {
            if est.error <= opts.rel_tol * est.value.norm() {
                return Ok(est);
            }
        }

        let dd = series_dd(p, z);
        let envelope = asym.map_or(0.0, |(_, scale)| scale);
        if dd.error <= opts.rel_tol * dd.value.norm().max(envelope) {
            return Ok(dd);
        }
        if let Some((est, scale)) = asym {
            if est.error <= opts.rel_tol * scale && est.error <= dd.error {
                return Ok(est);
            }
        }
        let best = match asym {
            Some((a, _)) if a.error < dd.error => a,
            _ => dd,
        };
        Err(Error::PrecisionLoss {
            estimate: best.value.re,
            bound: best.error,
        })
    }
}

fn series_f64(p: Hyp1F2Params, z: Complex64) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term = 1.0f64;
    for k in 0..20_000 {
        let kf = k as f64;
        let ratio = (p.a + kf) * z / ((p.b1 + kf) * (p.b2 + kf) * (kf + 1.0));
        term *= ratio;
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        if ratio.norm() < 0.5 && t <= 1e-17 * sum.norm() {
            break;
        }
        if term == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    (sum, max_term)
}

fn series_dd(p: Hyp1F2Params, z: Complex64) -> Estimate {
    let zd = CDd::from_c64(z);
    let a = CDd::from_c64(p.a);
    let b1 = CDd::from_c64(p.b1);
    let b2 = CDd::from_c64(p.b2);
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut max_term = 1.0f64;
    for k in 0..20_000 {
        let kd = CDd::new(k as f64, 0.0);
        let num = (a + kd) * zd;
        let den = (b1 + kd) * (b2 + kd) * (kd + CDd::ONE);
        term = term * num / den;
        sum = sum + term;
        let t = term.norm_f64();
        max_term = max_term.max(t);
        let ratio = (num / den).norm_f64();
        if ratio < 0.5 && t <= 1e-34 * sum.norm_f64() {
            break;
        }
        if t == 0.0 || !t.is_finite() {
            break;
        }
    }
    // double-double rounding is about 1e-32 per operation
    Estimate {
        value: sum.to_c64(),
        error: 1e-31 * max_term + 1e-16 * 1e-16 * sum.norm_f64(),
    }
}

// Large-|z| expansion for z near the negative real axis, x = -z.
//
// 1F2(a;b1,b2;-x) ~ G(b1)G(b2)/G(a) [H(x) + E(x e^{i pi}) + E(x e^{-i pi})]
// with the algebraic series H and the exponential series
// E(w) = (2 pi)^{-1/2} 2^{-nu-1/2} e^{zeta} sum_k e_k zeta^{nu-k}, zeta = 2 w^{1/2}.
#[derive(Debug, Clone)]
struct Asymptotic {
    p: Hyp1F2Params,
    /// `G(b1) G(b2) / (G(b1 - a) G(b2 - a))`, multiplying `x^{-a} H`.
    pre_h: Complex64,
    /// Prefactor of the two exponential series.
    pre_e: Complex64,
    nu: Complex64,
    coef: Vec<Complex64>,
}

impl Asymptotic {
    fn new(p: Hyp1F2Params) -> Option<Asymptotic> {
        let (a, b1, b2) = (p.a, p.b1, p.b2);
        let gb = gamma_unchecked(b1) * gamma_unchecked(b2);
        if !(gb.re.is_finite() && gb.im.is_finite()) {
            return None;
        }
        let pre_h = gb * rgamma(b1 - a) * rgamma(b2 - a);
        let nu = a - b1 - b2 + 0.5;
        let beta1 = 2.0 * b1 - 2.0;
        let beta2 = 2.0 * b2 - 2.0;
        let q =
            |m: Complex64| (m + beta1) * (m + beta2) + (m + 1.0) * (2.0 * m + 1.0 + beta1 + beta2);
        let pre_e =
            gb * rgamma(a) * (2.0 * PI).powf(-0.5) * Complex64::new(2.0, 0.0).powc(-nu - 0.5);
        let mut coef: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
        if pre_e.norm() > 0.0 {
            for k in 1..80 {
                let kf = k as f64;
                let mut next = q(nu - kf + 1.0) * coef[k - 1];
                if k >= 2 {
                    let m2 = nu - kf + 2.0;
                    next += m2 * (m2 + beta1) * (m2 + beta2) * coef[k - 2];
                }
                coef.push(next / (2.0 * kf));
            }
        }
        Some(Asymptotic {
            p,
            pre_h,
            pre_e,
            nu,
            coef,
        })
    }

    /// Value with error estimate and the scale `|H part| + |E part|`.
    fn eval(&self, z: Complex64) -> Option<(Estimate, f64)> {
        let x = -z;
        if x.re <= 0.0 {
            return None;
        }
        let (a, b1, b2) = (self.p.a, self.p.b1, self.p.b2);

        // algebraic part
        let pre_h = self.pre_h * x.powc(-a);
        let mut h_sum = Complex64::new(0.0, 0.0);
        let mut h_err = 0.0;
        if pre_h.norm() > 0.0 {
            let mut tau = Complex64::new(1.0, 0.0);
            h_sum = tau;
            let mut prev = f64::INFINITY;
            let mut converged = false;
            for k in 0..200 {
                let kf = k as f64;
                tau *= -(a + kf) * (b1 - a - kf - 1.0) * (b2 - a - kf - 1.0) / ((kf + 1.0) * x);
                let t = tau.norm();
                if t == 0.0 {
                    converged = true;
                    break;
                }
                if t > prev {
                    h_err = prev;
                    converged = true;
                    break;
                }
                h_sum += tau;
                prev = t;
                if t < 1e-17 * h_sum.norm() {
                    h_err = t;
                    converged = true;
                    break;
                }
            }
            if !converged {
                return None;
            }
        }
        let h_val = pre_h * h_sum;
        let h_abs_err = pre_h.norm() * h_err;

        // exponential part
        let pre_e = self.pre_e;
        let nu = self.nu;
        let sx = x.sqrt();
        let mut e_val = Complex64::new(0.0, 0.0);
        let mut e_err = 0.0;
        if pre_e.norm() > 0.0 {
            for sign in [1.0, -1.0] {
                let i_sign = Complex64::new(0.0, sign);
                let zeta = 2.0 * sx * i_sign;
                let ln_zeta = (2.0 * sx).ln() + Complex64::new(0.0, sign * PI / 2.0);
                let lead = (zeta + nu * ln_zeta).exp();
                let inv = 1.0 / zeta;
                let mut pw = Complex64::new(1.0, 0.0);
                let mut s = Complex64::new(0.0, 0.0);
                let mut prev = f64::INFINITY;
                let mut last = f64::INFINITY;
                for c in &self.coef {
                    let t = *c * pw;
                    let tn = t.norm();
                    if tn > prev && tn > 1e-300 {
                        break;
                    }
                    s += t;
                    last = tn;
                    prev = tn;
                    if tn < 1e-17 * s.norm() {
                        break;
                    }
                    pw *= inv;
                }
                e_val += lead * s;
                e_err += lead.norm() * last;
            }
        }
        let value = h_val + pre_e * e_val;
        let error =
            h_abs_err + pre_e.norm() * e_err + 1e-15 * (h_val.norm() + (pre_e * e_val).norm());
        if !(value.re.is_finite() && value.im.is_finite()) {
            return None;
        }
        let scale = h_val.norm() + (pre_e * e_val).norm();
        Some((Estimate { value, error }, scale))
    }
}
