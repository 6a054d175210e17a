use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Cosine and sine integrals (Ci(x), Si(x)) for x > 0.
pub fn cisi(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x > 2.0 {
        // continued fraction for E1(ix), modified Lentz
        let one = Complex64::new(1.0, 0.0);
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1e300, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 2..200 {
            let a = -((i - 1) * (i - 1)) as f64;
            b += 2.0;
            d = one / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(x.cos(), -x.sin());
        (-h.re, FRAC_PI_2 + h.im)
    } else {
        let mut sum_c = 0.0;
        let mut sum_s = 0.0;
        let mut fact = 1.0;
        for k in 1..100usize {
            fact *= x / k as f64;
            let term = fact / k as f64;
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 1 {
                sum_s += sign * term;
            } else {
                sum_c += sign * term;
            }
            if term < 1e-18 {
                break;
            }
        }
        (sum_c + x.ln() + EULER_GAMMA, sum_s)
    }
}

/// Exponential integral of positive imaginary argument,
/// Ei(iy) = Ci(y) + i (Si(y) + pi/2).
pub fn ei_imag(y: f64) -> Result<Complex64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("ei_imag needs y > 0, got {y}")));
    }
    let (ci, si) = cisi(y);
    Ok(Complex64::new(ci, si + FRAC_PI_2))
}
