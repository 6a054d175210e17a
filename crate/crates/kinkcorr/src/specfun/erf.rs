use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), Poppe & Wijers (TOMS 680).
pub fn faddeeva(z: Complex64) -> Complex64 {
    let (xi, yi) = (z.re, z.im);
    let xabs = xi.abs();
    let yabs = yi.abs();
    let x = xabs / 6.3;
    let y = yabs / 4.4;
    let mut qrho = x * x + y * y;
    let xabsq = xabs * xabs;
    let xquad = xabsq - yabs * yabs;
    let yquad = 2.0 * xabs * yabs;

    let small = qrho < 0.085_264;
    let (mut u, mut v);
    let (mut u2, mut v2) = (0.0, 0.0);
    if small {
        // power series
        qrho = (1.0 - 0.85 * y) * qrho.sqrt();
        let n = (6.0 + 72.0 * qrho).round() as i64;
        let mut j = 2 * n + 1;
        let mut xsum = 1.0 / j as f64;
        let mut ysum = 0.0;
        for i in (1..=n).rev() {
            j -= 2;
            let xaux = (xsum * xquad - ysum * yquad) / i as f64;
            ysum = (xsum * yquad + ysum * xquad) / i as f64;
            xsum = xaux + 1.0 / j as f64;
        }
        let u1 = -TWO_OVER_SQRT_PI * (xsum * yabs + ysum * xabs) + 1.0;
        let v1 = TWO_OVER_SQRT_PI * (xsum * xabs - ysum * yabs);
        let daux = (-xquad).exp();
        u2 = daux * yquad.cos();
        v2 = -daux * yquad.sin();
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        let (h, kapn, nu);
        if qrho > 1.0 {
            h = 0.0;
            kapn = 0;
            qrho = qrho.sqrt();
            nu = (3.0 + 1442.0 / (26.0 * qrho + 77.0)) as i64;
        } else {
            qrho = (1.0 - y) * (1.0 - qrho).sqrt();
            h = 1.88 * qrho;
            kapn = (7.0 + 34.0 * qrho).round() as i64;
            nu = (16.0 + 26.0 * qrho).round() as i64;
        }
        let h2 = 2.0 * h;
        let b = h > 0.0;
        let mut qlambda = if b { h2.powi(kapn as i32) } else { 0.0 };
        let (mut rx, mut ry, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
        for n in (0..=nu).rev() {
            let np1 = (n + 1) as f64;
            let tx = yabs + h + np1 * rx;
            let ty = xabs - np1 * ry;
            let c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if b && n <= kapn {
                let tx = qlambda + sx;
                sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                qlambda /= h2;
            }
        }
        if h == 0.0 {
            u = TWO_OVER_SQRT_PI * rx;
            v = TWO_OVER_SQRT_PI * ry;
        } else {
            u = TWO_OVER_SQRT_PI * sx;
            v = TWO_OVER_SQRT_PI * sy;
        }
        if yabs == 0.0 {
            u = (-xabs * xabs).exp();
        }
    }

    // other quadrants
    if yi < 0.0 {
        if small {
            u2 *= 2.0;
            v2 *= 2.0;
        } else {
            let xq = -xquad;
            let w1 = 2.0 * xq.exp();
            u2 = w1 * yquad.cos();
            v2 = -w1 * yquad.sin();
        }
        u = u2 - u;
        v = v2 - v;
        if xi > 0.0 {
            v = -v;
        }
    } else if xi < 0.0 {
        v = -v;
    }
    Complex64::new(u, v)
}

// Maclaurin series, used for small |z| where 1 - exp(-z^2) w(iz) cancels.
fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for k in 1..60 {
        term *= -z2 / k as f64;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum * TWO_OVER_SQRT_PI
}

/// Complex error function (principal branch, entire).
///
/// Beyond |z| = 30 the value is saturated to its asymptotic limit
/// `sign(Re z)` away from the imaginary axis.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("erf of non-finite argument {z}")));
    }
    let w = erf_unchecked(z);
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Range(format!("erf({z}) overflows")));
    }
    Ok(w)
}

pub(crate) fn erf_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -erf_unchecked(-z);
    }
    let r = z.norm();
    if r < 1.0 {
        return erf_series(z);
    }
    if r >= 30.0 && z.re > z.im.abs() {
        return Complex64::new(1.0, 0.0);
    }
    let iz = Complex64::new(-z.im, z.re);
    Complex64::new(1.0, 0.0) - (-z * z).exp() * faddeeva(iz)
}

/// Real error function.
pub fn erf(x: f64) -> f64 {
    erf_unchecked(Complex64::new(x, 0.0)).re
}

/// Complementary error function for complex argument with Re z >= 0.
pub fn erfc_complex(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return Complex64::new(2.0, 0.0) - erfc_complex(-z);
    }
    let iz = Complex64::new(-z.im, z.re);
    (-z * z).exp() * faddeeva(iz)
}

/// Real complementary error function, accurate in the far right tail.
pub fn erfc(x: f64) -> f64 {
    erfc_complex(Complex64::new(x, 0.0)).re
}
