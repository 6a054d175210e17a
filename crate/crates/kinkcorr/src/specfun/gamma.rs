use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

// Lanczos sum for Re s >= 1/2, returns Gamma(s).
fn lanczos(s: Complex64) -> Complex64 {
    let z = s - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Complex Gamma function.
pub fn gamma_fn(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("gamma of non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("gamma has a pole at {}", s.re)));
    }
    Ok(gamma_unchecked(s))
}

pub(crate) fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        // reflection
        PI / ((PI * s).sin() * lanczos(1.0 - s))
    } else {
        lanczos(s)
    }
}

/// Reciprocal Gamma function, entire, exactly zero at the poles of Gamma.
pub fn rgamma(s: Complex64) -> Complex64 {
    if is_nonpositive_integer(s) {
        return Complex64::new(0.0, 0.0);
    }
    if s.re < 0.5 {
        (PI * s).sin() * lanczos(1.0 - s) / PI
    } else {
        1.0 / lanczos(s)
    }
}

/// Real Gamma function.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma_fn(Complex64::new(x, 0.0)).map(|g| g.re)
}
