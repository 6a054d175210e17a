use std::f64::consts::PI;

use kinkcorr::specfun::{
    cisi, ei_imag, erf, erf_complex, erfc, gamma_fn, gamma_real, hyp1f2, theta2, theta3,
    Hyp1F2Params,
};
use kinkcorr::Error;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact partial sum of the 1F2 Maclaurin series with rational parameters,
/// stopped once the terms fall below 1e-40 of the sum.
fn hyp1f2_rational(a: &BigRational, b1: &BigRational, b2: &BigRational, z: &BigRational) -> f64 {
    let mut term = rat(1, 1);
    let mut sum = rat(1, 1);
    let tiny = rat(1, 10).pow(40);
    for k in 0..2000 {
        let kk = rat(k, 1);
        term = term * (a + &kk) * z / ((b1 + &kk) * (b2 + &kk) * (&kk + rat(1, 1)));
        sum += &term;
        let mag = if term < BigRational::zero() {
            -term.clone()
        } else {
            term.clone()
        };
        let smag = if sum < BigRational::zero() {
            -sum.clone()
        } else {
            sum.clone()
        };
        if k > 10 && mag < &smag * &tiny {
            break;
        }
    }
    sum.to_f64().expect("finite rational")
}

/// Maclaurin series of erf in plain doubles, accurate for small |z|.
fn erf_maclaurin(z: Complex64) -> Complex64 {
    let mut term = z;
    let mut sum = z;
    for n in 1..80 {
        term *= -z * z / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    sum * 2.0 / PI.sqrt()
}

/// Composite Simpson rule on `[a, b]`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn erf_examples() {
    assert_eq!(erf_complex(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    let z = c(1.0, 1.0);
    let d = erf_complex(-z).unwrap() + erf_complex(z).unwrap();
    assert!(d.norm() < 1e-15);
    assert!((erf(1.0) - 0.8427007929497149).abs() < 1e-15);
    assert!((erf_complex(c(1.0, 0.0)).unwrap() - erf_maclaurin(c(1.0, 0.0))).norm() < 1e-15);
}

#[test]
fn erf_matches_maclaurin_on_disc() {
    for k in 0..24 {
        let t = k as f64 * PI / 12.0;
        for r in [0.3, 1.1, 2.0] {
            let z = Complex64::from_polar(r, t);
            let w = erf_complex(z).unwrap();
            let o = erf_maclaurin(z);
            assert!(
                (w - o).norm() <= 1e-13 * o.norm().max(1e-300),
                "z = {z}: {w} vs {o}"
            );
        }
    }
}

#[test]
fn erf_rejects_non_finite_and_saturates() {
    assert!(matches!(
        erf_complex(c(f64::NAN, 0.0)),
        Err(Error::Domain(_))
    ));
    assert_eq!(erf_complex(c(40.0, 1.0)).unwrap(), c(1.0, 0.0));
    assert_eq!(erf_complex(c(-40.0, 1.0)).unwrap(), c(-1.0, 0.0));
    assert!((erfc(5.0) - 1.5374597944280348e-12).abs() < 1e-26);
}

#[test]
fn ei_imag_examples() {
    let e = ei_imag(1.0).unwrap();
    assert!((e.re - 0.3374039229009681).abs() < 1e-12);
    assert!((e.im - (0.946083070367183 + PI / 2.0)).abs() < 1e-12);
    let far = ei_imag(1e4).unwrap();
    assert!((far.im - PI).abs() < 1e-3);
    assert!(far.re.abs() < 1e-3);
    assert!(matches!(ei_imag(0.0), Err(Error::Domain(_))));
    assert!(matches!(ei_imag(-1.0), Err(Error::Domain(_))));
}

#[test]
fn cisi_matches_quadrature() {
    for y in [0.5, 2.5, 7.0, 13.0] {
        let si = simpson(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, y, 20_000);
        // Ci(y) = gamma + ln y + int_0^y (cos t - 1)/t dt
        let ci = 0.5772156649015329
            + y.ln()
            + simpson(
                |t| if t == 0.0 { 0.0 } else { (t.cos() - 1.0) / t },
                0.0,
                y,
                20_000,
            );
        let (c_lib, s_lib) = cisi(y);
        assert!((s_lib - si).abs() < 1e-12, "Si({y})");
        assert!((c_lib - ci).abs() < 1e-12, "Ci({y})");
        let e = ei_imag(y).unwrap();
        assert!((e.re - ci).abs() < 1e-12 && (e.im - si - PI / 2.0).abs() < 1e-12);
    }
}

#[test]
fn hyp1f2_examples() {
    let p = Hyp1F2Params::real(0.5, 1.5, 0.3).unwrap();
    assert_eq!(hyp1f2(p, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));

    let sinc = Hyp1F2Params::real(0.5, 1.5, 0.5).unwrap();
    let at_pi = hyp1f2(sinc, c(-PI * PI / 4.0, 0.0)).unwrap();
    assert!(at_pi.norm() < 1e-15);
    let z0: f64 = 2.3;
    let v = hyp1f2(sinc, c(-z0 * z0 / 4.0, 0.0)).unwrap();
    assert!((v.re - z0.sin() / z0).abs() < 1e-14);

    let exact = hyp1f2_rational(&rat(1, 2), &rat(3, 2), &rat(3, 10), &rat(-4, 1));
    let got = hyp1f2(p, c(-4.0, 0.0)).unwrap();
    assert!(
        (got.re - exact).abs() <= 1e-12 * exact.abs(),
        "{got} vs {exact}"
    );
    assert!(got.im.abs() < 1e-15);
}

#[test]
fn hyp1f2_large_negative_argument_against_exact_series() {
    let p = Hyp1F2Params::real(0.5, 1.5, 0.3).unwrap();
    for a in [60i64, 250, 900] {
        let exact = hyp1f2_rational(&rat(1, 2), &rat(3, 2), &rat(3, 10), &rat(-a, 1));
        let got = hyp1f2(p, c(-a as f64, 0.0)).unwrap();
        assert!(
            (got.re - exact).abs() <= 1e-10 * exact.abs(),
            "a = {a}: {got} vs {exact}"
        );
    }
}

#[test]
fn hyp1f2_poles_and_ceiling() {
    assert!(matches!(
        Hyp1F2Params::real(0.5, -2.0, 1.0),
        Err(Error::Pole(_))
    ));
    assert!(matches!(
        Hyp1F2Params::real(0.5, 1.0, 0.0),
        Err(Error::Pole(_))
    ));
    let p = Hyp1F2Params::real(0.5, 1.5, 0.3).unwrap();
    assert!(hyp1f2(p, c(-2e4, 0.0)).is_err());
}

#[test]
fn gamma_examples() {
    assert!((gamma_fn(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    assert!((gamma_fn(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-15);
    let s = c(0.3, 0.1);
    let r = gamma_fn(s + 1.0).unwrap() / gamma_fn(s).unwrap();
    assert!((r - s).norm() < 1e-14);
    assert!(matches!(gamma_fn(c(0.0, 0.0)), Err(Error::Pole(_))));
    assert!(matches!(gamma_fn(c(-3.0, 0.0)), Err(Error::Pole(_))));
    assert!(matches!(gamma_real(-1.0), Err(Error::Pole(_))));
    assert!((gamma_real(10.0).unwrap() - 362880.0).abs() < 1e-8);
}

#[test]
fn theta_examples() {
    let zero = c(0.0, 0.0);
    assert_eq!(theta3(zero, zero).unwrap(), c(1.0, 0.0));
    assert!(
        (theta3(zero, c(0.1, 0.0)).unwrap().re - (1.0 + 2.0 * (0.1 + 1e-4 + 1e-9 + 1e-16))).abs()
            < 1e-15
    );
    let (z, q) = (c(0.2, 0.0), c(0.3, 0.0));
    let q4 = q.powi(4);
    let d = theta3(z, q).unwrap() - theta3(2.0 * z, q4).unwrap() - theta2(2.0 * z, q4).unwrap();
    assert!(d.norm() < 1e-15);
    assert!(matches!(theta3(zero, c(1.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(theta2(zero, c(0.0, 1.2)), Err(Error::Domain(_))));
}

#[test]
fn theta_identity_on_grid() {
    for zr in [-0.7, 0.0, 0.4, 1.3] {
        for zi in [0.0, 0.2] {
            for qr in [0.05, 0.3, 0.6, 0.85] {
                let (z, q) = (c(zr, zi), c(qr, 0.1 * qr));
                let q4 = q.powi(4);
                let lhs = theta3(z, q).unwrap();
                let rhs = theta3(2.0 * z, q4).unwrap() + theta2(2.0 * z, q4).unwrap();
                assert!(
                    (lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0),
                    "z = {z}, q = {q}"
                );
            }
        }
    }
}

/// 0F1(; b; z) by direct summation.
fn hyp0f1(b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..200 {
        term *= z / ((b + k as f64) * (k as f64 + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn erf_is_odd(r in 0.0f64..3.0, t in 0.0f64..(2.0 * PI)) {
        let z = Complex64::from_polar(r, t);
        let d = erf_complex(z).unwrap() + erf_complex(-z).unwrap();
        prop_assert!(d.norm() <= 1e-14 * erf_complex(z).unwrap().norm().max(1.0));
    }

    #[test]
    fn gamma_recurrence(re in -4.5f64..6.0, im in 0.05f64..5.0) {
        let s = c(re, im);
        let lhs = gamma_fn(s + 1.0).unwrap();
        let rhs = s * gamma_fn(s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn hyp1f2_reduces_to_0f1(a in 0.2f64..3.0, b in 0.3f64..4.0, x in -12.0f64..4.0) {
        let p = Hyp1F2Params::real(a, a, b).unwrap();
        let v = hyp1f2(p, c(x, 0.0)).unwrap();
        let o = hyp0f1(b, x);
        prop_assert!((v.re - o).abs() <= 1e-10 * o.abs().max(1e-3), "{} vs {}", v.re, o);
    }

    #[test]
    fn hyp1f2_matches_exact_series(an in 1i64..40, b1n in 1i64..40, b2n in 1i64..40, zn in -300i64..40) {
        let (a, b1, b2, z) = (rat(an, 8), rat(b1n, 8), rat(b2n, 8), rat(zn, 2));
        let exact = hyp1f2_rational(&a, &b1, &b2, &z);
        let p = Hyp1F2Params::real(an as f64 / 8.0, b1n as f64 / 8.0, b2n as f64 / 8.0).unwrap();
        let got = hyp1f2(p, c(zn as f64 / 2.0, 0.0)).unwrap();
        // near a zero of 1F2 the relative error is measured against the
        // scale of the series near the origin
        prop_assert!((got.re - exact).abs() <= 1e-10 * exact.abs().max(1e-6), "{} vs {}", got.re, exact);
    }

    #[test]
    fn ei_imag_limits_are_approached(y in 50.0f64..100.0) {
        let e = ei_imag(y).unwrap();
        prop_assert!(e.re.abs() <= 1.0 / y + 1e-12);
        prop_assert!((e.im - PI).abs() <= 1.0 / y + 1e-12);
    }
}
