use std::f64::consts::PI;

use kinkcorr::corrections::{assemble_total, BoundaryCondition, DomainConfig};
use kinkcorr::specfun::{gamma_fn, hyp1f2_with, Hyp1F2Options, Hyp1F2Params};
use kinkcorr::zeta_oracle::{
    mellin_term, mellin_term_with, oracle_total, zeta_sderiv_at_zero, OracleOptions, ShellCutoff,
    TraceTerm,
};
use kinkcorr::Error;
use num_complex::Complex64;

use BoundaryCondition::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dims(l1: f64, l2: f64) -> DomainConfig {
    DomainConfig::dimensionless(l1, l2).unwrap()
}

/// Closed form of `E(w; a) = int_C u^{w-1} exp(a/u) erf(sqrt u) du`:
/// `-Gamma(w + 1/2) / (sqrt(pi) w) 1F2(-w; 1/2 - w, 1 - w; -a)
///  + (2 / sqrt(pi)) Gamma(-w - 1/2) a^{w + 1/2} e^{i pi (w + 1/2)} 1F2(1/2; 3/2, w + 3/2; -a)`.
fn erf_contour_closed_form(w: f64, a: f64) -> Complex64 {
    let opts = Hyp1F2Options {
        ceiling: 1e4,
        rel_tol: 1e-12,
    };
    let f1 = hyp1f2_with(
        Hyp1F2Params::real(-w, 0.5 - w, 1.0 - w).unwrap(),
        c(-a, 0.0),
        &opts,
    )
    .unwrap()
    .value;
    let f2 = hyp1f2_with(
        Hyp1F2Params::real(0.5, 1.5, w + 1.5).unwrap(),
        c(-a, 0.0),
        &opts,
    )
    .unwrap()
    .value;
    let g1 = gamma_fn(c(w + 0.5, 0.0)).unwrap();
    let g2 = gamma_fn(c(-w - 0.5, 0.0)).unwrap();
    let sp = PI.sqrt();
    -g1 / (sp * w) * f1
        + 2.0 / sp * g2 * a.powf(w + 0.5) * Complex64::from_polar(1.0, PI * (w + 0.5)) * f2
}

#[test]
fn b_type_mellin_matches_closed_form() {
    for (n, lambda, s) in [
        (1u64, 1.0, 0.3),
        (2, 1.3, 0.3),
        (1, 2.0, 0.15),
        (3, 0.9, 0.4),
    ] {
        let m = mellin_term(c(s, 0.0), &TraceTerm::B { n, lambda }).unwrap();
        let a = (n as f64 * lambda).powi(2);
        let closed = lambda / (4.0 * PI) * erf_contour_closed_form(s - 1.0, a);
        assert!(
            (m.value - closed).norm() <= 1e-6 * closed.norm(),
            "n {n} lambda {lambda}: {} vs {closed}",
            m.value
        );
    }
}

#[test]
fn real_integrands_give_real_transforms() {
    for (term, s) in [
        (TraceTerm::AConstant, 0.25),
        (TraceTerm::ALinear { lambda: 1.5 }, 0.7),
        (
            TraceTerm::ABulk {
                lambda1: 1.0,
                lambda2: 2.0,
            },
            1.2,
        ),
    ] {
        let m = mellin_term(c(s, 0.0), &term).unwrap();
        assert!(
            m.value.im.abs() <= 1e-14 * m.value.re.abs(),
            "{term:?}: {}",
            m.value
        );
        assert!(m.est_error >= 0.0);
    }
}

#[test]
fn strip_violations_name_the_strip() {
    let err = mellin_term(c(0.8, 0.0), &TraceTerm::AConstant).unwrap_err();
    match err {
        Error::Domain(msg) => assert!(msg.contains("(0, 0.5)"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
    assert!(mellin_term(c(1.2, 0.0), &TraceTerm::B { n: 1, lambda: 1.0 }).is_err());
    assert!(mellin_term(c(0.3, 0.0), &TraceTerm::B { n: 0, lambda: 1.0 }).is_err());
    assert!(mellin_term(c(f64::NAN, 0.0), &TraceTerm::AConstant).is_err());
}

#[test]
fn mellin_transform_is_analytic() {
    let term = TraceTerm::D {
        n1: 1,
        n2: 2,
        mu1: 1.1,
        mu2: 0.8,
        lambda1: 1.1,
        lambda2: 0.8,
    };
    for s0 in [c(0.3, 0.0), c(0.6, 0.4), c(-0.2, -0.3)] {
        let h = 1e-4;
        let m = |s: Complex64| mellin_term(s, &term).unwrap().value;
        let dx = (m(s0 + h) - m(s0 - h)) / (2.0 * h);
        let dy = (m(s0 + c(0.0, h)) - m(s0 - c(0.0, h))) / c(0.0, 2.0 * h);
        assert!(
            (dx - dy).norm() <= 1e-6 * dx.norm(),
            "at {s0}: {dx} vs {dy}"
        );
    }
}

#[test]
fn quadrature_errors_are_honest() {
    let term = TraceTerm::C {
        n: 2,
        mu: 1.7,
        lambda1: 1.7,
        lambda2: 1.0,
    };
    let loose = OracleOptions {
        rel_tol: 1e-7,
        ..OracleOptions::default()
    };
    let tight = OracleOptions {
        rel_tol: 5e-8,
        ..OracleOptions::default()
    };
    for s in [c(0.3, 0.0), c(0.9, 0.5)] {
        let a = mellin_term_with(s, &term, &loose).unwrap();
        let b = mellin_term_with(s, &term, &tight).unwrap();
        assert!((a.value - b.value).norm() <= a.est_error.max(1e-15 * a.value.norm()));
    }
}

#[test]
fn continuum_coefficients() {
    let e = |t: TraceTerm| zeta_sderiv_at_zero(&t).unwrap().energy;
    assert!((e(TraceTerm::AConstant) + 1.0 / (4.0 * PI)).abs() < 1e-8);
    for lambda in [0.5, 1.0, 7.0] {
        assert!(
            (e(TraceTerm::ALinear { lambda }) + lambda / (8.0 * PI)).abs() < 1e-8 * lambda.max(1.0)
        );
    }
    let (l1, l2) = (1.3, 4.2);
    assert!(
        (e(TraceTerm::ABulk {
            lambda1: l1,
            lambda2: l2
        }) - 5.0 * l1 * l2 / (72.0 * PI * PI))
            .abs()
            < 1e-8
    );
}

#[test]
fn end_to_end_agreement_at_lambda_three() {
    let cfg = dims(3.0, 3.0);
    let closed = assemble_total(Dirichlet, Dirichlet, &cfg).unwrap();
    let oracle = oracle_total(Dirichlet, Dirichlet, &cfg, ShellCutoff::Auto).unwrap();
    assert!(oracle.resolved);
    assert!(oracle.truncation_bound < 1e-5);
    assert!((closed.dimensionless_total - oracle.value).abs() < 1e-4);
}

#[test]
fn oracle_reproduces_sign_flip() {
    let (l1, l2) = (1.5, 2.5);
    let cfg = dims(l1, l2);
    let dd = oracle_total(Dirichlet, Dirichlet, &cfg, ShellCutoff::Auto).unwrap();
    let nn = oracle_total(Neumann, Neumann, &cfg, ShellCutoff::Auto).unwrap();
    let expected = 2.0 * (l1 + l2) / (8.0 * PI) - 2.0 * dd.terms.b_term;
    assert!((nn.value - dd.value - expected).abs() < 1e-8);
}

#[test]
fn oracle_approaches_the_bulk_coefficient() {
    let bulk = 5.0 / (72.0 * PI * PI);
    let mut last = f64::INFINITY;
    for lambda in [5.0, 10.0, 20.0] {
        let o = oracle_total(
            Dirichlet,
            Dirichlet,
            &dims(lambda, lambda),
            ShellCutoff::Auto,
        )
        .unwrap();
        let dev = (o.value / (lambda * lambda) - bulk).abs() / bulk;
        assert!(dev < last, "lambda {lambda}: {dev}");
        last = dev;
    }
}

#[test]
fn explicit_shell_cutoff() {
    let cfg = dims(1.0, 1.0);
    let auto = oracle_total(Dirichlet, Dirichlet, &cfg, ShellCutoff::Auto).unwrap();
    let fixed = oracle_total(Dirichlet, Dirichlet, &cfg, ShellCutoff::Radius(400.0)).unwrap();
    assert!(
        (auto.value - fixed.value).abs()
            <= 10.0 * (auto.truncation_bound + fixed.truncation_bound) + 1e-10
    );
    assert!(oracle_total(Dirichlet, Dirichlet, &cfg, ShellCutoff::Radius(50.0)).is_err());
    assert!(oracle_total(Dirichlet, Dirichlet, &dims(1e-7, 1.0), ShellCutoff::Auto).is_err());
}
