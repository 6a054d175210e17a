//! Cross-checks of the closed forms against identities and the oracle.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::corrections::{
    assemble_total, assemble_total_with, b_bracket, bulk_term, de_b_single_with, shell_derivative,
    shell_kernel, BoundaryCondition, CorrectionBreakdown, DomainConfig, SeriesOptions,
};
use crate::error::Result;
use crate::heat_traces::{trace_accelerated, trace_direct, EuclideanTime, TransverseSpectrumSpec};
use crate::specfun::gamma_real;
use crate::zeta_oracle::{mellin_term, oracle_total, zeta_sderiv_at_zero, ShellCutoff, TraceTerm};

/// How much of the check suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    /// Identities and single-shell oracle checks, a few seconds.
    Fast,
    /// Adds the end-to-end oracle comparisons and the large- and
    /// small-size limits, a few minutes.
    Full,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Measured deviation, in the units of `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// A documented failure of the published formulas, not of the code.
    pub known_failure: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    fn new(name: &str, measured: f64, tolerance: f64, detail: String) -> Check {
        Check {
            name: name.to_string(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            known_failure: false,
            detail,
            elapsed: Duration::ZERO,
        }
    }

    fn errored(name: &str, tolerance: f64, err: crate::Error) -> Check {
        Check {
            name: name.to_string(),
            measured: f64::INFINITY,
            tolerance,
            passed: false,
            known_failure: false,
            detail: format!("evaluation failed: {err}"),
            elapsed: Duration::ZERO,
        }
    }

    fn known(mut self) -> Check {
        self.known_failure = !self.passed;
        self
    }

    /// `PASS`, `FAIL` or `FAIL (known)`.
    pub fn status(&self) -> &'static str {
        match (self.passed, self.known_failure) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<13} {:<34} measured {:.3e}  tol {:.1e}  ({:.2} s)  {}",
            self.status(),
            self.name,
            self.measured,
            self.tolerance,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Results of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether every failing check is a documented one.
    pub fn only_known_failures(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.known_failure)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let known = self.checks.iter().filter(|c| c.known_failure).count();
        write!(
            f,
            "{} checks, {} passed, {} failed ({} known) in {:.1} s",
            self.checks.len(),
            self.checks.len() - failed,
            failed,
            known,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed(f: impl FnOnce() -> Check) -> Check {
    let t = Instant::now();
    let mut c = f();
    c.elapsed = t.elapsed();
    c
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Direct mode sums (`n_max = 10^4`) against the accelerated traces for all
/// boundary conditions, the given sizes and 20 log-spaced `u` in
/// `[0.01, 100]`. Measures the largest relative difference.
pub fn check_poisson_equivalence(lambdas: &[f64]) -> Check {
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    for bc in BoundaryCondition::ALL {
        for &lambda in lambdas {
            let spec = match TransverseSpectrumSpec::new(bc, lambda) {
                Ok(s) => s,
                Err(e) => return Check::errored("poisson equivalence", 1e-10, e),
            };
            for k in 0..20 {
                let u = 10f64.powf(-2.0 + 4.0 * k as f64 / 19.0);
                let time = match EuclideanTime::new(u) {
                    Ok(t) => t,
                    Err(e) => return Check::errored("poisson equivalence", 1e-10, e),
                };
                let direct = match trace_direct(spec, time, 10_000) {
                    Ok(v) => v,
                    Err(e) => return Check::errored("poisson equivalence", 1e-10, e),
                };
                let d = rel(direct, trace_accelerated(spec, time));
                if d > worst {
                    worst = d;
                    at = format!("worst at {bc}, lambda {lambda}, u {u:.3e}");
                }
            }
        }
    }
    Check::new("poisson equivalence", worst, 1e-10, at)
}

/// Continuum coefficients from the oracle: the constant `-1/(4 pi)`, the
/// edge coefficient `-1/(8 pi)` and the bulk coefficient `5/(72 pi^2)`.
/// Measures the largest absolute coefficient error.
pub fn check_a_coefficients() -> Check {
    let (l1, l2) = (1.7, 2.9);
    let run = || -> Result<(f64, f64, f64)> {
        let c = zeta_sderiv_at_zero(&TraceTerm::AConstant)?.energy;
        let lin = zeta_sderiv_at_zero(&TraceTerm::ALinear { lambda: l1 })?.energy / l1;
        let bulk = zeta_sderiv_at_zero(&TraceTerm::ABulk {
            lambda1: l1,
            lambda2: l2,
        })?
        .energy
            / (l1 * l2);
        Ok((c, lin, bulk))
    };
    match run() {
        Ok((c, lin, bulk)) => {
            let d = [
                (c + 1.0 / (4.0 * PI)).abs(),
                (lin + 1.0 / (8.0 * PI)).abs(),
                (bulk - 5.0 / (72.0 * PI * PI)).abs(),
            ];
            Check::new(
                "a-term coefficients",
                d.iter().cloned().fold(0.0, f64::max),
                1e-8,
                format!("const {c:.12e}, edge {lin:.12e}, bulk {bulk:.12e}"),
            )
        }
        Err(e) => Check::errored("a-term coefficients", 1e-8, e),
    }
}

/// Relative difference between `bulk(lambda1, lambda2)` and the oracle's bulk
/// energy. With [`bulk_term`] this passes; any perturbation of the
/// coefficient above `1e-8` fails.
pub fn check_bulk_coefficient(bulk: impl Fn(f64, f64) -> f64) -> Check {
    let (l1, l2) = (2.5, 4.0);
    match zeta_sderiv_at_zero(&TraceTerm::ABulk {
        lambda1: l1,
        lambda2: l2,
    }) {
        Ok(z) => {
            let v = bulk(l1, l2);
            Check::new(
                "bulk coefficient",
                rel(v, z.energy),
                1e-8,
                format!("closed {v:.12e}, oracle {:.12e}", z.energy),
            )
        }
        Err(e) => Check::errored("bulk coefficient", 1e-8, e),
    }
}

/// Single shells of the b, c and d terms against the oracle. Measures the
/// largest relative difference.
pub fn check_single_shells() -> Check {
    let (l1, l2) = (1.0, 1.5);
    let run = || -> Result<[(f64, f64); 3]> {
        let k = 2.0 * l1 * l2 / (PI * PI);
        let b = zeta_sderiv_at_zero(&TraceTerm::B { n: 1, lambda: 2.0 })?.energy;
        let b_closed = b_bracket(2.0)? / (8.0 * PI * 2.0);
        let c = zeta_sderiv_at_zero(&TraceTerm::C {
            n: 2,
            mu: l1,
            lambda1: l1,
            lambda2: l2,
        })?
        .energy;
        let c_closed = k * shell_derivative(4.0 * l1 * l1, 1e-3, 1e-8)?;
        let d = zeta_sderiv_at_zero(&TraceTerm::D {
            n1: 1,
            n2: 1,
            mu1: l1,
            mu2: l2,
            lambda1: l1,
            lambda2: l2,
        })?
        .energy;
        let d_closed = k * shell_derivative(l1 * l1 + l2 * l2, 1e-3, 1e-8)?;
        Ok([(b, b_closed), (c, c_closed), (d, d_closed)])
    };
    match run() {
        Ok(pairs) => {
            let d = pairs.iter().map(|&(o, c)| rel(c, o)).fold(0.0, f64::max);
            Check::new(
                "single-shell oracle (b, c, d)",
                d,
                1e-8,
                format!(
                    "b {:.3e}, c {:.3e}, d {:.3e}",
                    rel(pairs[0].1, pairs[0].0),
                    rel(pairs[1].1, pairs[1].0),
                    rel(pairs[2].1, pairs[2].0)
                ),
            )
        }
        Err(e) => Check::errored("single-shell oracle (b, c, d)", 1e-8, e),
    }
}

/// The closed-form shell kernel at `s = 0.3` against the Mellin transforms
/// of `tuples` random c- and d-type shells (seeded). Measures the largest
/// relative difference.
pub fn check_generic_s(tuples: usize, seed: u64) -> Check {
    let s = 0.3;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    let gamma_s = match gamma_real(s) {
        Ok(g) => g,
        Err(e) => return Check::errored("generic-s oracle", 1e-6, e),
    };
    let phase = Complex64::from_polar(1.0, -0.5 * PI * s);
    for k in 0..tuples {
        let (l1, l2): (f64, f64) = (rng.gen_range(0.5..5.0), rng.gen_range(0.5..5.0));
        let (n1, n2): (u64, u64) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (term, a, weight) = if k % 2 == 0 {
            (
                TraceTerm::C {
                    n: n1,
                    mu: l1,
                    lambda1: l1,
                    lambda2: l2,
                },
                (n1 as f64 * l1).powi(2),
                2.0,
            )
        } else {
            let a = (n1 as f64 * l1).powi(2) + (n2 as f64 * l2).powi(2);
            (
                TraceTerm::D {
                    n1,
                    n2,
                    mu1: l1,
                    mu2: l2,
                    lambda1: l1,
                    lambda2: l2,
                },
                a,
                1.0,
            )
        };
        let run = || -> Result<f64> {
            let m = mellin_term(Complex64::new(s, 0.0), &term)?;
            let oracle = weight * PI * PI * phase * m.value / (l1 * l2 * gamma_s);
            let closed = shell_kernel(s, a)?;
            Ok((closed - oracle).norm() / oracle.norm())
        };
        match run() {
            Ok(d) => {
                if d > worst {
                    worst = d;
                    at = format!("worst at {term:?}");
                }
            }
            Err(e) => return Check::errored("generic-s oracle", 1e-6, e),
        }
    }
    Check::new(
        "generic-s oracle",
        worst,
        1e-6,
        format!("{tuples} shells; {at}"),
    )
}

/// Term-level composition identities: (N,N) against (D,D), the vanishing
/// continuum terms of (P,P) and the (D,N) constant. Measures the largest
/// absolute deviation.
pub fn check_composition() -> Check {
    use BoundaryCondition::*;
    let (l1, l2) = (1.3, 0.9);
    let run = || -> Result<(f64, String)> {
        let cfg = DomainConfig::dimensionless(l1, l2)?;
        let dd = assemble_total(Dirichlet, Dirichlet, &cfg)?.terms;
        let nn = assemble_total(Neumann, Neumann, &cfg)?.terms;
        let pp = assemble_total(Periodic, Periodic, &cfg)?.terms;
        let dn = assemble_total(Dirichlet, Neumann, &cfg)?.terms;
        let diff = nn.total() - dd.total();
        let expected = 2.0 * (l1 + l2) / (8.0 * PI) - 2.0 * dd.b_term;
        let devs = [
            (diff - expected).abs(),
            (nn.lin_l1 - dd.lin_l1 - 2.0 * l1 / (8.0 * PI)).abs(),
            (nn.lin_l2 - dd.lin_l2 - 2.0 * l2 / (8.0 * PI)).abs(),
            (nn.b_term + dd.b_term).abs(),
            (nn.const_term - dd.const_term).abs(),
            (nn.c_term - dd.c_term).abs(),
            (nn.d_term - dd.d_term).abs(),
            pp.const_term.abs(),
            pp.lin_l1.abs(),
            pp.lin_l2.abs(),
            pp.b_term.abs(),
            (dn.const_term - 1.0 / (4.0 * PI)).abs(),
        ];
        Ok((
            devs.iter().cloned().fold(0.0, f64::max),
            format!("(N,N) - (D,D) = {diff:.12e}"),
        ))
    };
    match run() {
        Ok((d, detail)) => Check::new("composition structure", d, 1e-14, detail),
        Err(e) => Check::errored("composition structure", 1e-14, e),
    }
}

/// The action normalization over six orders of magnitude leaves every
/// output bit unchanged. Measures the number of differing breakdowns.
pub fn check_a_independence() -> Check {
    let run = || -> Result<usize> {
        let reference = assemble_total(
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Dirichlet,
            &DomainConfig::dimensionless(1.0, 1.2)?,
        )?;
        let mut differing = 0;
        for k in -3..=3 {
            let cfg = DomainConfig::new(1.0, 1.2, 1.0, 1.0, 1.0, 10f64.powi(k))?;
            let r = assemble_total(
                BoundaryCondition::Dirichlet,
                BoundaryCondition::Dirichlet,
                &cfg,
            )?;
            if !same_bits(&r, &reference) {
                differing += 1;
            }
        }
        Ok(differing)
    };
    match run() {
        Ok(n) => Check::new(
            "action-normalization independence",
            n as f64,
            0.0,
            "A from 1e-3 to 1e3".into(),
        ),
        Err(e) => Check::errored("action-normalization independence", 0.0, e),
    }
}

fn same_bits(a: &CorrectionBreakdown, b: &CorrectionBreakdown) -> bool {
    let fa = [
        a.total,
        a.dimensionless_total,
        a.const_term,
        a.lin_l1,
        a.lin_l2,
        a.bulk,
        a.b_term,
        a.c_term,
        a.d_term,
    ];
    let fb = [
        b.total,
        b.dimensionless_total,
        b.const_term,
        b.lin_l1,
        b.lin_l2,
        b.bulk,
        b.b_term,
        b.c_term,
        b.d_term,
    ];
    fa.iter()
        .zip(fb.iter())
        .all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Local maxima of `de_b_single` on `[2, 30]`, located by parabolic
/// refinement on a grid of step `0.01`. Near `lambda = k pi` the series
/// needs far more than the default number of terms, so the index ceiling
/// is raised to `10^6`.
pub fn de_b_maxima() -> Result<Vec<f64>> {
    let h = 0.01;
    let opts = SeriesOptions {
        tol: 1e-8,
        n_max: 1_000_000,
        ..SeriesOptions::default()
    };
    let xs: Vec<f64> = (0..=2800).map(|k| 2.0 + h * k as f64).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| de_b_single_with(x, &opts).map(|v| v.value))
        .collect::<Result<_>>()?;
    let mut maxima = Vec::new();
    for k in 1..xs.len() - 1 {
        if ys[k] > ys[k - 1] && ys[k] >= ys[k + 1] {
            let denom = ys[k - 1] - 2.0 * ys[k] + ys[k + 1];
            maxima.push(xs[k] + 0.5 * h * (ys[k - 1] - ys[k + 1]) / denom);
        }
    }
    Ok(maxima)
}

/// Spacing of the maxima of `de_b_single` on `[2, 30]` against `pi`.
/// Measures the largest relative deviation.
pub fn check_quasiperiod() -> Check {
    match de_b_maxima() {
        Ok(m) if m.len() >= 2 => {
            let d = m
                .windows(2)
                .map(|w| rel(w[1] - w[0], PI))
                .fold(0.0, f64::max);
            Check::new(
                "quasiperiod of de_b",
                d,
                0.05,
                format!("{} maxima, first at {:.4}", m.len(), m[0]),
            )
        }
        Ok(m) => Check::new(
            "quasiperiod of de_b",
            f64::INFINITY,
            0.05,
            format!("only {} maxima", m.len()),
        ),
        Err(e) => Check::errored("quasiperiod of de_b", 0.05, e),
    }
}

/// `|assemble_total - oracle_total|` for (D,D) at the given sizes.
pub fn check_oracle_total(l1: f64, l2: f64) -> Check {
    let name = format!("oracle total (D,D) at ({l1}, {l2})");
    let run = || -> Result<(f64, f64)> {
        let cfg = DomainConfig::dimensionless(l1, l2)?;
        let closed = assemble_total(
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Dirichlet,
            &cfg,
        )?;
        let oracle = oracle_total(
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Dirichlet,
            &cfg,
            ShellCutoff::Auto,
        )?;
        Ok((closed.dimensionless_total, oracle.value))
    };
    match run() {
        Ok((c, o)) => Check::new(
            &name,
            (c - o).abs(),
            1e-4,
            format!("closed {c:.12e}, oracle {o:.12e}"),
        ),
        Err(e) => Check::errored(&name, 1e-4, e),
    }
}

/// `total / (lambda1 lambda2)` at `lambda1 = lambda2 = lambda` against the
/// bulk coefficient, relative. A documented failure for (D,D), (N,N) and
/// (P,P) at `lambda = 40`.
pub fn check_bulk_limit(bc1: BoundaryCondition, bc2: BoundaryCondition, lambda: f64) -> Check {
    let name = format!("bulk limit ({bc1},{bc2}) at {lambda}");
    let target = 5.0 / (72.0 * PI * PI);
    let run = || -> Result<f64> {
        let cfg = DomainConfig::dimensionless(lambda, lambda)?;
        let opts = SeriesOptions {
            tol: 1e-4,
            ..SeriesOptions::default()
        };
        Ok(assemble_total_with(bc1, bc2, &cfg, &opts)?.dimensionless_total / (lambda * lambda))
    };
    match run() {
        Ok(q) => Check::new(&name, rel(q, target), 0.01, format!("total/area {q:.8e}")).known(),
        Err(e) => Check::errored(&name, 0.01, e),
    }
}

/// Physical b term `2 hbar m c de_b_single(m l)` at `m = 1` and `m = 2` for
/// fixed `l`. A documented failure at `l <= 1e-2`.
pub fn check_small_l_m_independence(l: f64) -> Check {
    let name = format!("m-independence of b term at l = {l}");
    let opts = SeriesOptions {
        tol: 1.0,
        ..SeriesOptions::default()
    };
    let energy = |m: f64| de_b_single_with(m * l, &opts).map(|v| 2.0 * m * v.value);
    match (energy(1.0), energy(2.0)) {
        (Ok(e1), Ok(e2)) => Check::new(
            &name,
            rel(e2, e1),
            0.01,
            format!("m = 1: {e1:.8e}, m = 2: {e2:.8e}"),
        )
        .known(),
        (Err(e), _) | (_, Err(e)) => Check::errored(&name, 0.01, e),
    }
}

/// Runs the check suite at the given level.
pub fn verify(level: VerifyLevel) -> VerifyReport {
    let t = Instant::now();
    let mut checks = vec![
        timed(|| check_poisson_equivalence(&[0.5, 1.0, 5.0])),
        timed(check_a_coefficients),
        timed(|| check_bulk_coefficient(bulk_term)),
        timed(check_single_shells),
        timed(|| check_generic_s(if level == VerifyLevel::Full { 20 } else { 6 }, 0x5eed)),
        timed(check_composition),
        timed(check_a_independence),
        timed(check_quasiperiod),
    ];
    if level == VerifyLevel::Full {
        for (l1, l2) in [(1.0, 1.0), (2.0, 3.0), (5.0, 5.0)] {
            checks.push(timed(|| check_oracle_total(l1, l2)));
        }
        use BoundaryCondition::*;
        for (a, b) in [
            (Dirichlet, Dirichlet),
            (Neumann, Neumann),
            (Periodic, Periodic),
            (MixedDN, MixedDN),
        ] {
            checks.push(timed(|| check_bulk_limit(a, b, 40.0)));
        }
        for l in [1e-2, 5e-3, 1e-3] {
            checks.push(timed(|| check_small_l_m_independence(l)));
        }
    }
    VerifyReport {
        level,
        checks,
        elapsed: t.elapsed(),
    }
}
