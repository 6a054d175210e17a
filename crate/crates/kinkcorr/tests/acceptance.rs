//! Acceptance suite: one line per criterion, followed by the individual
//! checks. Exits with status 1 when a criterion fails for a reason that is
//! not documented as a known failure, or when a runtime budget is exceeded.

use std::time::{Duration, Instant};

use kinkcorr::cli::{
    check_a_coefficients, check_a_independence, check_bulk_limit, check_composition,
    check_generic_s, check_oracle_total, check_poisson_equivalence, check_quasiperiod,
    check_small_l_m_independence, Check,
};
use kinkcorr::corrections::{BoundaryCondition, DomainConfig};

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    checks: Vec<Check>,
    elapsed: Duration,
}

impl Criterion {
    fn run(
        id: u32,
        title: &'static str,
        budget: Option<Duration>,
        body: impl FnOnce() -> Vec<Check>,
    ) -> Criterion {
        let t = Instant::now();
        let checks = body();
        Criterion {
            id,
            title,
            budget,
            checks,
            elapsed: t.elapsed(),
        }
    }

    fn within_budget(&self) -> bool {
        self.budget.map_or(true, |b| self.elapsed <= b)
    }

    fn passed(&self) -> bool {
        self.within_budget() && self.checks.iter().all(|c| c.passed)
    }

    fn known(&self) -> bool {
        self.within_budget() && self.checks.iter().all(|c| c.passed || c.known_failure)
    }

    fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else if self.known() {
            "FAIL (known)"
        } else {
            "FAIL"
        }
    }
}

fn timed(f: impl FnOnce() -> Check) -> Check {
    let t = Instant::now();
    let mut c = f();
    c.elapsed = t.elapsed();
    c
}

fn main() {
    use BoundaryCondition::*;
    let secs = Duration::from_secs;
    let criteria = vec![
        Criterion::run(
            1,
            "Poisson-summation equivalence of the transverse traces",
            Some(secs(5)),
            || vec![timed(|| check_poisson_equivalence(&[0.5, 1.0, 5.0]))],
        ),
        Criterion::run(
            2,
            "exact continuum coefficients from the oracle",
            None,
            || vec![timed(check_a_coefficients)],
        ),
        Criterion::run(
            3,
            "generic-s oracle match of the shell kernels",
            Some(secs(30)),
            || vec![timed(|| check_generic_s(20, 0x5eed))],
        ),
        Criterion::run(
            4,
            "end-to-end oracle agreement for (D,D)",
            Some(secs(300)),
            || {
                [(1.0, 1.0), (2.0, 3.0), (5.0, 5.0)]
                    .into_iter()
                    .map(|(a, b)| timed(|| check_oracle_total(a, b)))
                    .collect()
            },
        ),
        Criterion::run(
            5,
            "bulk limit at lambda = 40 for all four conditions",
            None,
            || {
                [
                    (Dirichlet, Dirichlet),
                    (Neumann, Neumann),
                    (Periodic, Periodic),
                    (MixedDN, MixedDN),
                ]
                .into_iter()
                .map(|(a, b)| timed(|| check_bulk_limit(a, b, 40.0)))
                .collect()
            },
        ),
        Criterion::run(6, "quasiperiod pi of the single-axis term", None, || {
            vec![timed(check_quasiperiod)]
        }),
        Criterion::run(7, "m-independence of the b term as l -> 0", None, || {
            [1e-2, 5e-3, 1e-3]
                .into_iter()
                .map(|l| timed(|| check_small_l_m_independence(l)))
                .collect()
        }),
        Criterion::run(8, "composition structure of the breakdowns", None, || {
            vec![timed(check_composition)]
        }),
        Criterion::run(9, "independence of the action normalization", None, || {
            // An exhaustive struct literal: the domain has no temperature field.
            let _ = DomainConfig {
                l1: 1.0,
                l2: 1.0,
                m: 1.0,
                c: 1.0,
                hbar: 1.0,
                a_norm: 1.0,
            };
            vec![timed(check_a_independence)]
        }),
    ];

    let mut unexpected = 0;
    for c in &criteria {
        let budget = match c.budget {
            Some(b) if c.elapsed > b => format!(", over budget {:.0} s", b.as_secs_f64()),
            Some(b) => format!(", budget {:.0} s", b.as_secs_f64()),
            None => String::new(),
        };
        println!(
            "criterion {}: {:<13} {} ({:.2} s{budget})",
            c.id,
            c.status(),
            c.title,
            c.elapsed.as_secs_f64()
        );
        for check in &c.checks {
            println!("    {check}");
        }
        if !c.known() {
            unexpected += 1;
        }
    }
    let passed = criteria.iter().filter(|c| c.passed()).count();
    let known = criteria.iter().filter(|c| !c.passed() && c.known()).count();
    println!(
        "{} criteria: {passed} passed, {known} known failures, {unexpected} unexpected failures",
        criteria.len()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
