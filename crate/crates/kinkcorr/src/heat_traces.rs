//! Transverse heat-kernel traces in Euclidean proper time.
//!
//! Every oscillatory mode sum of the Minkowski formulation is evaluated after
//! the rotation `tau_A -> -i u`, so all exponentials decay. Lengths are the
//! dimensionless `lambda = m l`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::erf;

/// Boundary condition applied on one transverse axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    Periodic,
    /// `phi(0) = 0` and `d phi / dx (l) = 0` on the axis.
    MixedDN,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 4] = [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Neumann,
        BoundaryCondition::Periodic,
        BoundaryCondition::MixedDN,
    ];

    /// Lower-case name accepted by [`FromStr`].
    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::MixedDN => "mixed",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d" | "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "n" | "neumann" => Ok(BoundaryCondition::Neumann),
            "p" | "periodic" => Ok(BoundaryCondition::Periodic),
            "m" | "dn" | "mixed" | "mixeddn" | "mixed_dn" => Ok(BoundaryCondition::MixedDN),
            other => Err(Error::Domain(format!(
                "unknown boundary condition '{other}' (expected dirichlet, neumann, periodic or mixed)"
            ))),
        }
    }
}

/// Euclidean proper time `u > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanTime {
    u: f64,
}

impl EuclideanTime {
    pub fn new(u: f64) -> Result<Self> {
        if u.is_finite() && u > 0.0 {
            Ok(EuclideanTime { u })
        } else {
            Err(Error::Domain(format!(
                "Euclidean time must be positive and finite, got {u}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.u
    }
}

/// Spectrum of one transverse axis: its boundary condition and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseSpectrumSpec {
    pub bc: BoundaryCondition,
    lambda: f64,
}

impl TransverseSpectrumSpec {
    pub fn new(bc: BoundaryCondition, lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(TransverseSpectrumSpec { bc, lambda })
        } else {
            Err(Error::Domain(format!(
                "dimensionless length must be positive and finite, got {lambda}"
            )))
        }
    }

    pub fn lambda(self) -> f64 {
        self.lambda
    }
}

/// Sums `f(n)` for `n = start, start + 1, ...` until a term no longer changes
/// the partial sum. `f` must be positive and decreasing.
fn sum_decaying(start: u64, f: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    let mut n = start;
    loop {
        let t = f(n as f64);
        total += t;
        if t <= 1e-17 * total || t == 0.0 {
            return total;
        }
        n += 1;
    }
}

/// `sum_{n >= 1} exp(-n^2 x)` for `x > 0`.
fn gauss_tail(x: f64) -> f64 {
    if x > 1.0 {
        sum_decaying(1, |n| (-n * n * x).exp())
    } else {
        // Poisson dual: sum_{n in Z} e^{-n^2 x} = sqrt(pi/x) sum_{k in Z} e^{-pi^2 k^2 / x}
        let dual = 1.0 + 2.0 * sum_decaying(1, |k| (-PI * PI * k * k / x).exp());
        0.5 * ((PI / x).sqrt() * dual - 1.0)
    }
}

/// Partial mode sum of the Euclidean trace.
///
/// Index sets: `1..=n_max` (Dirichlet), `0..=n_max` (Neumann),
/// `-n_max..=n_max` (periodic) and the first `n_max` odd modes (mixed).
pub fn trace_direct(spec: TransverseSpectrumSpec, u: EuclideanTime, n_max: u64) -> Result<f64> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let x = PI * PI * u.get() / (spec.lambda * spec.lambda);
    // sum of exp(-scale k^2) over k = first, first + step, ... (n_max terms)
    let partial = |scale: f64, first: f64, step: f64| -> f64 {
        let mut s = 0.0;
        for n in 0..n_max {
            let k = first + step * n as f64;
            let t = (-scale * k * k).exp();
            if t == 0.0 {
                break;
            }
            s += t;
        }
        s
    };
    Ok(match spec.bc {
        BoundaryCondition::Dirichlet => partial(x, 1.0, 1.0),
        BoundaryCondition::Neumann => 1.0 + partial(x, 1.0, 1.0),
        BoundaryCondition::Periodic => 1.0 + 2.0 * partial(4.0 * x, 1.0, 1.0),
        BoundaryCondition::MixedDN => partial(x / 4.0, 1.0, 2.0),
    })
}

/// Geometric estimate of the terms omitted by [`trace_direct`] at `n_max`.
pub fn trace_direct_tail_bound(spec: TransverseSpectrumSpec, u: EuclideanTime, n_max: u64) -> f64 {
    let x = PI * PI * u.get() / (spec.lambda * spec.lambda);
    let (scale, next, mult) = match spec.bc {
        BoundaryCondition::Dirichlet | BoundaryCondition::Neumann => (x, (n_max + 1) as f64, 1.0),
        BoundaryCondition::Periodic => (4.0 * x, (n_max + 1) as f64, 2.0),
        BoundaryCondition::MixedDN => (x / 4.0, (2 * n_max + 1) as f64, 1.0),
    };
    let first = (-scale * next * next).exp();
    let ratio = (-scale * (2.0 * next + 1.0)).exp();
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        mult * first / (1.0 - ratio)
    }
}

/// Poisson-resummed trace, summed to convergence. Exponentially fast for
/// small `u`; loses relative accuracy once the trace itself is exponentially
/// small, which [`trace_accelerated`] avoids.
pub fn trace_poisson(spec: TransverseSpectrumSpec, u: EuclideanTime) -> f64 {
    let l = spec.lambda;
    let u = u.get();
    let pref = l / (PI * u).sqrt();
    match spec.bc {
        BoundaryCondition::Dirichlet => 0.5 * pref * (1.0 + 2.0 * gauss_tail(l * l / u)) - 0.5,
        BoundaryCondition::Neumann => 0.5 * pref * (1.0 + 2.0 * gauss_tail(l * l / u)) + 0.5,
        BoundaryCondition::Periodic => 0.5 * pref * (1.0 + 2.0 * gauss_tail(l * l / (4.0 * u))),
        BoundaryCondition::MixedDN => {
            0.5 * pref * (1.0 + 4.0 * gauss_tail(4.0 * l * l / u) - 2.0 * gauss_tail(l * l / u))
        }
    }
}

/// Trace evaluated by the faster of the two representations: the direct mode
/// sum for `u > lambda^2 / pi^2`, the Poisson-resummed form otherwise.
pub fn trace_accelerated(spec: TransverseSpectrumSpec, u: EuclideanTime) -> f64 {
    let crossover = spec.lambda * spec.lambda / (PI * PI);
    if u.get() > crossover {
        let x = PI * PI * u.get() / (spec.lambda * spec.lambda);
        match spec.bc {
            BoundaryCondition::Dirichlet => sum_decaying(1, |n| (-x * n * n).exp()),
            BoundaryCondition::Neumann => 1.0 + sum_decaying(1, |n| (-x * n * n).exp()),
            BoundaryCondition::Periodic => {
                1.0 + 2.0 * sum_decaying(1, |n| (-4.0 * x * n * n).exp())
            }
            BoundaryCondition::MixedDN => sum_decaying(0, |n| {
                let j = 2.0 * n + 1.0;
                (-x * j * j / 4.0).exp()
            }),
        }
    } else {
        trace_poisson(spec, u)
    }
}

/// Longitudinal trace difference of the kink against the vacuum,
/// `-erf(m_scale sqrt(u))`.
pub fn kink_trace_diff(m_scale: f64, u: EuclideanTime) -> f64 {
    -erf(m_scale * u.get().sqrt())
}

/// Continuum trace of the time direction, `cT / sqrt(4 pi u)`.
pub fn time_trace_factor(u: EuclideanTime, c_t: f64) -> f64 {
    c_t / (4.0 * PI * u.get()).sqrt()
}

/// Four named pieces of the product of two Dirichlet traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletProductTerms {
    /// Continuum part: bulk, edge and corner contributions.
    pub a: f64,
    /// Single dual sums weighted by one length.
    pub b: f64,
    /// Single dual sums weighted by the area.
    pub c: f64,
    /// Product of the two dual sums.
    pub d: f64,
}

impl DirichletProductTerms {
    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c + self.d
    }
}

/// Splits `trace(D, lambda1) * trace(D, lambda2)` into the pieces
/// `gamma_a .. gamma_d` of the Poisson-resummed product.
pub fn dirichlet_product_terms(
    lambda1: f64,
    lambda2: f64,
    u: EuclideanTime,
) -> Result<DirichletProductTerms> {
    for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let u = u.get();
    let s1 = gauss_tail(lambda1 * lambda1 / u);
    let s2 = gauss_tail(lambda2 * lambda2 / u);
    let r = (PI * u).sqrt();
    let a = lambda1 * lambda2 / (4.0 * PI * u) - (lambda1 + lambda2) / (4.0 * r) + 0.25;
    let b = -(lambda1 * s1 + lambda2 * s2) / (2.0 * r);
    let c = lambda1 * lambda2 * (s1 + s2) / (2.0 * PI * u);
    let d = lambda1 * lambda2 * s1 * s2 / (PI * u);
    Ok(DirichletProductTerms { a, b, c, d })
}
