//! Closed-form correction terms and their composition for every supported
//! pair of boundary conditions.
//!
//! Energies are returned in units of `hbar m c` as functions of the
//! dimensionless sizes `lambda_i = m l_i`, and rescaled to physical units
//! only in [`CorrectionBreakdown`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{half_line_sum, quadrant_sum, WindowOptions, WindowedSum};
use crate::specfun::{ei_imag, gamma_fn, rgamma, Hyp1F2Options, Hyp1F2Params, Hyp1F2Prepared};

pub use crate::heat_traces::BoundaryCondition;

/// Smallest dimensionless size accepted by the correction terms.
pub const LAMBDA_MIN: f64 = 1e-6;

/// Angular frequency of the oscillation of every shell summand in `lambda n`.
const SHELL_FREQUENCY: f64 = 2.0;

/// Physical inputs of one domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainConfig {
    pub l1: f64,
    pub l2: f64,
    /// Potential amplitude, an inverse length.
    pub m: f64,
    /// Propagation speed.
    pub c: f64,
    pub hbar: f64,
    /// Action normalization carrying the physical units of the classical
    /// energy. It never enters a correction.
    pub a_norm: f64,
}

impl DomainConfig {
    pub fn new(l1: f64, l2: f64, m: f64, c: f64, hbar: f64, a_norm: f64) -> Result<Self> {
        let cfg = DomainConfig {
            l1,
            l2,
            m,
            c,
            hbar,
            a_norm,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Kink units (`m = c = hbar = A = 1`) with the given dimensionless sizes.
    pub fn dimensionless(lambda1: f64, lambda2: f64) -> Result<Self> {
        DomainConfig::new(lambda1, lambda2, 1.0, 1.0, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("l1", self.l1),
            ("l2", self.l2),
            ("m", self.m),
            ("c", self.c),
            ("hbar", self.hbar),
            ("A", self.a_norm),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn lambda1(&self) -> f64 {
        self.m * self.l1
    }

    pub fn lambda2(&self) -> f64 {
        self.m * self.l2
    }

    /// The energy unit `hbar m c` of all corrections.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.m * self.c
    }
}

/// Reading of the single-size edge term of the Dirichlet x periodic result,
/// which is printed without the second power of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeConvention {
    /// `-hbar m^2 c l / 8 pi`, consistent with the Dirichlet edge terms.
    #[default]
    Dimensional,
    /// `-hbar m c l / 8 pi` as printed.
    Literal,
}

/// How pairings are turned into sums of Dirichlet terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompositionRule {
    /// The published composition formulas, available for the pairings
    /// (D,D), (N,N), (P,P), (M,M), (D,N), (N,D), (D,P) and (P,D).
    #[default]
    Published,
    /// Expansion of the product of the two Poisson-resummed axis traces.
    /// Defined for all sixteen pairings.
    TraceProduct,
}

/// Numerical controls of the correction series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Absolute tolerance on each series, in units of `hbar m c`.
    pub tol: f64,
    /// Step of the central differences in `s`.
    pub s_step: f64,
    /// Ceiling on the index along one axis.
    pub n_max: u64,
    /// Ceiling on the number of lattice points of a double series.
    pub max_points: usize,
    pub edge: EdgeConvention,
    pub rule: CompositionRule,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            tol: 1e-8,
            s_step: 1e-3,
            n_max: 10_000,
            max_points: 1_000_000,
            edge: EdgeConvention::default(),
            rule: CompositionRule::default(),
        }
    }
}

impl SeriesOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Domain(format!(
                "series tolerance must be positive, got {}",
                self.tol
            )));
        }
        if !(self.s_step > 0.0 && self.s_step <= 0.01) {
            return Err(Error::Domain(format!(
                "s_step must lie in (0, 0.01], got {}",
                self.s_step
            )));
        }
        if self.n_max < 1 || self.max_points < 1 {
            return Err(Error::Domain(
                "n_max and max_points must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn window(&self) -> WindowOptions {
        WindowOptions {
            n_max: self.n_max,
            max_points: self.max_points,
            ..WindowOptions::default()
        }
    }
}

/// A series value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub error: f64,
}

impl SeriesValue {
    fn scaled(self, k: f64) -> SeriesValue {
        SeriesValue {
            value: k * self.value,
            error: k.abs() * self.error,
        }
    }

    fn from_window(sum: WindowedSum, extra_error: f64) -> SeriesValue {
        SeriesValue {
            value: sum.value,
            error: sum.error + extra_error,
        }
    }

    fn within(self, tol: f64) -> Result<SeriesValue> {
        if self.error <= tol && self.value.is_finite() {
            Ok(self)
        } else {
            Err(Error::PrecisionLoss {
                estimate: self.value,
                bound: self.error,
            })
        }
    }
}

fn check_lambda(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be finite, got {v}")));
    }
    if v <= LAMBDA_MIN {
        return Err(Error::Range(format!(
            "{name} = {v:e} is at or below {LAMBDA_MIN:e}, where the corrections diverge like 1/lambda"
        )));
    }
    Ok(())
}

/// Classical kink energy `A 8 m l1 l2` of the whole cross-section.
pub fn classical_energy(cfg: &DomainConfig) -> f64 {
    cfg.a_norm * 8.0 * cfg.m * cfg.l1 * cfg.l2
}

/// Continuum part of the Dirichlet corrections,
/// `-1/(4 pi) - lambda1/(8 pi) - lambda2/(8 pi) + 5 lambda1 lambda2 / (72 pi^2)`.
pub fn de_a(lambda1: f64, lambda2: f64) -> f64 {
    -1.0 / (4.0 * PI) - lambda1 / (8.0 * PI) - lambda2 / (8.0 * PI) + bulk_term(lambda1, lambda2)
}

/// Bulk term `5 lambda1 lambda2 / (72 pi^2)` shared by every pairing.
pub fn bulk_term(lambda1: f64, lambda2: f64) -> f64 {
    5.0 * lambda1 * lambda2 / (72.0 * PI * PI)
}

/// Real bracket of the single-axis shell term at `y = lambda n`,
/// `Re[2i Ei(2iy) - i e^{-2iy} Ei(4iy) + ln(1/y) sin(2y)]`.
pub fn b_bracket(y: f64) -> Result<f64> {
    let i = Complex64::new(0.0, 1.0);
    let e2 = ei_imag(2.0 * y)?;
    let e4 = ei_imag(4.0 * y)?;
    let v = 2.0 * i * e2 - i * Complex64::from_polar(1.0, -2.0 * y) * e4;
    Ok(v.re - y.ln() * (2.0 * y).sin())
}

/// Single-axis shell term: sum over `n >= 1` of
/// `b_bracket(lambda n) / (8 pi lambda n^2)`, with its error estimate.
///
/// The bracket tends to `-2 pi` plus an oscillation, so the constant is
/// summed exactly and the oscillating remainder through a windowed sum.
pub fn de_b_single_with(lambda: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    check_lambda("lambda", lambda)?;
    opts.validate()?;
    let f =
        |y: f64| -> Result<f64> { Ok(lambda * (b_bracket(y)? + 2.0 * PI) / (8.0 * PI * y * y)) };
    let sum = half_line_sum(lambda, SHELL_FREQUENCY, f, &opts.window())?;
    let exact = -PI * PI / (24.0 * lambda);
    let mut out = SeriesValue::from_window(sum, 0.0);
    out.value += exact;
    out.within(opts.tol)
}

/// [`de_b_single_with`] at default options and the given tolerance.
pub fn de_b_single(lambda: f64, tol: f64) -> Result<f64> {
    let opts = SeriesOptions {
        tol,
        ..SeriesOptions::default()
    };
    de_b_single_with(lambda, &opts).map(|v| v.value)
}

/// `de_b_single(lambda1) + de_b_single(lambda2)`.
pub fn de_b(lambda1: f64, lambda2: f64, tol: f64) -> Result<f64> {
    Ok(de_b_single(lambda1, tol)? + de_b_single(lambda2, tol)?)
}

fn hyp_opts() -> Hyp1F2Options {
    Hyp1F2Options {
        ceiling: 1e14,
        rel_tol: 1e-12,
    }
}

/// The shell kernel at one fixed `s` as `P(s; a) = a^(s-1) T1(s) + T2(s)` with
/// `T1 = i^s Gamma(1-s)/Gamma(s) 1F2(1/2; 3/2, s; -a)` and
/// `T2 = 1F2(3/2-s; 2-s, 5/2-s; -a) / (i^s (2s-3)(s-1))`, `i^s = exp(i pi s/2)`.
#[derive(Debug, Clone)]
struct KernelAtS {
    f1: Hyp1F2Prepared,
    f2: Hyp1F2Prepared,
    pre1: Complex64,
    pre2: Complex64,
}

impl KernelAtS {
    fn new(s: f64) -> Result<KernelAtS> {
        let opts = hyp_opts();
        let i_s = Complex64::from_polar(1.0, 0.5 * PI * s);
        Ok(KernelAtS {
            f1: Hyp1F2Prepared::new(Hyp1F2Params::real(0.5, 1.5, s)?, opts)?,
            f2: Hyp1F2Prepared::new(Hyp1F2Params::real(1.5 - s, 2.0 - s, 2.5 - s)?, opts)?,
            pre1: i_s * gamma_fn(Complex64::new(1.0 - s, 0.0))? * rgamma(Complex64::new(s, 0.0)),
            pre2: 1.0 / (i_s * (2.0 * s - 3.0) * (s - 1.0)),
        })
    }

    /// `(T1, T2)` at the shell radius squared `a`.
    fn parts(&self, a: f64) -> Result<(Complex64, Complex64)> {
        let z = Complex64::new(-a, 0.0);
        Ok((
            self.pre1 * self.f1.eval(z)?.value,
            self.pre2 * self.f2.eval(z)?.value,
        ))
    }
}

/// The s-dependent shell kernel shared by the c and d terms,
///
/// `P(s; a) = i^s a^(s-1) Gamma(1-s)/Gamma(s) 1F2(1/2; 3/2, s; -a)
///          + 1F2(3/2-s; 2-s, 5/2-s; -a) / (i^s (2s-3)(s-1))`.
///
/// `a` is the shell radius squared, `n^2 lambda^2` or
/// `n1^2 lambda1^2 + n2^2 lambda2^2`. `s` must avoid 1 and 3/2.
pub fn shell_kernel(s: f64, a: f64) -> Result<Complex64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("shell kernel needs a > 0, got {a}")));
    }
    let (t1, t2) = KernelAtS::new(s)?.parts(a)?;
    Ok(a.powf(s - 1.0) * t1 + t2)
}

/// `Re dP/ds (0; a)` at a fixed step `h`, prepared once for many shells.
///
/// Central differences at `+-h` and `+-2h` are combined by one Richardson
/// step. The factor `a^(s-1)` is differentiated exactly so that small shells
/// do not amplify the difference error by powers of `ln a`. The Richardson
/// value from `2h` and `4h` serves as a stability check: a disagreement
/// above `10 tol max(1, |value|)` is reported as precision loss.
#[derive(Debug, Clone)]
pub struct ShellDerivative {
    h: f64,
    tol: f64,
    /// Kernels at `+h, -h, +2h, -2h, +4h, -4h`.
    kernels: Vec<KernelAtS>,
}

impl ShellDerivative {
    pub fn new(h: f64, tol: f64) -> Result<ShellDerivative> {
        if !(h > 0.0 && h <= 0.01) {
            return Err(Error::Domain(format!(
                "s_step must lie in (0, 0.01], got {h}"
            )));
        }
        let mut kernels = Vec::with_capacity(6);
        for k in [1.0, 2.0, 4.0] {
            kernels.push(KernelAtS::new(k * h)?);
            kernels.push(KernelAtS::new(-k * h)?);
        }
        Ok(ShellDerivative { h, tol, kernels })
    }

    pub fn eval(&self, a: f64) -> Result<f64> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("shell kernel needs a > 0, got {a}")));
        }
        let mut parts = [(0.0, 0.0, 0.0); 3];
        for (j, k) in [1.0, 2.0, 4.0].into_iter().enumerate() {
            let hk = k * self.h;
            let (p1, p2) = self.kernels[2 * j].parts(a)?;
            let (m1, m2) = self.kernels[2 * j + 1].parts(a)?;
            // mean of T1, slope of T1, slope of T2
            parts[j] = (
                0.5 * (p1.re + m1.re),
                (p1.re - m1.re) / (2.0 * hk),
                (p2.re - m2.re) / (2.0 * hk),
            );
        }
        let ln_a = a.ln();
        let combine = |x: (f64, f64, f64)| (ln_a * x.0 + x.1) / a + x.2;
        let rich = |u: (f64, f64, f64), v: (f64, f64, f64)| {
            (
                (4.0 * u.0 - v.0) / 3.0,
                (4.0 * u.1 - v.1) / 3.0,
                (4.0 * u.2 - v.2) / 3.0,
            )
        };
        let fine = combine(rich(parts[0], parts[1]));
        let coarse = combine(rich(parts[1], parts[2]));
        if !fine.is_finite() || (fine - coarse).abs() > 10.0 * self.tol * fine.abs().max(1.0) {
            return Err(Error::PrecisionLoss {
                estimate: fine,
                bound: (fine - coarse).abs(),
            });
        }
        Ok(fine)
    }
}

/// `Re dP/ds (0; a)`; see [`ShellDerivative`].
pub fn shell_derivative(a: f64, h: f64, tol: f64) -> Result<f64> {
    ShellDerivative::new(h, tol)?.eval(a)
}

/// Richardson truncation error of [`shell_derivative`] relative to its value.
const SHELL_REL_ERROR: f64 = 1e-10;

/// `sum_{n >= 1} Re P'(0; lambda^2 n^2)`, the single-axis sum inside the
/// c term.
pub fn c_axis_sum(lambda: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    check_lambda("lambda", lambda)?;
    opts.validate()?;
    let kernel = ShellDerivative::new(opts.s_step, opts.tol)?;
    let f = |r: f64| kernel.eval(r * r);
    let sum = half_line_sum(lambda, SHELL_FREQUENCY, f, &opts.window())?;
    let leading = (PI * PI / 6.0) / (lambda * lambda);
    Ok(SeriesValue::from_window(sum, SHELL_REL_ERROR * leading))
}

/// `sum_{n1, n2 >= 1} Re P'(0; lambda1^2 n1^2 + lambda2^2 n2^2)`, the double
/// sum inside the d term.
pub fn d_plane_sum(lambda1: f64, lambda2: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    check_lambda("lambda1", lambda1)?;
    check_lambda("lambda2", lambda2)?;
    opts.validate()?;
    let kernel = ShellDerivative::new(opts.s_step, opts.tol)?;
    let f = |r: f64| kernel.eval(r * r);
    let sum = quadrant_sum(lambda1, lambda2, SHELL_FREQUENCY, f, &opts.window())?;
    let leading = PI * (1.0 / lambda1.min(lambda2)).powi(2);
    Ok(SeriesValue::from_window(sum, SHELL_REL_ERROR * leading))
}

fn c_prefactor(lambda1: f64, lambda2: f64) -> f64 {
    2.0 * lambda1 * lambda2 / (PI * PI)
}

/// c term with error estimate:
/// `(2 lambda1 lambda2 / pi^2) [c_axis_sum(lambda1) + c_axis_sum(lambda2)]`.
pub fn de_c_with(lambda1: f64, lambda2: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    let k = c_prefactor(lambda1, lambda2);
    let s1 = c_axis_sum(lambda1, opts)?;
    let s2 = c_axis_sum(lambda2, opts)?;
    SeriesValue {
        value: s1.value + s2.value,
        error: s1.error + s2.error,
    }
    .scaled(k)
    .within(opts.tol)
}

/// c term at the given `s_step` and tolerance, default ceilings.
pub fn de_c(lambda1: f64, lambda2: f64, s_step: f64, tol: f64) -> Result<f64> {
    let opts = SeriesOptions {
        tol,
        s_step,
        ..SeriesOptions::default()
    };
    de_c_with(lambda1, lambda2, &opts).map(|v| v.value)
}

/// d term with error estimate:
/// `(2 lambda1 lambda2 / pi^2) d_plane_sum(lambda1, lambda2)`.
pub fn de_d_with(lambda1: f64, lambda2: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    d_plane_sum(lambda1, lambda2, opts)?
        .scaled(c_prefactor(lambda1, lambda2))
        .within(opts.tol)
}

/// d term at the given `s_step` and tolerance, default ceilings.
pub fn de_d(lambda1: f64, lambda2: f64, s_step: f64, tol: f64) -> Result<f64> {
    let opts = SeriesOptions {
        tol,
        s_step,
        ..SeriesOptions::default()
    };
    de_d_with(lambda1, lambda2, &opts).map(|v| v.value)
}

/// Primitive series entering a composition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartKind {
    /// `de_b_single(lambda)`.
    B { lambda: f64 },
    /// `c_axis_sum(lambda)`.
    CAxis { lambda: f64 },
    /// `d_plane_sum(lambda1, lambda2)`.
    DPlane { lambda1: f64, lambda2: f64 },
}

impl PartKind {
    /// Evaluates the primitive series.
    pub fn evaluate(&self, opts: &SeriesOptions) -> Result<SeriesValue> {
        match *self {
            PartKind::B { lambda } => {
                let loose = SeriesOptions {
                    tol: f64::MAX,
                    ..*opts
                };
                de_b_single_with(lambda, &loose)
            }
            PartKind::CAxis { lambda } => c_axis_sum(lambda, opts),
            PartKind::DPlane { lambda1, lambda2 } => d_plane_sum(lambda1, lambda2, opts),
        }
    }
}

/// One weighted primitive series of a composition; its contribution is
/// `coefficient * value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionPart {
    pub kind: PartKind,
    pub coefficient: f64,
    pub value: f64,
    pub error: f64,
}

/// Dimensionless pieces of a total correction, in units of `hbar m c`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TermValues {
    pub const_term: f64,
    pub lin_l1: f64,
    pub lin_l2: f64,
    pub bulk: f64,
    pub b_term: f64,
    pub c_term: f64,
    pub d_term: f64,
}

impl TermValues {
    pub fn total(&self) -> f64 {
        self.const_term
            + self.lin_l1
            + self.lin_l2
            + self.bulk
            + self.b_term
            + self.c_term
            + self.d_term
    }
}

/// Full result of [`assemble_total`]. Energy fields are signed
/// contributions in physical units that add up to `total`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionBreakdown {
    pub bc1: BoundaryCondition,
    pub bc2: BoundaryCondition,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `hbar m c`.
    pub energy_unit: f64,
    pub const_term: f64,
    pub lin_l1: f64,
    pub lin_l2: f64,
    pub bulk: f64,
    pub b_term: f64,
    pub c_term: f64,
    pub d_term: f64,
    pub total: f64,
    /// `total / (hbar m c)`.
    pub dimensionless_total: f64,
    /// Estimated absolute error of `dimensionless_total`.
    pub dimensionless_error: f64,
    /// The dimensionless pieces before rescaling.
    pub terms: TermValues,
    /// Weighted primitive series behind `b_term`, `c_term` and `d_term`.
    pub parts: Vec<CompositionPart>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    B,
    C,
    D,
}

struct Plan {
    terms: TermValues,
    parts: Vec<(Slot, PartKind, f64)>,
}

impl Plan {
    fn new() -> Plan {
        Plan {
            terms: TermValues::default(),
            parts: Vec::new(),
        }
    }

    fn b(&mut self, coefficient: f64, lambda: f64) {
        self.parts
            .push((Slot::B, PartKind::B { lambda }, coefficient));
    }

    /// `k de_c(x, y)`.
    fn c_pair(&mut self, k: f64, x: f64, y: f64) {
        let coef = k * c_prefactor(x, y);
        self.parts
            .push((Slot::C, PartKind::CAxis { lambda: x }, coef));
        self.parts
            .push((Slot::C, PartKind::CAxis { lambda: y }, coef));
    }

    /// `k de_d(x, y)`.
    fn d_pair(&mut self, k: f64, x: f64, y: f64) {
        self.parts.push((
            Slot::D,
            PartKind::DPlane {
                lambda1: x,
                lambda2: y,
            },
            k * c_prefactor(x, y),
        ));
    }
}

fn published_plan(
    bc1: BoundaryCondition,
    bc2: BoundaryCondition,
    l1: f64,
    l2: f64,
    kappa: f64,
) -> Result<Plan> {
    use BoundaryCondition::*;
    let mut p = Plan::new();
    p.terms.bulk = bulk_term(l1, l2);
    match (bc1, bc2) {
        (Dirichlet, Dirichlet) | (Neumann, Neumann) => {
            let sign = if bc1 == Dirichlet { 1.0 } else { -1.0 };
            p.terms.const_term = -1.0 / (4.0 * PI);
            p.terms.lin_l1 = -sign * l1 / (8.0 * PI);
            p.terms.lin_l2 = -sign * l2 / (8.0 * PI);
            p.b(sign, l1);
            p.b(sign, l2);
            p.c_pair(1.0, l1, l2);
            p.d_pair(1.0, l1, l2);
        }
        (Periodic, Periodic) => {
            p.c_pair(4.0, 0.5 * l1, 0.5 * l2);
            p.d_pair(4.0, 0.5 * l1, 0.5 * l2);
        }
        (MixedDN, MixedDN) => {
            p.c_pair(1.0, 2.0 * l1, 2.0 * l2);
            p.c_pair(-1.0, l1, l2);
            p.d_pair(1.0, 2.0 * l1, 2.0 * l2);
            p.d_pair(1.0, l1, l2);
            p.d_pair(-1.0, 2.0 * l1, l2);
            p.d_pair(-1.0, l1, 2.0 * l2);
        }
        (Dirichlet, Neumann) | (Neumann, Dirichlet) => {
            p.terms.const_term = 1.0 / (4.0 * PI);
            p.c_pair(1.0, l1, l2);
            p.d_pair(1.0, l1, l2);
        }
        (Dirichlet, Periodic) => {
            p.terms.lin_l2 = -kappa * l2 / (8.0 * PI);
            p.c_pair(2.0, l1, 0.5 * l2);
            p.d_pair(2.0, l1, 0.5 * l2);
        }
        (Periodic, Dirichlet) => {
            p.terms.lin_l1 = -kappa * l1 / (8.0 * PI);
            p.c_pair(2.0, 0.5 * l1, l2);
            p.d_pair(2.0, 0.5 * l1, l2);
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no published composition for ({bc1}, {bc2}); use the trace-product rule"
            )))
        }
    }
    Ok(p)
}

/// Poisson form of one axis trace, `A (1 + sum_j c_j S(mu_j)) + beta`, with
/// `A = lambda / (2 sqrt(pi u))` and `S(mu) = sum_{n >= 1} exp(-n^2 mu^2 / u)`.
/// Returns `beta` and the pairs `(c_j, mu_j)`.
pub fn axis_poisson_form(bc: BoundaryCondition, lambda: f64) -> (f64, Vec<(f64, f64)>) {
    match bc {
        BoundaryCondition::Dirichlet => (-0.5, vec![(2.0, lambda)]),
        BoundaryCondition::Neumann => (0.5, vec![(2.0, lambda)]),
        BoundaryCondition::Periodic => (0.0, vec![(2.0, 0.5 * lambda)]),
        BoundaryCondition::MixedDN => (0.0, vec![(4.0, 2.0 * lambda), (-2.0, lambda)]),
    }
}

fn trace_product_plan(bc1: BoundaryCondition, bc2: BoundaryCondition, l1: f64, l2: f64) -> Plan {
    let (beta1, sums1) = axis_poisson_form(bc1, l1);
    let (beta2, sums2) = axis_poisson_form(bc2, l2);
    let mut p = Plan::new();
    p.terms.bulk = bulk_term(l1, l2);
    p.terms.const_term = -beta1 * beta2 / PI;
    p.terms.lin_l1 = beta2 * l1 / (4.0 * PI);
    p.terms.lin_l2 = beta1 * l2 / (4.0 * PI);
    let area = l1 * l2 / (PI * PI);
    for (beta_other, lambda, sums) in [(beta2, l1, &sums1), (beta1, l2, &sums2)] {
        for &(c, mu) in sums.iter() {
            if beta_other != 0.0 {
                p.b(-c * beta_other * lambda / mu, mu);
            }
            p.parts
                .push((Slot::C, PartKind::CAxis { lambda: mu }, c * area));
        }
    }
    for &(c1, mu1) in &sums1 {
        for &(c2, mu2) in &sums2 {
            p.parts.push((
                Slot::D,
                PartKind::DPlane {
                    lambda1: mu1,
                    lambda2: mu2,
                },
                0.5 * c1 * c2 * area,
            ));
        }
    }
    p
}

/// Total correction for a pair of boundary conditions at default options.
pub fn assemble_total(
    bc1: BoundaryCondition,
    bc2: BoundaryCondition,
    cfg: &DomainConfig,
) -> Result<CorrectionBreakdown> {
    assemble_total_with(bc1, bc2, cfg, &SeriesOptions::default())
}

/// Total correction for a pair of boundary conditions.
///
/// The error estimate of the whole total is checked against `opts.tol`.
pub fn assemble_total_with(
    bc1: BoundaryCondition,
    bc2: BoundaryCondition,
    cfg: &DomainConfig,
    opts: &SeriesOptions,
) -> Result<CorrectionBreakdown> {
    cfg.validate()?;
    opts.validate()?;
    let (l1, l2) = (cfg.lambda1(), cfg.lambda2());
    check_lambda("lambda1", l1)?;
    check_lambda("lambda2", l2)?;
    let kappa = match opts.edge {
        EdgeConvention::Dimensional => 1.0,
        EdgeConvention::Literal => 1.0 / cfg.m,
    };
    let plan = match opts.rule {
        CompositionRule::Published => published_plan(bc1, bc2, l1, l2, kappa)?,
        CompositionRule::TraceProduct => trace_product_plan(bc1, bc2, l1, l2),
    };

    let mut cache: Vec<(PartKind, SeriesValue)> = Vec::new();
    let mut terms = plan.terms;
    let mut parts = Vec::with_capacity(plan.parts.len());
    let mut error = 0.0;
    for (slot, kind, coefficient) in plan.parts {
        let v = match cache.iter().find(|(k, _)| *k == kind) {
            Some((_, v)) => *v,
            None => {
                let v = kind.evaluate(opts)?;
                cache.push((kind, v));
                v
            }
        };
        let contribution = coefficient * v.value;
        match slot {
            Slot::B => terms.b_term += contribution,
            Slot::C => terms.c_term += contribution,
            Slot::D => terms.d_term += contribution,
        }
        error += coefficient.abs() * v.error;
        parts.push(CompositionPart {
            kind,
            coefficient,
            value: v.value,
            error: v.error,
        });
    }
    let dimensionless_total = terms.total();
    if !(error <= opts.tol) {
        return Err(Error::PrecisionLoss {
            estimate: dimensionless_total,
            bound: error,
        });
    }
    let unit = cfg.energy_unit();
    let physical = [
        terms.const_term,
        terms.lin_l1,
        terms.lin_l2,
        terms.bulk,
        terms.b_term,
        terms.c_term,
        terms.d_term,
    ]
    .map(|t| unit * t);
    Ok(CorrectionBreakdown {
        bc1,
        bc2,
        lambda1: l1,
        lambda2: l2,
        energy_unit: unit,
        const_term: physical[0],
        lin_l1: physical[1],
        lin_l2: physical[2],
        bulk: physical[3],
        b_term: physical[4],
        c_term: physical[5],
        d_term: physical[6],
        total: physical.iter().sum(),
        dimensionless_total,
        dimensionless_error: error,
        terms,
        parts,
    })
}
