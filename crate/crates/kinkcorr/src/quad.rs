//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands.

use num_complex::Complex64;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_018,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_intervals: 2000,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).norm();
    (value, err.max(50.0 * f64::EPSILON * value.norm()))
}

/// Integrates `f` over `[a, b]` by adaptive bisection of the panel with the
/// largest error estimate.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            converged: true,
            evaluations: 0,
        };
    }
    let (v, e) = gk21(&mut f, a, b);
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        error: e,
    }];
    let mut evaluations = 21;
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return QuadResult {
                value: total,
                error: err,
                converged: true,
                evaluations,
            };
        }
        if panels.len() >= opts.max_intervals {
            return QuadResult {
                value: total,
                error: err,
                converged: false,
                evaluations,
            };
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1.error
                    .partial_cmp(&y.1.error)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty");
        let p = panels.swap_remove(idx);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // cannot split further
            panels.push(p);
            let total: Complex64 = panels.iter().map(|p| p.value).sum();
            let err: f64 = panels.iter().map(|p| p.error).sum();
            return QuadResult {
                value: total,
                error: err,
                converged: false,
                evaluations,
            };
        }
        let (v1, e1) = gk21(&mut f, p.a, m);
        let (v2, e2) = gk21(&mut f, m, p.b);
        evaluations += 42;
        panels.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        panels.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
}

/// Integrates over consecutive break points, summing values and errors.
pub fn integrate_pieces<F: FnMut(f64) -> Complex64>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> QuadResult {
    let mut out = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        converged: true,
        evaluations: 0,
    };
    for w in points.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts);
        out.value += r.value;
        out.error += r.error;
        out.converged &= r.converged;
        out.evaluations += r.evaluations;
    }
    out
}

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// extrapolated limit and an error estimate from the last two diagonals.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    if n < 3 {
        let last = *partial.last().unwrap_or(&0.0);
        let err = if n == 2 {
            (partial[1] - partial[0]).abs()
        } else {
            f64::INFINITY
        };
        return (last, err);
    }
    // e[k] holds column k of the epsilon table
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = *partial.last().unwrap();
    let mut best_err = (partial[n - 1] - partial[n - 2]).abs();
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let base = if col == 0 { 0.0 } else { prev[i + 1] };
            next.push(if d == 0.0 {
                f64::INFINITY
            } else {
                base + 1.0 / d
            });
        }
        col += 1;
        if col % 2 == 0 && next.len() >= 2 {
            let l = next.len();
            if next[l - 1].is_finite() && next[l - 2].is_finite() {
                let err = (next[l - 1] - next[l - 2]).abs();
                if err < best_err {
                    best_err = err;
                    best = next[l - 1];
                }
            }
        }
        prev = cur;
        cur = next;
        if cur.iter().any(|x| !x.is_finite()) {
            break;
        }
    }
    (best, best_err)
}
