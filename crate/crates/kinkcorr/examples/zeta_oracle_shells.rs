use kinkcorr::corrections::{b_bracket, shell_derivative, shell_kernel};
use kinkcorr::specfun::gamma_real;
use kinkcorr::zeta_oracle::{mellin_term, zeta_sderiv_at_zero, TraceTerm};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> kinkcorr::Result<()> {
    // continuum coefficients
    for term in [
        TraceTerm::AConstant,
        TraceTerm::ALinear { lambda: 1.0 },
        TraceTerm::ABulk {
            lambda1: 1.0,
            lambda2: 1.0,
        },
    ] {
        println!(
            "{term:?}: energy {:+.16e}",
            zeta_sderiv_at_zero(&term)?.energy
        );
    }
    println!(
        "expected    {:+.16e} {:+.16e} {:+.16e}",
        -1.0 / (4.0 * PI),
        -1.0 / (8.0 * PI),
        5.0 / (72.0 * PI * PI)
    );

    // one b shell against the Ei bracket
    let b = zeta_sderiv_at_zero(&TraceTerm::B { n: 1, lambda: 2.0 })?;
    println!(
        "\nb shell n = 1, lambda = 2: oracle {:+.16e}, closed {:+.16e}",
        b.energy,
        b_bracket(2.0)? / (16.0 * PI)
    );

    // one d shell against the 1F2 kernel, at s = 0.3 and at s = 0
    let (l1, l2) = (1.0, 1.5);
    let term = TraceTerm::D {
        n1: 1,
        n2: 1,
        mu1: l1,
        mu2: l2,
        lambda1: l1,
        lambda2: l2,
    };
    let s = 0.3;
    let m = mellin_term(Complex64::new(s, 0.0), &term)?;
    let p =
        PI * PI * Complex64::from_polar(1.0, -0.5 * PI * s) * m.value / (l1 * l2 * gamma_real(s)?);
    println!(
        "d shell at s = 0.3: oracle {p:.14e}, closed {:.14e}",
        shell_kernel(s, l1 * l1 + l2 * l2)?
    );
    let d = zeta_sderiv_at_zero(&term)?;
    let closed = 2.0 * l1 * l2 / (PI * PI) * shell_derivative(l1 * l1 + l2 * l2, 1e-3, 1e-8)?;
    println!(
        "d shell energy:     oracle {:+.16e}, closed {closed:+.16e}",
        d.energy
    );
    Ok(())
}
