use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_nome(q: Complex64) -> Result<()> {
    if !(q.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "theta nome must satisfy |q| < 1, got {q}"
        )));
    }
    Ok(())
}

/// Jacobi theta function theta_3(z, q) = 1 + 2 sum_{n>=1} q^{n^2} cos(2nz).
pub fn theta3(z: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    let mut sum = Complex64::new(1.0, 0.0);
    // q^{n^2} built from q^{(n-1)^2} q^{2n-1}
    let mut qn2 = Complex64::new(1.0, 0.0);
    let mut q_odd = q;
    let q2 = q * q;
    for n in 1..100_000 {
        qn2 *= q_odd;
        q_odd *= q2;
        let term = 2.0 * qn2 * (2.0 * n as f64 * z).cos();
        sum += term;
        if term.norm() < 1e-16 * sum.norm() && qn2.norm() < 1e-16 {
            break;
        }
        if qn2 == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    Ok(sum)
}

/// Jacobi theta function theta_2(z, q) = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1)z),
/// with q^{1/4} on the principal branch.
pub fn theta2(z: Complex64, q: Complex64) -> Result<Complex64> {
    check_nome(q)?;
    if q == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let q14 = q.powf(0.25);
    let mut sum = Complex64::new(0.0, 0.0);
    // q^{n(n+1)} built from q^{2n}
    let mut qnn = Complex64::new(1.0, 0.0);
    let mut q_even = Complex64::new(1.0, 0.0);
    let q2 = q * q;
    for n in 0..100_000 {
        if n > 0 {
            q_even *= q2;
            qnn *= q_even;
        }
        let term = 2.0 * q14 * qnn * ((2 * n + 1) as f64 * z).cos();
        sum += term;
        if term.norm() < 1e-16 * sum.norm() && qnn.norm() < 1e-16 {
            break;
        }
        if qnn == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    Ok(sum)
}
