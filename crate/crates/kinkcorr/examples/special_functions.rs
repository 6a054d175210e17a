use kinkcorr::specfun::{
    cisi, ei_imag, erf, erf_complex, erfc, faddeeva, gamma_fn, gamma_real, theta2, theta3,
};
use num_complex::Complex64;

fn main() -> kinkcorr::Result<()> {
    println!("erf(0.5)        = {:.16e}", erf(0.5));
    println!("erfc(10)        = {:.16e}", erfc(10.0));
    let z = Complex64::new(1.5, -2.0);
    println!("erf(1.5 - 2i)   = {:.16e}", erf_complex(z)?);
    println!("w(1.5 - 2i)     = {:.16e}", faddeeva(z));

    let (ci, si) = cisi(3.0);
    println!("Ci(3), Si(3)    = {ci:.16e}, {si:.16e}");
    println!("Ei(2i)          = {:.16e}", ei_imag(2.0)?);

    println!("Gamma(0.3)      = {:.16e}", gamma_real(0.3)?);
    println!(
        "Gamma(0.5 + 2i) = {:.16e}",
        gamma_fn(Complex64::new(0.5, 2.0))?
    );

    let q = Complex64::new(0.5, 0.0);
    println!(
        "theta3(0; 0.5)  = {:.16e}",
        theta3(Complex64::new(0.0, 0.0), q)?.re
    );
    println!(
        "theta2(0; 0.5)  = {:.16e}",
        theta2(Complex64::new(0.0, 0.0), q)?.re
    );
    Ok(())
}
