use kinkcorr::specfun::{hyp1f2_with, Hyp1F2Options, Hyp1F2Params};
use num_complex::Complex64;

fn main() -> kinkcorr::Result<()> {
    // The shell kernels evaluate 1F2(1/2; 3/2, s; -a) for shell radii up to
    // hundreds, where the Maclaurin terms reach 1e80 and cancel.
    let p = Hyp1F2Params::real(0.5, 1.5, 0.3)?;
    let opts = Hyp1F2Options::default();
    for a in [0.5, 4.0, 50.0, 400.0, 5000.0] {
        let e = hyp1f2_with(p, Complex64::new(-a, 0.0), &opts)?;
        println!(
            "1F2(1/2; 3/2, 0.3; -{a:<6}) = {:+.16e}  (estimated error {:.1e})",
            e.value.re, e.error
        );
    }
    Ok(())
}
