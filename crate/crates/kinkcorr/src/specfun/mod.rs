//! Complex special functions used by the correction terms.

pub mod dd;
mod erf;
mod expint;
mod gamma;
mod hyp1f2;
mod theta;

pub use erf::{erf, erf_complex, erfc, erfc_complex, faddeeva};
pub use expint::{cisi, ei_imag};
pub use gamma::{gamma_fn, gamma_real, rgamma};
pub use hyp1f2::{hyp1f2, hyp1f2_with, Estimate, Hyp1F2Options, Hyp1F2Params, Hyp1F2Prepared};
pub use theta::{theta2, theta3};

/// Complex value carrier used across the crate.
pub type ComplexValue = num_complex::Complex64;
