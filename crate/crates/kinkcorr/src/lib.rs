//! Semiclassical energy corrections for a static Sine-Gordon kink whose
//! transverse cross-section is a finite `l1 x l2` rectangle.
//!
//! All internal computation is in kink units (`m = hbar = c = 1`), where the
//! corrections depend only on the dimensionless sizes `lambda_i = m l_i`.
//! Physical units are restored by the overall factor `hbar m c`.

pub mod cli;
pub mod corrections;
pub mod error;
pub mod heat_traces;
pub mod lattice;
pub mod quad;
pub mod specfun;
pub mod zeta_oracle;

pub use error::{Error, Result};
