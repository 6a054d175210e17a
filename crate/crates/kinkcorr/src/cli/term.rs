//! Single-term queries for the Dirichlet pairing.

use std::fmt;
use std::str::FromStr;

use crate::corrections::{
    de_a, de_b_single_with, de_c_with, de_d_with, SeriesOptions, SeriesValue, LAMBDA_MIN,
};
use crate::error::{Error, Result};

/// One of the four Dirichlet correction terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// Continuum part: constant, edge and bulk terms.
    A,
    /// Single-axis Ei-bracket series.
    B,
    /// Single-axis 1F2 series.
    C,
    /// Double 1F2 series.
    D,
}

impl FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(TermKind::A),
            "b" => Ok(TermKind::B),
            "c" => Ok(TermKind::C),
            "d" => Ok(TermKind::D),
            other => Err(Error::Domain(format!(
                "unknown term '{other}' (expected a, b, c or d)"
            ))),
        }
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            TermKind::A => "a",
            TermKind::B => "b",
            TermKind::C => "c",
            TermKind::D => "d",
        };
        f.write_str(c)
    }
}

/// Value of one Dirichlet term at dimensionless sizes, in units of
/// `hbar m c`, with its estimated absolute error.
pub fn query_term(
    which: TermKind,
    lambda1: f64,
    lambda2: f64,
    opts: &SeriesOptions,
) -> Result<SeriesValue> {
    for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be finite, got {v}")));
        }
        if v <= LAMBDA_MIN {
            return Err(Error::Range(format!(
                "{name} = {v:e} is at or below the singularity guard {LAMBDA_MIN:e}"
            )));
        }
    }
    match which {
        TermKind::A => Ok(SeriesValue {
            value: de_a(lambda1, lambda2),
            error: 0.0,
        }),
        TermKind::B => {
            let b1 = de_b_single_with(lambda1, opts)?;
            let b2 = de_b_single_with(lambda2, opts)?;
            Ok(SeriesValue {
                value: b1.value + b2.value,
                error: b1.error + b2.error,
            })
        }
        TermKind::C => de_c_with(lambda1, lambda2, opts),
        TermKind::D => de_d_with(lambda1, lambda2, opts),
    }
}
