//! Front end: sweep configuration, parallel sweeps with CSV and plot-script
//! output, the verification suite and single-term queries.

mod config;
mod sweep;
mod term;
mod verify;

pub use config::{parse_config, GridRange, OutputSpec, Spacing, SweepAxis, SweepSpec};
pub use sweep::{run_sweep, SweepRow, SweepSummary, SweepTable, CSV_HEADER};
pub use term::{query_term, TermKind};
pub use verify::{
    check_a_coefficients, check_a_independence, check_bulk_coefficient, check_bulk_limit,
    check_composition, check_generic_s, check_oracle_total, check_poisson_equivalence,
    check_quasiperiod, check_single_shells, check_small_l_m_independence, de_b_maxima, verify,
    Check, VerifyLevel, VerifyReport,
};
