//! Parallel parameter sweeps and their CSV and plot-script output.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::config::{SweepAxis, SweepSpec};
use crate::corrections::{assemble_total_with, CorrectionBreakdown, DomainConfig};
use crate::error::{Error, Result};

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Position in the grid, starting at 0.
    pub index: usize,
    /// Grid value along the swept axis.
    pub axis_value: f64,
    pub domain: DomainConfig,
    pub result: Result<CorrectionBreakdown>,
}

/// Rows of a sweep in ascending grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// Statistics over the rows that evaluated without error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub ok: usize,
    /// Rows excluded from the statistics because they carry an error.
    pub errors: usize,
    pub min_total: f64,
    pub max_total: f64,
    /// `dimensionless_total / (lambda1 lambda2)` of the last good row.
    pub last_total_per_area: f64,
}

/// Evaluates every grid point of `spec`. Points run in parallel but the
/// rows, and every number in them, do not depend on the thread count.
/// Numerical failures are stored in the row instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let (bc1, bc2) = spec.bc_pair;
    let rows = spec
        .range
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(index, v)| {
            let domain = spec.domain_at(v);
            let result = assemble_total_with(bc1, bc2, &domain, &spec.series);
            SweepRow {
                index,
                axis_value: v,
                domain,
                result,
            }
        })
        .collect();
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

impl SweepTable {
    pub fn summary(&self) -> SweepSummary {
        let mut s = SweepSummary {
            rows: self.rows.len(),
            ok: 0,
            errors: 0,
            min_total: f64::NAN,
            max_total: f64::NAN,
            last_total_per_area: f64::NAN,
        };
        for row in &self.rows {
            match &row.result {
                Ok(b) => {
                    s.ok += 1;
                    s.min_total = s.min_total.min(b.dimensionless_total);
                    s.max_total = s.max_total.max(b.dimensionless_total);
                    s.last_total_per_area = b.dimensionless_total / (b.lambda1 * b.lambda2);
                }
                Err(_) => s.errors += 1,
            }
        }
        s
    }

    /// CSV text: `#` lines with the resolved configuration, a header, then
    /// one record per row. Numbers carry 17 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut text = String::new();
        let _ = writeln!(text, "# kinkcorr {} sweep", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(
            text,
            "# bulk coefficient 5/(72 pi^2) = {:.16e}",
            5.0 / (72.0 * PI * PI)
        );
        for line in self.spec.to_config_text().lines() {
            let _ = writeln!(text, "# {line}");
        }
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(CSV_HEADER).map_err(csv_err)?;
        for row in &self.rows {
            wtr.write_record(record(&self.spec, row)).map_err(csv_err)?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| Error::Domain(format!("csv output: {e}")))?;
        text.push_str(
            &String::from_utf8(bytes).map_err(|e| Error::Domain(format!("csv output: {e}")))?,
        );
        Ok(text)
    }

    /// Gnuplot script plotting `total / (lambda1 lambda2)` from `csv_path`
    /// against the swept quantity, with the bulk coefficient for reference.
    pub fn plot_script(&self, csv_path: &Path) -> String {
        let x_col = match self.spec.axis {
            SweepAxis::Lambda1 | SweepAxis::BothEqual => 3,
            SweepAxis::Lambda2 => 4,
            SweepAxis::MPhysical => 7,
        };
        let mut s = String::new();
        let _ = writeln!(s, "# gnuplot script written by kinkcorr");
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set datafile commentschars '#'");
        let _ = writeln!(s, "set key top right");
        let _ = writeln!(s, "set xlabel '{}'", self.spec.axis.name());
        let _ = writeln!(s, "set ylabel 'total / (lambda1 lambda2)'");
        let _ = writeln!(s, "bulk = {:.16e}", 5.0 / (72.0 * PI * PI));
        let _ = writeln!(
            s,
            "plot '{}' using {x_col}:(column(17)/(column(3)*column(4))) every ::1 with linespoints title '{},{}', \\",
            csv_path.display(),
            self.spec.bc_pair.0,
            self.spec.bc_pair.1
        );
        let _ = writeln!(s, "     bulk with lines dashtype 2 title '5/(72 pi^2)'");
        s
    }
}

/// Column names of the sweep CSV.
pub const CSV_HEADER: [&str; 19] = [
    "bc1",
    "bc2",
    "lambda1",
    "lambda2",
    "l1",
    "l2",
    "m",
    "energy_unit",
    "const_term",
    "lin_l1",
    "lin_l2",
    "bulk",
    "b_term",
    "c_term",
    "d_term",
    "total",
    "dimensionless_total",
    "dimensionless_error",
    "error",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Domain(format!("csv output: {e}"))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn record(spec: &SweepSpec, row: &SweepRow) -> Vec<String> {
    let d = &row.domain;
    let mut rec = vec![
        spec.bc_pair.0.to_string(),
        spec.bc_pair.1.to_string(),
        num(d.lambda1()),
        num(d.lambda2()),
        num(d.l1),
        num(d.l2),
        num(d.m),
        num(d.energy_unit()),
    ];
    match &row.result {
        Ok(b) => {
            for v in [
                b.const_term,
                b.lin_l1,
                b.lin_l2,
                b.bulk,
                b.b_term,
                b.c_term,
                b.d_term,
                b.total,
                b.dimensionless_total,
                b.dimensionless_error,
            ] {
                rec.push(num(v));
            }
            rec.push(String::new());
        }
        Err(e) => {
            rec.extend(std::iter::repeat(String::new()).take(10));
            rec.push(e.to_string());
        }
    }
    rec
}
