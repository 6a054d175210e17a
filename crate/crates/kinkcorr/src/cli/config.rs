//! Flat `key = value` sweep configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::corrections::{
    CompositionRule, DomainConfig, EdgeConvention, SeriesOptions, LAMBDA_MIN,
};
use crate::error::{Error, Result};
use crate::heat_traces::BoundaryCondition;

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepAxis {
    /// Grid values are `lambda1`; `l2` stays fixed.
    Lambda1,
    /// Grid values are `lambda2`; `l1` stays fixed.
    Lambda2,
    /// Grid values are `lambda1 = lambda2`.
    #[default]
    BothEqual,
    /// Grid values are `m` at fixed physical `l1`, `l2`.
    MPhysical,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda1 => "lambda1",
            SweepAxis::Lambda2 => "lambda2",
            SweepAxis::BothEqual => "both",
            SweepAxis::MPhysical => "m",
        }
    }

    fn parse(v: &str) -> Option<SweepAxis> {
        match v {
            "lambda1" | "l1" => Some(SweepAxis::Lambda1),
            "lambda2" | "l2" => Some(SweepAxis::Lambda2),
            "both" | "both-equal" | "both_equal" => Some(SweepAxis::BothEqual),
            "m" | "m-physical" | "m_physical" => Some(SweepAxis::MPhysical),
            _ => None,
        }
    }
}

/// Spacing of the grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl Spacing {
    pub fn name(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

/// Grid `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for GridRange {
    fn default() -> Self {
        GridRange {
            start: 0.5,
            stop: 20.0,
            count: 40,
            spacing: Spacing::Linear,
        }
    }
}

impl GridRange {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(format!(
                "range bounds must be finite, got {} and {}",
                self.start, self.stop
            ));
        }
        if self.start <= LAMBDA_MIN {
            return Err(format!(
                "range start {} must exceed the singularity guard {LAMBDA_MIN:e}",
                self.start
            ));
        }
        if self.start >= self.stop {
            return Err(format!(
                "range start {} must be below stop {}",
                self.start, self.stop
            ));
        }
        if self.count < 2 {
            return Err(format!(
                "range count must be at least 2, got {}",
                self.count
            ));
        }
        Ok(())
    }

    /// Grid points in ascending order; the last point is exactly `stop`.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.count {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => {
                        (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// Where the sweep writes its results.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    /// CSV path; standard output when absent.
    pub csv: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    pub plot_script: bool,
}

/// A fully resolved parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub range: GridRange,
    pub bc_pair: (BoundaryCondition, BoundaryCondition),
    pub series: SeriesOptions,
    /// Physical constants and the sizes held fixed along the sweep.
    pub base: DomainConfig,
    pub output: OutputSpec,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            axis: SweepAxis::default(),
            range: GridRange::default(),
            bc_pair: (BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet),
            series: SeriesOptions::default(),
            base: DomainConfig {
                l1: 1.0,
                l2: 1.0,
                m: 1.0,
                c: 1.0,
                hbar: 1.0,
                a_norm: 1.0,
            },
            output: OutputSpec::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.range.validate().map_err(Error::Domain)?;
        self.series.validate()?;
        self.base.validate()
    }

    /// Domain of one grid point.
    pub fn domain_at(&self, v: f64) -> DomainConfig {
        let mut cfg = self.base;
        match self.axis {
            SweepAxis::Lambda1 => cfg.l1 = v / cfg.m,
            SweepAxis::Lambda2 => cfg.l2 = v / cfg.m,
            SweepAxis::BothEqual => {
                cfg.l1 = v / cfg.m;
                cfg.l2 = v / cfg.m;
            }
            SweepAxis::MPhysical => cfg.m = v,
        }
        cfg
    }

    /// The resolved configuration as a document accepted by [`parse_config`].
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let r = &self.range;
        let b = &self.base;
        let _ = writeln!(out, "axis = {}", self.axis.name());
        let _ = writeln!(out, "range = {:e},{:e},{}", r.start, r.stop, r.count);
        let _ = writeln!(out, "spacing = {}", r.spacing.name());
        let _ = writeln!(out, "bc = {},{}", self.bc_pair.0, self.bc_pair.1);
        let _ = writeln!(out, "series_tol = {:e}", self.series.tol);
        let _ = writeln!(out, "s_step = {:e}", self.series.s_step);
        let rule = match self.series.rule {
            CompositionRule::Published => "published",
            CompositionRule::TraceProduct => "trace_product",
        };
        let edge = match self.series.edge {
            EdgeConvention::Dimensional => "dimensional",
            EdgeConvention::Literal => "literal",
        };
        let _ = writeln!(out, "rule = {rule}");
        let _ = writeln!(out, "edge = {edge}");
        for (k, v) in [
            ("l1", b.l1),
            ("l2", b.l2),
            ("m", b.m),
            ("c", b.c),
            ("hbar", b.hbar),
            ("a_norm", b.a_norm),
        ] {
            let _ = writeln!(out, "{k} = {v:e}");
        }
        if let Some(p) = &self.output.csv {
            let _ = writeln!(out, "output = {}", p.display());
        }
        let _ = writeln!(out, "plot_script = {}", self.output.plot_script);
        out
    }
}

const KEYS: [&str; 16] = [
    "axis",
    "range",
    "spacing",
    "bc",
    "series_tol",
    "s_step",
    "output",
    "plot_script",
    "l1",
    "l2",
    "m",
    "c",
    "hbar",
    "a_norm",
    "rule",
    "edge",
];

fn config_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

fn positive(line: usize, key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| config_err(line, format!("{key}: '{v}' is not a number")))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(config_err(
            line,
            format!("{key} must be positive and finite, got {v}"),
        ))
    }
}

/// Parses a flat `key = value` document.
///
/// `#` starts a comment; blank lines are ignored. Unknown keys, repeated
/// keys, malformed lines and invalid values are reported with their
/// one-based line number. Absent keys keep the values of
/// [`SweepSpec::default`].
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut spec = SweepSpec::default();
    let mut seen: Vec<&str> = Vec::new();
    let mut range_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected 'key = value', got '{content}'")))?;
        let key = key.trim();
        let value = value.trim();
        let known = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| config_err(line, format!("unknown key '{key}'")))?;
        if seen.contains(&known) {
            return Err(config_err(line, format!("key '{key}' given twice")));
        }
        seen.push(known);
        if value.is_empty() {
            return Err(config_err(line, format!("key '{key}' has no value")));
        }
        let lower = value.to_ascii_lowercase();
        match known {
            "axis" => {
                spec.axis = SweepAxis::parse(&lower).ok_or_else(|| {
                    config_err(
                        line,
                        format!("unknown axis '{value}' (expected lambda1, lambda2, both or m)"),
                    )
                })?
            }
            "range" => {
                range_line = line;
                let fields: Vec<&str> = value.split(',').map(str::trim).collect();
                if fields.len() != 3 {
                    return Err(config_err(
                        line,
                        format!("range needs 'start,stop,count', got '{value}'"),
                    ));
                }
                let num = |s: &str| -> Result<f64> {
                    s.parse()
                        .map_err(|_| config_err(line, format!("range: '{s}' is not a number")))
                };
                spec.range.start = num(fields[0])?;
                spec.range.stop = num(fields[1])?;
                spec.range.count = fields[2].parse().map_err(|_| {
                    config_err(line, format!("range: '{}' is not a count", fields[2]))
                })?;
            }
            "spacing" => {
                spec.range.spacing = match lower.as_str() {
                    "linear" | "lin" => Spacing::Linear,
                    "log" => Spacing::Log,
                    _ => {
                        return Err(config_err(
                            line,
                            format!("unknown spacing '{value}' (expected linear or log)"),
                        ))
                    }
                }
            }
            "bc" => {
                let (a, b) = value.split_once(',').ok_or_else(|| {
                    config_err(
                        line,
                        format!("bc needs two names separated by ',', got '{value}'"),
                    )
                })?;
                let parse = |s: &str| {
                    s.parse::<BoundaryCondition>()
                        .map_err(|e| config_err(line, e.to_string()))
                };
                spec.bc_pair = (parse(a)?, parse(b)?);
            }
            "series_tol" => spec.series.tol = positive(line, key, value)?,
            "s_step" => {
                let h = positive(line, key, value)?;
                if h > 0.01 {
                    return Err(config_err(
                        line,
                        format!("s_step must not exceed 0.01, got {value}"),
                    ));
                }
                spec.series.s_step = h;
            }
            "output" => spec.output.csv = Some(PathBuf::from(value)),
            "plot_script" => {
                spec.output.plot_script = match lower.as_str() {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => {
                        return Err(config_err(
                            line,
                            format!("plot_script must be true or false, got '{value}'"),
                        ))
                    }
                }
            }
            "l1" => spec.base.l1 = positive(line, key, value)?,
            "l2" => spec.base.l2 = positive(line, key, value)?,
            "m" => spec.base.m = positive(line, key, value)?,
            "c" => spec.base.c = positive(line, key, value)?,
            "hbar" => spec.base.hbar = positive(line, key, value)?,
            "a_norm" => spec.base.a_norm = positive(line, key, value)?,
            "rule" => {
                spec.series.rule = match lower.as_str() {
                    "published" => CompositionRule::Published,
                    "trace_product" | "trace-product" => CompositionRule::TraceProduct,
                    _ => {
                        return Err(config_err(
                            line,
                            format!("unknown rule '{value}' (expected published or trace_product)"),
                        ))
                    }
                }
            }
            "edge" => {
                spec.series.edge = match lower.as_str() {
                    "dimensional" => EdgeConvention::Dimensional,
                    "literal" => EdgeConvention::Literal,
                    _ => return Err(config_err(
                        line,
                        format!(
                            "unknown edge convention '{value}' (expected dimensional or literal)"
                        ),
                    )),
                }
            }
            _ => unreachable!("every key of KEYS is handled"),
        }
    }
    spec.range
        .validate()
        .map_err(|msg| config_err(range_line, format!("invalid range: {msg}")))?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_both_ends() {
        let r = GridRange {
            start: 0.1,
            stop: 10.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let p = r.points();
        assert_eq!(p[0], 0.1);
        assert!((p[1] - 1.0).abs() < 1e-15);
        assert_eq!(p[2], 10.0);
    }

    #[test]
    fn trailing_comment_is_ignored() {
        let spec = parse_config("bc = n, p  # mixed pairing\n").unwrap();
        assert_eq!(
            spec.bc_pair,
            (BoundaryCondition::Neumann, BoundaryCondition::Periodic)
        );
    }
}
