use std::fmt::{Display, Write as _};
use std::time::Duration;

use crate::config::RunConfig;
use crate::CliError;

/// One verified property. Passes iff no error occurred and
/// `residual <= tolerance`; a NaN residual fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Short pointer to the statement being checked.
    pub anchor: String,
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: &str, anchor: &str, tolerance: f64, residual: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            anchor: anchor.into(),
            error: None,
        }
    }

    /// A check whose computation may fail; failures become failing checks.
    pub fn from_result<E: Display>(
        name: &str,
        anchor: &str,
        tolerance: f64,
        residual: Result<f64, E>,
    ) -> Self {
        match residual {
            Ok(r) => Self::new(name, anchor, tolerance, r),
            Err(e) => Self {
                error: Some(e.to_string()),
                ..Self::new(name, anchor, tolerance, f64::INFINITY)
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    /// Sorted by name.
    pub checks: Vec<Check>,
    pub table: Option<Table>,
    /// Measured but never written out.
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn new(suite: &'static str, mut checks: Vec<Check>, table: Option<Table>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Self {
            suite,
            checks,
            table,
            wall_time: Duration::ZERO,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `printf("%.17g", x)`. Non-finite values print as `inf`, `-inf`, `nan`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mant = trim_fraction(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{:.*}", (16 - exp) as usize, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt_g17(x)
    } else {
        json_string(&fmt_g17(x))
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// JSON with keys in sorted order at every level and `%.17g` numbers.
pub fn render_json(report: &SuiteReport, config: &RunConfig) -> String {
    let mut out = String::from("{\n  \"checks\": [");
    for (i, c) in report.checks.iter().enumerate() {
        let sep = if i == 0 { "\n" } else { ",\n" };
        let error = c.error.as_deref().map_or("null".into(), json_string);
        let _ = write!(
            out,
            "{sep}    {{\"anchor\": {}, \"error\": {}, \"name\": {}, \"passed\": {}, \"residual\": {}, \"tolerance\": {}}}",
            json_string(&c.anchor),
            error,
            json_string(&c.name),
            c.passed(),
            json_number(c.residual),
            json_number(c.tolerance),
        );
    }
    out.push_str(if report.checks.is_empty() { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"config\": {");
    let echo = config.echo();
    for (i, (k, v)) in echo.iter().enumerate() {
        let sep = if i == 0 { "" } else { ", " };
        let _ = write!(out, "{sep}{}: {}", json_string(k), json_number(*v));
    }
    let total = report.checks.len();
    let failed = report.failed();
    let _ = write!(
        out,
        "}},\n  \"summary\": {{\"failed\": {failed}, \"passed\": {}, \"status\": {}, \"suite\": {}, \"total\": {total}}}\n}}\n",
        total - failed,
        json_string(if failed == 0 { "pass" } else { "fail" }),
        json_string(report.suite),
    );
    out
}

/// One row per check, with a header row.
pub fn render_csv(report: &SuiteReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "name", "status", "residual", "tolerance", "anchor", "error"])?;
    for c in &report.checks {
        w.write_record([
            report.suite,
            &c.name,
            if c.passed() { "pass" } else { "fail" },
            &fmt_g17(c.residual),
            &fmt_g17(c.tolerance),
            &c.anchor,
            c.error.as_deref().unwrap_or(""),
        ])?;
    }
    finish_csv(w)
}

pub fn render_table(table: &Table, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|x| fmt_g17(*x)))?;
            }
            finish_csv(w)
        }
        Format::Json => {
            let cols: Vec<_> = table.columns.iter().map(|c| json_string(c)).collect();
            let mut out = format!("{{\n  \"columns\": [{}],\n  \"rows\": [", cols.join(", "));
            for (i, row) in table.rows.iter().enumerate() {
                let sep = if i == 0 { "\n" } else { ",\n" };
                let cells: Vec<_> = row.iter().map(|x| json_number(*x)).collect();
                let _ = write!(out, "{sep}    [{}]", cells.join(", "));
            }
            out.push_str(if table.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
            Ok(out)
        }
    }
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Csv(e.error().to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
