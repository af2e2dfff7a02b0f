//! CSV rows shared by every scenario.

use std::io::Write;

use crate::coin::Axis;
use crate::metrology::FisherReport;

pub const CSV_HEADER: &str = "scenario,axis,D,sigma,theta,t,qfi,fi,qfi_closed,fi_closed,abs_dev";

/// Significant digits of every real-valued field.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scenario: String,
    pub axis: Axis,
    pub dim: usize,
    pub sigma: Option<f64>,
    pub report: FisherReport,
}

impl CsvRow {
    pub fn to_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_g).unwrap_or_default();
        let r = &self.report;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.axis,
            self.dim,
            opt(self.sigma),
            format_g(r.theta),
            r.t,
            format_g(r.qfi),
            format_g(r.fi),
            opt(r.qfi_closed),
            opt(r.fi_closed),
            opt(r.abs_dev()),
        )
    }
}

/// Writes the header and rows with LF line endings.
pub fn write_csv<W: Write>(rows: &[CsvRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_line())?;
    }
    out.flush()
}

pub fn to_csv_string(rows: &[CsvRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// `printf("%.12g")`: shortest of fixed and scientific notation at 12
/// significant digits, trailing zeros removed.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
