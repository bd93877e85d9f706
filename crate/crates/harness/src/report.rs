//! Rendering of suite results: an aligned table for people and one JSON
//! record per line for golden-file comparison.
//!
//! Floats in structured output are printed as `{:.16e}` (17 significant
//! digits); non-finite values become the strings `"NaN"`, `"inf"`, `"-inf"`.
//! Wall time is kept out of structured records so repeated runs produce
//! identical bytes.

use std::fmt::Write as _;
use std::time::Duration;

use ellipsum_core::Complex;
use serde_json::Value;

use crate::config::ShapeValue;
use crate::sampler::ParamValue;
use crate::suite::{worse, SuiteReport, TrialReport};
use crate::HarnessError;

pub const FORMAT_NAME: &str = "ellipsum-report";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Structured,
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"NaN\"".into()
    } else if x > 0.0 {
        "\"inf\"".into()
    } else {
        "\"-inf\"".into()
    }
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// `[re, im]` with both parts printed to 17 significant digits.
pub fn complex_json(z: Complex) -> String {
    format!("[{},{}]", num(z.re), num(z.im))
}

fn param(value: &ParamValue) -> String {
    match value {
        ParamValue::Int(v) => v.to_string(),
        ParamValue::Scalar(z) => complex_json(*z),
        ParamValue::List(zs) => {
            let items: Vec<String> = zs.iter().map(|&z| complex_json(z)).collect();
            format!("[{}]", items.join(","))
        }
    }
}

fn header(seed: u64, trials: u32, tolerance: f64, identities: &[&str]) -> String {
    let names: Vec<String> = identities.iter().map(|s| string(s)).collect();
    format!(
        "{{\"record\":\"header\",\"format\":{},\"version\":{FORMAT_VERSION},\"seed\":{seed},\"trials\":{trials},\"tolerance\":{},\"identities\":[{}]}}",
        string(FORMAT_NAME),
        num(tolerance),
        names.join(",")
    )
}

fn trial_record(r: &TrialReport) -> String {
    let mut out = String::new();
    write!(
        out,
        "{{\"record\":\"trial\",\"identity\":{},\"trial\":{},\"shape\":",
        string(r.identity.name()),
        r.trial
    )
    .unwrap();
    match &r.shape {
        None => out.push_str("null"),
        Some(shape) => {
            let fields: Vec<String> = shape
                .fields()
                .into_iter()
                .map(|(name, value)| {
                    let v = match value {
                        ShapeValue::Int(v) => v.to_string(),
                        list => list.to_string(),
                    };
                    format!("{}:{v}", string(name))
                })
                .collect();
            write!(out, "{{{}}}", fields.join(",")).unwrap();
        }
    }
    let params: Vec<String> = r
        .params
        .iter()
        .map(|(name, v)| format!("{}:{}", string(name), param(v)))
        .collect();
    write!(
        out,
        ",\"params\":{{{}}},\"residual\":{},\"tolerance\":{},\"pass\":{},\"error\":{}}}",
        params.join(","),
        num(r.residual),
        num(r.tolerance),
        r.pass,
        r.error.as_deref().map_or("null".to_string(), string)
    )
    .unwrap();
    out
}

/// One row of input to the human table.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub identity: String,
    pub trial: u32,
    pub shape: String,
    pub residual: f64,
    pub pass: bool,
    pub error: Option<String>,
    pub wall_time: Option<Duration>,
}

impl From<&TrialReport> for Row {
    fn from(r: &TrialReport) -> Self {
        Row {
            identity: r.identity.name().to_string(),
            trial: r.trial,
            shape: r.shape.as_ref().map_or("-".to_string(), |s| s.to_string()),
            residual: r.residual,
            pass: r.pass,
            error: r.error.clone(),
            wall_time: Some(r.wall_time),
        }
    }
}

struct Summary<'a> {
    identity: &'a str,
    worst: &'a Row,
    max_residual: f64,
    passed: usize,
    total: usize,
    time: Option<Duration>,
}

fn summarize(rows: &[Row]) -> Vec<Summary<'_>> {
    let mut out: Vec<Summary<'_>> = Vec::new();
    for row in rows {
        let fresh = out.last().is_none_or(|s| s.identity != row.identity);
        if fresh {
            out.push(Summary {
                identity: &row.identity,
                worst: row,
                max_residual: row.residual,
                passed: 0,
                total: 0,
                time: Some(Duration::ZERO),
            });
        }
        let s = out.last_mut().expect("just pushed");
        let next = worse(s.max_residual, row.residual);
        if (next.is_nan() && !s.max_residual.is_nan()) || next > s.max_residual {
            s.worst = row;
        }
        s.max_residual = next;
        s.total += 1;
        s.passed += row.pass as usize;
        s.time = match (s.time, row.wall_time) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    out
}

/// Aligned table with one line per identity: the shape of its worst trial,
/// the largest residual, and the pass count. Failed trials with an error are
/// listed underneath.
pub fn render_human(rows: &[Row]) -> String {
    let summaries = summarize(rows);
    let mut lines = vec![[
        "identity".to_string(),
        "worst shape".to_string(),
        "max residual".to_string(),
        "passed".to_string(),
        "time".to_string(),
    ]];
    for s in &summaries {
        lines.push([
            s.identity.to_string(),
            s.worst.shape.clone(),
            format!("{:.3e}", s.max_residual),
            format!("{}/{}", s.passed, s.total),
            s.time.map_or("-".to_string(), |t| {
                format!("{:.1} ms", t.as_secs_f64() * 1e3)
            }),
        ]);
    }
    let widths: Vec<usize> = (0..5)
        .map(|c| {
            lines
                .iter()
                .map(|l| l[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for line in &lines {
        let mut text = String::new();
        for (c, cell) in line.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            if c == 2 || c == 3 || c == 4 {
                text.push_str(&" ".repeat(pad));
                text.push_str(cell);
            } else {
                text.push_str(cell);
                text.push_str(&" ".repeat(pad));
            }
            if c < 4 {
                text.push_str("  ");
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    }
    for row in rows {
        if let Some(e) = &row.error {
            writeln!(out, "error: {} trial {}: {e}", row.identity, row.trial).unwrap();
        }
    }
    out
}

/// Renders a suite run in either format.
pub fn emit_report(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Human => {
            let rows: Vec<Row> = report.reports.iter().map(Row::from).collect();
            render_human(&rows)
        }
        Format::Structured => {
            let names: Vec<&str> = report.identities.iter().map(|id| id.name()).collect();
            let mut out = header(report.seed, report.trials, report.tolerance, &names);
            out.push('\n');
            for r in &report.reports {
                out.push_str(&trial_record(r));
                out.push('\n');
            }
            out
        }
    }
}

fn field_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "NaN" => Some(f64::NAN),
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}

fn shape_text(v: &Value) -> String {
    match v {
        Value::Object(map) if !map.is_empty() => map
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    Value::Array(xs) => format!(
                        "[{}]",
                        xs.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                    other => other.to_string(),
                };
                format!("{k}={v}")
            })
            .collect::<Vec<_>>()
            .join(" "),
        _ => "-".to_string(),
    }
}

/// A structured report read back in.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    /// The header line, if present.
    pub header: Option<String>,
    pub rows: Vec<Row>,
    /// The trial lines as read, in the same order as `rows`.
    pub lines: Vec<String>,
}

impl ParsedReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => render_human(&self.rows),
            Format::Structured => {
                let mut out = String::new();
                for line in self.header.iter().chain(&self.lines) {
                    out.push_str(line);
                    out.push('\n');
                }
                out
            }
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Parses structured output. Blank lines are skipped; anything that is not
/// a header or trial record is an error.
pub fn parse_structured(text: &str) -> Result<ParsedReport, HarnessError> {
    let mut parsed = ParsedReport {
        header: None,
        rows: Vec::new(),
        lines: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| HarnessError::Report(format!("line {}: {what}", i + 1));
        let v: Value = serde_json::from_str(line).map_err(|e| bad(&e.to_string()))?;
        match v.get("record").and_then(Value::as_str) {
            Some("header") => {
                if v.get("format").and_then(Value::as_str) != Some(FORMAT_NAME) {
                    return Err(bad("unknown report format"));
                }
                parsed.header = Some(line.to_string());
            }
            Some("trial") => {
                let identity = v
                    .get("identity")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("missing identity"))?;
                let trial = v
                    .get("trial")
                    .and_then(Value::as_u64)
                    .and_then(|t| u32::try_from(t).ok())
                    .ok_or_else(|| bad("missing trial index"))?;
                let residual = v
                    .get("residual")
                    .and_then(field_f64)
                    .ok_or_else(|| bad("missing residual"))?;
                let pass = v
                    .get("pass")
                    .and_then(Value::as_bool)
                    .ok_or_else(|| bad("missing pass flag"))?;
                let error = v.get("error").and_then(Value::as_str).map(str::to_string);
                parsed.rows.push(Row {
                    identity: identity.to_string(),
                    trial,
                    shape: shape_text(v.get("shape").unwrap_or(&Value::Null)),
                    residual,
                    pass,
                    error,
                    wall_time: None,
                });
                parsed.lines.push(line.to_string());
            }
            _ => return Err(bad("expected a header or trial record")),
        }
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Shape;
    use crate::identity::Identity;

    fn trial(pass: bool, residual: f64) -> TrialReport {
        TrialReport {
            identity: Identity::Kmsi,
            trial: 0,
            shape: Some(Shape {
                n: Some(2),
                m: Some(vec![1, 1]),
                ..Shape::default()
            }),
            params: vec![
                ("p", ParamValue::Scalar(Complex::new(0.25, 0.0))),
                ("Y", ParamValue::Int(1)),
            ],
            residual,
            tolerance: 1e-8,
            pass,
            error: None,
            wall_time: Duration::from_millis(3),
        }
    }

    fn suite(reports: Vec<TrialReport>) -> SuiteReport {
        SuiteReport {
            seed: 9,
            trials: 1,
            tolerance: 1e-8,
            identities: vec![Identity::Kmsi],
            reports,
        }
    }

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.5e-300), "-2.5000000000000000e-300");
        assert_eq!(num(f64::NAN), "\"NaN\"");
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-310] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_input_is_header_only() {
        let empty = suite(Vec::new());
        let text = emit_report(&empty, Format::Structured);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("{\"record\":\"header\""));
        assert_eq!(emit_report(&empty, Format::Human).lines().count(), 1);
    }

    #[test]
    fn single_passing_trial() {
        let text = emit_report(&suite(vec![trial(true, 1e-15)]), Format::Structured);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "{\"record\":\"trial\",\"identity\":\"kmsi\",\"trial\":0,\"shape\":{\"n\":2,\"m\":[1,1]},\
             \"params\":{\"p\":[2.5000000000000000e-1,0.0000000000000000e0],\"Y\":1},\
             \"residual\":1.0000000000000001e-15,\"tolerance\":1.0000000000000000e-8,\"pass\":true,\"error\":null}"
        );
        let parsed = parse_structured(&text).unwrap();
        assert_eq!(parsed.rows.len(), 1);
        assert!(parsed.rows[0].pass);
        assert_eq!(parsed.render(Format::Structured), text);
    }

    #[test]
    fn human_table_is_aligned() {
        let mut second = trial(false, 3e-7);
        second.trial = 1;
        let text = emit_report(&suite(vec![trial(true, 1e-15), second]), Format::Human);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("kmsi"));
        assert!(lines[1].contains("3.000e-7"));
        assert!(lines[1].contains("1/2"));
        assert_eq!(
            lines[0].find("max residual").map(|i| i + 12),
            lines[1].find("e-7").map(|i| i + 3)
        );
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(parse_structured("not json").is_err());
        assert!(parse_structured("{\"record\":\"other\"}").is_err());
        assert!(parse_structured("").unwrap().rows.is_empty());
    }
}
