//! CSV and JSON writers.

use std::io::{self, Write};

use serde::Serialize;

use crate::sweep::{CurveRecord, FamilyResult};

pub const CSV_HEADER: &str = "x,scheme,knowledge,metric,exact,asymptote,mc_mean,mc_stderr";

/// Shortest round-trip decimal, switching to exponent form for tiny or huge values.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

/// Header, then per family a `# family:` line, its notes and its rows.
pub fn write_csv<W: Write>(out: &mut W, families: &[FamilyResult]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for family in families {
        writeln!(out, "# family: {} (x = {})", family.label, family.variable)?;
        for note in &family.notes {
            writeln!(out, "# {note}")?;
        }
        for r in &family.records {
            if let Some(err) = &r.error {
                writeln!(out, "# error at x = {}, {} {}: {err}", format_number(r.x), r.spec, r.metric.label())?;
            }
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                format_number(r.x),
                r.spec.scheme.label(),
                r.spec.knowledge.label(),
                r.metric.label(),
                cell(r.exact),
                cell(r.asymptote),
                cell(r.mc.map(|m| m.mean)),
                cell(r.mc.map(|m| m.std_error)),
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    x: f64,
    scheme: &'static str,
    knowledge: &'static str,
    metric: &'static str,
    exact: Option<f64>,
    asymptote: Option<f64>,
    mc_mean: Option<f64>,
    mc_stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonFamily<'a> {
    family: &'a str,
    variable: &'static str,
    notes: &'a [String],
    records: Vec<JsonRecord<'a>>,
}

fn json_record(r: &CurveRecord) -> JsonRecord<'_> {
    JsonRecord {
        x: r.x,
        scheme: r.spec.scheme.label(),
        knowledge: r.spec.knowledge.label(),
        metric: r.metric.label(),
        exact: r.exact,
        asymptote: r.asymptote,
        mc_mean: r.mc.map(|m| m.mean),
        mc_stderr: r.mc.map(|m| m.std_error),
        error: r.error.as_deref(),
    }
}

pub fn write_json<W: Write>(out: &mut W, families: &[FamilyResult]) -> io::Result<()> {
    let doc: Vec<JsonFamily> = families
        .iter()
        .map(|f| JsonFamily {
            family: &f.label,
            variable: f.variable.label(),
            notes: &f.notes,
            records: f.records.iter().map(json_record).collect(),
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
