//! Report documents and their text / JSON renderings.
//!
//! JSON layout (`"schema": "econokit/1"`):
//!
//! ```text
//! { "schema": "econokit/1", "command": "...",
//!   "sections": [ { "type": "coefficients" | "criteria" | "verdicts"
//!                          | "forecast" | "table" | "note", ... } ] }
//! ```
//!
//! Numbers are written at full precision; dates use `YYYYQn`.

use econokit::linreg::FitResult;
use econokit::QuarterIndex;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "econokit/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub command: String,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Section {
    Coefficients(CoefficientTable),
    Criteria(CriteriaTable),
    Verdicts(VerdictBlock),
    Forecast(ForecastTable),
    Table(GenericTable),
    Note(Note),
}

impl Section {
    pub fn is_empty(&self) -> bool {
        match self {
            Section::Coefficients(t) => t.rows.is_empty(),
            Section::Criteria(t) => t.rows.is_empty(),
            Section::Verdicts(v) => v.verdicts.is_empty(),
            Section::Forecast(f) => f.rows.is_empty(),
            Section::Table(t) => t.rows.is_empty(),
            Section::Note(n) => n.lines.is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub title: String,
    pub dependent: String,
    pub sample: Option<(QuarterIndex, QuarterIndex)>,
    pub rows: Vec<CoefRow>,
    pub footer: FitFooter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefRow {
    pub variable: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitFooter {
    pub nobs: usize,
    pub ser: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub aic: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<CriteriaRow>,
    /// Lag order marked as preferred in each column, if any.
    pub chosen: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaRow {
    pub p: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictBlock {
    pub title: String,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub test: String,
    pub statistic: f64,
    pub critical: Option<f64>,
    pub p_value: Option<f64>,
    pub level: String,
    /// `None` when no critical value is tabulated for this case.
    pub reject: Option<bool>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastTable {
    pub title: String,
    pub variable: String,
    pub origin: QuarterIndex,
    pub rows: Vec<ForecastRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRow {
    pub quarter: QuarterIndex,
    pub forecast: f64,
    pub error: f64,
    pub lo95: f64,
    pub hi95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Note {
    pub title: String,
    pub lines: Vec<String>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            command: command.into(),
            sections: Vec::new(),
        }
    }

    /// Append a section; empty sections are dropped.
    pub fn push(&mut self, section: Section) {
        if !section.is_empty() {
            self.sections.push(section);
        }
    }
}

impl CoefficientTable {
    pub fn from_fit(title: impl Into<String>, fit: &FitResult, sample: Option<(QuarterIndex, QuarterIndex)>) -> Self {
        let rows = (0..fit.k)
            .map(|j| CoefRow {
                variable: fit.names[j].clone(),
                coefficient: fit.coef[j],
                std_error: fit.se[j],
                t_stat: fit.t_stat[j],
                p_value: fit.p_value[j],
            })
            .collect();
        Self {
            title: title.into(),
            dependent: fit.response_name.clone(),
            sample,
            rows,
            footer: FitFooter {
                nobs: fit.nobs,
                ser: fit.ser,
                r2: fit.r2,
                adj_r2: fit.adj_r2,
                aic: fit.aic,
                bic: fit.bic,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render_report(doc: &ReportDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Text => render_text(doc).into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
    }
}

/// Six significant digits, switching to exponent form for very large or
/// very small magnitudes.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000".into();
    }
    let s = format!("{x:.5e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        return format!("{:.*}", (5 - exp) as usize, x);
    }
    format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

fn dec(x: f64, places: usize) -> String {
    format!("{x:.places$}")
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(v) => sig6(*v),
        Cell::Text(s) => s.clone(),
    }
}

/// Left-align the first column, right-align the rest.
fn layout(headers: &[String], rows: &[Vec<String>]) -> String {
    let n = headers.len();
    let mut w: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (j, c) in r.iter().enumerate().take(n) {
            w[j] = w[j].max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (j, c) in cells.iter().enumerate() {
            if j == 0 {
                s.push_str(&format!("{c:<width$}", width = w[0]));
            } else {
                s.push_str(&format!("  {c:>width$}", width = w[j]));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(headers);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn sample_label(s: Option<(QuarterIndex, QuarterIndex)>) -> String {
    match s {
        Some((a, b)) => format!(", {}-{}", a.roman(), b.roman()),
        None => String::new(),
    }
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut blocks = Vec::new();
    for section in doc.sections.iter().filter(|s| !s.is_empty()) {
        let mut out = String::new();
        match section {
            Section::Coefficients(t) => {
                out.push_str(&format!(
                    "{}\nDependent variable: {}{} (T = {})\n\n",
                    t.title,
                    t.dependent,
                    sample_label(t.sample),
                    t.footer.nobs
                ));
                let headers: Vec<String> = ["", "Coefficient", "Standard Error", "t-Statistic", "p-Value"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                let rows: Vec<Vec<String>> = t
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.variable.clone(),
                            sig6(r.coefficient),
                            sig6(r.std_error),
                            dec(r.t_stat, 4),
                            dec(r.p_value, 4),
                        ]
                    })
                    .collect();
                out.push_str(&layout(&headers, &rows));
                out.push('\n');
                let f = &t.footer;
                let footer = vec![
                    vec!["SER".to_string(), sig6(f.ser)],
                    vec!["R²".to_string(), dec(f.r2, 6)],
                    vec!["Adjusted R²".to_string(), dec(f.adj_r2, 6)],
                    vec!["AIC".to_string(), dec(f.aic, 3)],
                    vec!["BIC".to_string(), dec(f.bic, 3)],
                ];
                for r in footer {
                    out.push_str(&format!("{:<12}{:>16}\n", r[0], r[1]));
                }
            }
            Section::Criteria(t) => {
                out.push_str(&format!("{}\n\n", t.title));
                let mut headers = vec!["p".to_string()];
                headers.extend(t.columns.iter().cloned());
                let rows: Vec<Vec<String>> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut cells = vec![r.p.to_string()];
                        for (j, v) in r.values.iter().enumerate() {
                            let star = if t.chosen.get(j).copied().flatten() == Some(r.p) { "*" } else { " " };
                            cells.push(format!("{}{star}", sig6(*v)));
                        }
                        cells
                    })
                    .collect();
                out.push_str(&layout(&headers, &rows));
                let marks: Vec<String> = t
                    .columns
                    .iter()
                    .zip(&t.chosen)
                    .filter_map(|(c, p)| p.map(|p| format!("{c}: p = {p}")))
                    .collect();
                if !marks.is_empty() {
                    out.push_str(&format!("\n* preferred order ({})\n", marks.join(", ")));
                }
            }
            Section::Verdicts(v) => {
                out.push_str(&format!("{}\n\n", v.title));
                for x in &v.verdicts {
                    out.push_str(&format!("{}: {}\n", x.test, x.text));
                }
            }
            Section::Forecast(f) => {
                out.push_str(&format!(
                    "{}\nVariable: {}, origin {}\n\n",
                    f.title,
                    f.variable,
                    f.origin.roman()
                ));
                let headers: Vec<String> = ["Quarter", "Forecast", "Error", "Lower 95%", "Upper 95%"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                let rows: Vec<Vec<String>> = f
                    .rows
                    .iter()
                    .map(|r| vec![r.quarter.roman(), sig6(r.forecast), sig6(r.error), sig6(r.lo95), sig6(r.hi95)])
                    .collect();
                out.push_str(&layout(&headers, &rows));
            }
            Section::Table(t) => {
                out.push_str(&format!("{}\n\n", t.title));
                let rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell_text).collect()).collect();
                out.push_str(&layout(&t.columns, &rows));
            }
            Section::Note(n) => {
                out.push_str(&format!("{}\n\n", n.title));
                for l in &n.lines {
                    out.push_str(l);
                    out.push('\n');
                }
            }
        }
        blocks.push(out);
    }
    blocks.join("\n")
}
