//! CSV ingestion and emission in the `date,value` quarterly format.

use std::path::Path;

use econokit::{QuarterIndex, Series};

use crate::CliError;

/// Parse CSV text into one series per value column.
///
/// The first column must be `date` holding `YYYYQn` tokens. A single column
/// called `value` takes `default_name`; any other header names its series.
/// With `locale_comma` the field separator is `;` and `,` is the decimal mark.
pub fn parse_csv(text: &str, default_name: &str, locale_comma: bool) -> Result<Vec<Series>, CliError> {
    let delim = if locale_comma { b';' } else { b',' };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delim)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Data(format!("malformed CSV header: {e}")))?
        .clone();
    if !locale_comma && headers.len() == 1 && headers[0].contains(';') {
        return Err(CliError::Data(
            "header is ';'-separated; pass --locale-comma for files with decimal commas".into(),
        ));
    }
    if headers.is_empty() || !headers[0].eq_ignore_ascii_case("date") {
        return Err(CliError::Data("first CSV column must be named 'date'".into()));
    }
    if headers.len() < 2 {
        return Err(CliError::Data("CSV needs at least one value column after 'date'".into()));
    }
    let names: Vec<String> = headers
        .iter()
        .skip(1)
        .map(|h| if h == "value" && headers.len() == 2 { default_name.to_string() } else { h.to_string() })
        .collect();

    let mut dates = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::Data(format!("line {line}: malformed CSV: {e}")))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rec.len() != headers.len() {
            let hint = if !locale_comma && rec.len() > headers.len() {
                "; values with a decimal comma need --locale-comma (';'-separated)"
            } else {
                ""
            };
            return Err(CliError::Data(format!(
                "line {line}: expected {} fields, found {}{hint}",
                headers.len(),
                rec.len()
            )));
        }
        let date: QuarterIndex = rec[0]
            .parse()
            .map_err(|_| CliError::Data(format!("line {line}: bad date '{}', expected e.g. 1991Q1", &rec[0])))?;
        dates.push(date);
        for (j, field) in rec.iter().skip(1).enumerate() {
            columns[j].push(parse_number(field, locale_comma).map_err(|msg| {
                CliError::Data(format!("line {line}, column '{}': {msg}", names[j]))
            })?);
        }
    }
    if dates.is_empty() {
        return Err(CliError::Data("CSV has no data rows".into()));
    }
    names
        .into_iter()
        .zip(columns)
        .map(|(name, vals)| {
            Series::from_rows(name.clone(), dates.iter().copied().zip(vals))
                .map_err(|e| CliError::Data(format!("series '{name}': {e}")))
        })
        .collect()
}

fn parse_number(field: &str, locale_comma: bool) -> Result<f64, String> {
    if field.is_empty() {
        return Err("missing value".into());
    }
    let owned;
    let text = if locale_comma {
        if field.contains('.') {
            return Err(format!("'{field}' mixes '.' into a decimal-comma file"));
        }
        owned = field.replace(',', ".");
        owned.as_str()
    } else {
        if field.contains(',') {
            return Err(format!("'{field}' contains a comma; use --locale-comma for decimal commas"));
        }
        field
    };
    let v: f64 = text.parse().map_err(|_| format!("'{field}' is not a number"))?;
    if !v.is_finite() {
        return Err(format!("'{field}' is not finite"));
    }
    Ok(v)
}

pub fn read_csv(path: &Path, locale_comma: bool) -> Result<Vec<Series>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("value");
    parse_csv(&text, stem, locale_comma).map_err(|e| match e {
        CliError::Data(m) => CliError::Data(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Wide CSV over the union of dates; cells outside a series' span stay blank.
pub fn write_csv(series: &[Series]) -> String {
    let mut out = String::from("date");
    for s in series {
        out.push(',');
        out.push_str(s.name());
    }
    out.push('\n');
    let Some(first) = series.iter().map(|s| s.start()).min() else {
        return out;
    };
    let last = series.iter().map(|s| s.end()).max().expect("non-empty");
    let mut d = first;
    loop {
        out.push_str(&d.to_string());
        for s in series {
            out.push(',');
            if let Some(v) = s.at(d) {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
        if d == last {
            break;
        }
        d = d.succ();
    }
    out
}
