use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value as Json};

use crate::config::Format;
use crate::error::CliError;
use crate::svg::render_svg;
use crate::table::{Kind, ResultTable, Value};

/// Writes `table` to `out_dir/<name>.<ext>` for each format, in the order given.
pub fn emit(table: &ResultTable, formats: &[Format], out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::with_capacity(formats.len());
    for &format in formats {
        let path = out_dir.join(format!("{}.{}", table.name, format.extension()));
        let body = match format {
            Format::Csv => to_csv(table),
            Format::Json => to_json(table),
            Format::Svg => render_svg(table),
        };
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Floats with 17 significant digits, which round-trip exactly.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn field(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Float(x) => format_float(*x),
        Value::Text(t) => t.clone(),
    }
}

/// CSV with `#` comment lines for the metadata and units, then a header row.
pub fn to_csv(table: &ResultTable) -> String {
    let mut out = String::new();
    for (key, value) in &table.meta {
        let text = match value {
            Json::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("# {key}: {}\n", text.replace('\n', " ")));
    }
    let units: Vec<String> = table.columns.iter().map(|c| format!("{}={}", c.name, c.unit)).collect();
    out.push_str(&format!("# units: {}\n", units.join(", ")));

    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer.write_record(table.columns.iter().map(|c| c.name.as_str())).expect("in-memory write");
    for row in &table.rows {
        writer.write_record(row.iter().map(field)).expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    out.push_str(std::str::from_utf8(&bytes).expect("fields are UTF-8"));
    out
}

/// A single object `{meta, columns, rows}`; non-finite floats become null.
pub fn to_json(table: &ResultTable) -> String {
    let doc = json!({
        "meta": table.meta,
        "columns": table.columns,
        "rows": table.rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
    s.push('\n');
    s
}

/// Parses CSV written by [`to_csv`] back into typed rows.
pub fn parse_csv(text: &str, kinds: &[Kind]) -> Result<(Vec<String>, Vec<Vec<Value>>), String> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    if header.len() != kinds.len() {
        return Err(format!("expected {} columns, found {}", kinds.len(), header.len()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let row = record
            .iter()
            .zip(kinds)
            .map(|(f, k)| match k {
                Kind::Int => f.parse().map(Value::Int).map_err(|e| format!("{f:?}: {e}")),
                Kind::Float => f.parse().map(Value::Float).map_err(|e| format!("{f:?}: {e}")),
                Kind::Text => Ok(Value::Text(f.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Plain-text rendering for the terminal.
pub fn to_text(table: &ResultTable) -> String {
    let cells: Vec<Vec<String>> = std::iter::once(table.columns.iter().map(|c| c.name.clone()).collect())
        .chain(table.rows.iter().map(|r| {
            r.iter()
                .map(|v| match v {
                    Value::Float(x) if x.is_finite() => format!("{x:.10e}"),
                    other => field(other),
                })
                .collect()
        }))
        .collect();
    let widths: Vec<usize> = (0..table.columns.len())
        .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = format!("{}\n", table.title);
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
