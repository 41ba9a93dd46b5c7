//! Rendering a result document as JSON or CSV.

use serde_json::Value;

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// The text of a cell: strings verbatim, `null` empty, everything else as
/// compact JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flattens a document into a table.
///
/// * An array of objects becomes one row per element, with the union of
///   their keys (first-seen order) as the header.
/// * An object with exactly one array-of-objects field (for example a report
///   with per-item records) becomes that table; its scalar fields are
///   dropped, since they are summaries of the rows.
/// * Any other object becomes a single row.
/// * Any other array becomes a single `value` column.
pub fn to_csv(doc: &Value) -> Result<String, csv::Error> {
    let rows: Vec<&Value> = match doc {
        Value::Array(items) => items.iter().collect(),
        Value::Object(map) => {
            let tables: Vec<&Vec<Value>> = map
                .values()
                .filter_map(|v| v.as_array())
                .filter(|a| !a.is_empty() && a.iter().all(Value::is_object))
                .collect();
            match tables.as_slice() {
                [only] => only.iter().collect(),
                _ => vec![doc],
            }
        }
        other => vec![other],
    };
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    if header.is_empty() {
        w.write_record(["value"])?;
        for r in &rows {
            w.write_record([cell(r)])?;
        }
    } else {
        w.write_record(&header)?;
        for r in &rows {
            let record: Vec<String> = header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect();
            w.write_record(&record)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
}
