use std::io::Write;

use scalecalc_core::fmt::round_sig;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Rounds every non-integer number in `v` to twelve significant digits.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or_default());
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(rounded).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let v = rounded(serde_json::to_value(value)?);
    serde_json::to_writer_pretty(&mut *w, &v)?;
    writeln!(w)?;
    Ok(())
}

/// Numeric columns are right-aligned, everything else left-aligned.
pub fn write_table(w: &mut dyn Write, headers: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    let mut numeric = vec![true; headers.len()];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
            numeric[i] &= cell == "-" || cell.parse::<f64>().is_ok();
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let pad = " ".repeat(widths[i] - c.chars().count());
                if numeric[i] {
                    format!("{pad}{c}")
                } else {
                    format!("{c}{pad}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(w, "{}", line(headers.to_vec()).trim_end())?;
    for row in rows {
        writeln!(w, "{}", line(row.iter().map(String::as_str).collect()).trim_end())?;
    }
    Ok(())
}

pub fn write_csv(w: &mut dyn Write, headers: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(headers)?;
    for row in rows {
        out.write_record(row)?;
    }
    out.flush()?;
    Ok(())
}
