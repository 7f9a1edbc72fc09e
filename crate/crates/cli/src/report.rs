use std::io::Write;

use crate::config::Format;
use crate::run::Row;
use crate::CliError;

/// JSON lines, one object per row.
pub fn write_jsonl(rows: &[Row], out: &mut impl Write) -> Result<(), CliError> {
    for row in rows {
        serde_json::to_writer(&mut *out, row).map_err(|e| CliError::Io(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// CSV with columns `name, n, lhs, rhs, margin, status`.
pub fn write_csv(rows: &[Row], out: &mut impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "n", "lhs", "rhs", "margin", "status"])
        .map_err(csv_err)?;
    for row in rows {
        let r = &row.report;
        let status = serde_json::to_value(r.status).map_err(|e| CliError::Io(e.to_string()))?;
        w.write_record([
            r.name.clone(),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.margin.to_string(),
            status.as_str().unwrap_or_default().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows(rows: &[Row], format: Format, out: &mut impl Write) -> Result<(), CliError> {
    match format {
        Format::Json => write_jsonl(rows, out),
        Format::Csv => write_csv(rows, out),
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
