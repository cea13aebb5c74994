//! JSON and CSV emitters; text layouts live with their commands.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

pub fn json<W: Write, T: Serialize + ?Sized>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Header row followed by one record per row, LF line endings.
pub fn csv<W: Write, T: Serialize>(out: &mut W, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut *out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `csv` for a type whose header must appear even with no rows.
pub fn csv_with_header<W: Write, T: Serialize>(out: &mut W, header: &[&str], rows: &[T]) -> Result<()> {
    if rows.is_empty() {
        writeln!(out, "{}", header.join(","))?;
        return Ok(());
    }
    csv(out, rows)
}
