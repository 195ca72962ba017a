//! CSV and line-delimited JSON rendering.

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Render rows with a fixed header (CSV) or one object per line (JSON).
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Json => {
            let mut out = String::new();
            for row in rows {
                out.push_str(&serde_json::to_string(row).map_err(|e| CliError::Io(e.to_string()))?);
                out.push('\n');
            }
            Ok(out)
        }
    }
}
