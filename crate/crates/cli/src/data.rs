use std::path::Path;

use anyhow::{bail, Context, Result};

/// Reads one value per line. A non-numeric first line is taken as a header;
/// blank lines are skipped.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_values(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        if cell.contains(',') {
            bail!("line {}: expected a single column", i + 1);
        }
        match cell.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if first => {}
            Err(_) => bail!("line {}: '{cell}' is not a number", i + 1),
        }
        first = false;
    }
    if values.is_empty() {
        bail!("no data values");
    }
    Ok(values)
}
