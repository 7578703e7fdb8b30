//! Output plumbing: significant-digit rendering, CSV building, and the run
//! manifest written beside every output file.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{CliError, CliResult, Ctx};

/// Render `v` at `sig` significant decimal digits: plain decimal notation
/// for ordinary magnitudes, scientific for extreme ones, trailing zeros
/// trimmed. The output is locale independent (dot separator).
pub fn format_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sig = sig.max(1);
    let mag = v.abs().log10().floor() as i32;
    if mag >= sig as i32 + 4 || mag < -8 {
        return format!("{:.*e}", sig - 1, v);
    }
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A column-ordered CSV accumulator. Cells are written verbatim, so they
/// must already be plain (no commas); every producer in this crate emits
/// numbers, identifiers, or empty cells.
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        CsvTable { header, rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len(), "ragged CSV row");
        self.rows.push(cells);
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut writer = csv::Writer::from_path(path).map_err(kdominant::Error::from)?;
        writer
            .write_record(&self.header)
            .map_err(kdominant::Error::from)?;
        for row in &self.rows {
            writer.write_record(row).map_err(kdominant::Error::from)?;
        }
        writer.flush().map_err(|e| CliError::Write {
            path: path.to_path_buf(),
            source: e,
        })?;
        Ok(())
    }
}

/// Everything needed to reproduce a run that wrote files: re-invoking the
/// recorded argv with the recorded seed regenerates the outputs byte for
/// byte, whatever the worker count.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seed: u64,
    /// Where the seed came from: "cli-flag", "env", or "default".
    pub seed_source: String,
    pub precision: usize,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub duration_ms: u128,
}

/// Write `<stem>.manifest.json` beside the first output file, listing every
/// output of this run. Runs that only print to stdout write no manifest.
pub fn write_manifest(ctx: &Ctx, subcommand: &str, outputs: &[PathBuf]) -> CliResult<PathBuf> {
    let first = outputs.first().expect("write_manifest needs an output");
    let stem = first
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("run");
    let path = first.with_file_name(format!("{stem}.manifest.json"));
    let manifest = RunManifest {
        subcommand: subcommand.to_string(),
        argv: ctx.argv.clone(),
        seed: ctx.seed,
        seed_source: ctx.seed_source.to_string(),
        precision: ctx.precision,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        duration_ms: ctx.started.elapsed().as_millis(),
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, json + "\n").map_err(|e| CliError::Write {
        path: path.clone(),
        source: e,
    })?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::format_sig;

    #[test]
    fn significant_digit_rendering() {
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(426.2994, 4), "426.3");
        assert_eq!(format_sig(426.2994, 7), "426.2994");
        assert_eq!(format_sig(0.00476, 3), "0.00476");
        assert_eq!(format_sig(-1.5, 3), "-1.5");
        assert_eq!(format_sig(2603.0, 12), "2603");
        // Extreme magnitudes switch to scientific notation.
        assert_eq!(format_sig(9.68e-12, 3), "9.68e-12");
        assert!(format_sig(1.0e40, 6).contains('e'));
        // Rounding may carry into the next magnitude.
        assert_eq!(format_sig(0.9999, 2), "1");
    }
}
