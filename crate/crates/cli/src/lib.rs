//! Batch front-end for the dynsym workbench: argument model, command
//! dispatch, check suites and report writing.

pub mod commands;
pub mod config;
pub mod outcome;
pub mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use config::{Format, RunConfig};
use outcome::{to_value, CliError, Outcome};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DYNSYM_OUT";

/// Serializes the report. JSON embeds the run configuration; CSV is the
/// command's table.
pub fn render(cfg: &RunConfig, o: &Outcome) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => {
            let report = json!({
                "config": to_value(cfg),
                "check": o.check,
                "relation": o.relation,
                "pass": o.pass,
                "result": o.result,
            });
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => o.table.to_csv(),
    }
}

/// `--out` if given, else `<$DYNSYM_OUT>/<command>.<ext>` if the variable
/// is set, else `None` (standard output).
pub fn output_path(cfg: &RunConfig, env_dir: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = &cfg.out {
        return Some(p.clone());
    }
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    env_dir.map(|d| d.join(format!("{}.{}", cfg.command.name(), ext)))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {}", path.display(), e));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(content.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
