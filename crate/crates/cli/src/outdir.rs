//! Output-directory lifecycle: precondition checks, manifest and resolved
//! config, and small write helpers. Commands call [`prepare`] only after all
//! validation has passed, so a refused or failed run leaves no files behind.

use crate::config::Resolved;
use crate::{CliError, CliResult};
use std::path::{Path, PathBuf};

/// Checks (and if needed creates) the output directory. A non-empty existing
/// directory is refused unless `force` is set, so reruns cannot silently mix
/// outputs from different configurations.
pub fn prepare(out: &Path, force: bool) -> CliResult<()> {
    if out.exists() {
        if !out.is_dir() {
            return Err(CliError::Validation(format!(
                "output path {} exists and is not a directory",
                out.display()
            )));
        }
        let mut entries = std::fs::read_dir(out).map_err(|e| {
            CliError::Validation(format!("cannot inspect {}: {e}", out.display()))
        })?;
        if entries.next().is_some() && !force {
            return Err(CliError::Validation(format!(
                "output directory {} is not empty (pass --force to write anyway)",
                out.display()
            )));
        }
    } else {
        std::fs::create_dir_all(out).map_err(|e| {
            CliError::Validation(format!("cannot create {}: {e}", out.display()))
        })?;
    }
    Ok(())
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Solver(format!("cannot write {}: {e}", path.display())))
}

/// Writes `manifest.json` (command, code version, seed, determinism flag,
/// and the fully resolved config) plus the re-runnable `config.resolved`.
/// Deliberately contains no timestamps or host details: rerunning the same
/// manifest must reproduce the outputs bit for bit.
pub fn write_manifest(
    out: &Path,
    command: &str,
    seed: Option<u64>,
    deterministic: bool,
    resolved: &Resolved,
) -> CliResult<PathBuf> {
    let manifest = serde_json::json!({
        "command": command,
        "code_version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "deterministic": deterministic,
        "config": resolved.map(),
    });
    let path = out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Solver(format!("cannot render manifest: {e}")))?;
    write_file(&path, &(text + "\n"))?;
    write_file(&out.join("config.resolved"), &resolved.render())?;
    Ok(path)
}
