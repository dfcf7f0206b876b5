//! Certificate placement and atomic writes.
//!
//! Output paths resolve in this order: an explicit `--out`, then the
//! `CICY_OUT_DIR` environment variable, then the current directory. Writes go
//! through a temporary sibling file followed by a rename, so a certificate
//! path never holds a half-written document even if runs race or crash.

use std::path::{Path, PathBuf};
use std::process;

use crate::error::CliError;
use crate::schema::Certificate;

/// Environment variable naming the default certificate directory.
pub const OUT_DIR_ENV: &str = "CICY_OUT_DIR";

/// Directory certificates land in when `--out` is not given.
pub fn default_out_dir() -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from("."),
    }
}

/// Resolve the final path: an explicit file path wins; otherwise the default
/// directory plus the deterministic file name.
pub fn resolve_out_path(explicit: Option<&Path>, file_name: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => default_out_dir().join(file_name),
    }
}

/// Serialize and write atomically: temp sibling, then rename over the target.
pub fn write_certificate(path: &Path, cert: &Certificate) -> Result<(), CliError> {
    let mut body = serde_json::to_string_pretty(cert)?;
    body.push('\n');
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = temp_sibling(path);
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::Io(format!("renaming {} into place: {e}", tmp.display()))
    })?;
    Ok(())
}

pub fn read_certificate(path: &Path) -> Result<Certificate, CliError> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let cert: Certificate = serde_json::from_str(&body)?;
    if cert.schema_version != crate::schema::SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "schema version {} (this build reads {})",
            cert.schema_version,
            crate::schema::SCHEMA_VERSION
        )));
    }
    Ok(cert)
}

/// Temporary name unique to this process in the target's directory; rename
/// within one directory is atomic on POSIX filesystems.
fn temp_sibling(path: &Path) -> PathBuf {
    let stem = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp_name = format!(".{stem}.{}.tmp", process::id());
    match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent.join(tmp_name),
        _ => PathBuf::from(tmp_name),
    }
}
