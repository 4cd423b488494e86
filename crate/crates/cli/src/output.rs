use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use etaid::macdonald::VerificationReport;
use serde::Serialize;

pub const OUT_DIR_VAR: &str = "ETAID_OUT_DIR";

#[derive(Serialize)]
pub struct RunDocument<'a> {
    pub manifest: Option<&'a str>,
    pub reports: &'a [VerificationReport],
    pub runtime_seconds: f64,
}

/// Where output goes. A relative `--output` is placed under `ETAID_OUT_DIR`
/// when that is set; with no `--output`, the directory receives
/// `default_name` instead of stdout.
pub fn destination(output: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    match (output, dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(default_name)),
        (None, None) => None,
    }
}

pub fn emit(text: &str, output: Option<&Path>, default_name: &str) -> Result<()> {
    match destination(output, default_name) {
        None => print!("{text}"),
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

pub fn text_document(manifest: Option<&str>, reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    if let Some(v) = manifest {
        out.push_str(&format!("manifest={v} reports={}\n", reports.len()));
    }
    for r in reports {
        out.push_str(&r.text_line());
        out.push('\n');
    }
    out
}

pub fn json_document(
    manifest: Option<&str>,
    reports: &[VerificationReport],
    runtime_seconds: f64,
) -> Result<String> {
    let doc = RunDocument { manifest, reports, runtime_seconds };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}
