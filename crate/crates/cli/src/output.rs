//! Where results go: `--out` or stdout.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

pub struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Sink { out }
    }

    /// The single result: to the `--out` file, else stdout.
    pub fn emit(&self, v: &Value) -> Result<()> {
        match &self.out {
            Some(path) => write_json(path, v),
            None => to_stdout(&(pretty(v) + "\n")),
        }
    }

    pub fn emit_text(&self, text: &str) -> Result<()> {
        to_stdout(text)
    }

    /// `--out` read as a directory, created on demand.
    pub fn dir(&self) -> Result<Option<&Path>> {
        match &self.out {
            Some(d) => {
                fs::create_dir_all(d).with_context(|| format!("cannot create {}", d.display()))?;
                Ok(Some(d))
            }
            None => Ok(None),
        }
    }
}

/// A closed pipe (`derivator ... | head`) ends output quietly.
fn to_stdout(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).context("cannot write to stdout"),
        _ => Ok(()),
    }
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
    }
    fs::write(path, pretty(v) + "\n").with_context(|| format!("cannot write {}", path.display()))
}

/// A file name from a free-form check name.
pub fn slug(name: &str) -> String {
    let mut s = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.ends_with('_') {
            s.push('_');
        }
    }
    let s = s.trim_matches('_').to_string();
    if s.is_empty() {
        "witness".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::slug;

    #[test]
    fn slugs() {
        assert_eq!(slug("trial 3: T(f) identifications"), "trial_3_t_f_identifications");
        assert_eq!(slug("ΣX ≃ SX"), "x_sx");
        assert_eq!(slug("≃"), "witness");
    }
}
