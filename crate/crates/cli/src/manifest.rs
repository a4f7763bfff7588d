//! Sidecar manifests: every resolved parameter plus input digests, written in
//! the same `key = value` format the config loader reads back.

use std::fmt::Display;
use std::io::Read;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{io_error, CliError};

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    command: &'static str,
    params: Vec<(String, String)>,
    digests: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            params: Vec::new(),
            digests: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: &dyn Display) {
        let value = value.to_string();
        match self.params.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.params.push((key.to_string(), value)),
        }
    }

    /// Records the SHA-256 of an input file under `sha256.<key>`.
    pub fn digest(&mut self, key: &str, path: &Path) -> Result<(), CliError> {
        let hex = sha256_file(path)?;
        self.digests.push((format!("sha256.{key}"), hex));
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "# kdescan run manifest; pass back with --config to reproduce\ncommand = {}\nversion = {}\n",
            self.command,
            env!("CARGO_PKG_VERSION")
        );
        for (k, v) in self.params.iter().chain(&self.digests) {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    /// Writes `<output>.manifest` next to `output`.
    pub fn write_beside(&self, output: &Path) -> Result<PathBuf, CliError> {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest");
        let path = PathBuf::from(name);
        std::fs::write(&path, self.render()).map_err(io_error(&path))?;
        Ok(path)
    }
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let mut file = std::fs::File::open(path).map_err(io_error(path))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf).map_err(io_error(path))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_params_then_digests() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");
        std::fs::write(&input, "abc").unwrap();
        let mut m = Manifest::new("simulate");
        m.param("seed", &7);
        m.param("seed", &8);
        m.digest("input", &input).unwrap();
        let text = m.render();
        assert!(text.contains("command = simulate\n"));
        assert!(text.contains("seed = 8\n"));
        assert!(!text.contains("seed = 7"));
        assert!(text.contains(
            "sha256.input = ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad\n"
        ));
    }
}
