//! Run manifests: enough to re-run a command and check its output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Written as `<out>.manifest` next to every generated artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    /// Directory the relative paths in `argv` are resolved against.
    pub cwd: String,
    /// The parsed command, defaults included.
    pub config: serde_json::Value,
    pub version: String,
    pub inputs: Vec<FileDigest>,
    pub output: FileDigest,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<FileDigest, CliError> {
    Ok(FileDigest { path: path.display().to_string(), sha256: sha256_hex(&std::fs::read(path)?) })
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

impl RunManifest {
    pub fn write(&self, out: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(manifest_path(out), text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// `argv` with the `--out` value replaced.
    pub fn argv_with_out(&self, out: &Path) -> Result<Vec<String>, CliError> {
        let mut argv = self.argv.clone();
        let out = out.display().to_string();
        let mut replaced = false;
        let mut i = 0;
        while i < argv.len() {
            if argv[i] == "--out" && i + 1 < argv.len() {
                argv[i + 1] = out.clone();
                replaced = true;
                i += 1;
            } else if argv[i].starts_with("--out=") {
                argv[i] = format!("--out={out}");
                replaced = true;
            }
            i += 1;
        }
        if !replaced {
            return Err(CliError::Replay("manifest argv has no --out".into()));
        }
        Ok(argv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_is_replaced() {
        let m = RunManifest {
            command: "gen".into(),
            argv: vec!["gen".into(), "--out".into(), "a.txt".into(), "--size".into(), "3".into()],
            cwd: ".".into(),
            config: serde_json::Value::Null,
            version: "0".into(),
            inputs: vec![],
            output: FileDigest { path: "a.txt".into(), sha256: String::new() },
        };
        let argv = m.argv_with_out(Path::new("b.txt")).unwrap();
        assert_eq!(argv[2], "b.txt");
        assert_eq!(manifest_path(Path::new("x/y.perm")), PathBuf::from("x/y.perm.manifest"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
