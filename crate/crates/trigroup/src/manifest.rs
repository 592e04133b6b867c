//! Run manifests and output files.
//!
//! The manifest embedded in an output holds only what determines its bytes
//! (tool version, subcommand, configuration, seed, input path). Thread
//! count, output path, timestamp and hashes go to the sidecar
//! `<output>.manifest.json`, so reruns of the same manifest are byte-equal.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub input: Option<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: impl Serialize, seed: Option<u64>, input: Option<&Path>) -> Self {
        RunManifest {
            tool: "trigroup",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            config: serde_json::to_value(config).expect("configuration is plain data"),
            seed,
            input: input.map(|p| p.display().to_string()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// `{"manifest": ...}` line opening a JSONL file.
    pub fn jsonl_header(&self) -> String {
        format!("{{\"manifest\":{}}}\n", self.to_json())
    }

    /// `# manifest ...` comment line for CSV and text outputs.
    pub fn comment_header(&self) -> String {
        format!("# manifest {}\n", self.to_json())
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    manifest: &'a RunManifest,
    output: String,
    threads: usize,
    timestamp_unix: u64,
    manifest_sha256: String,
    output_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes `body` to `output` and its sidecar, or to stdout when `output`
/// is `None`.
pub fn emit(output: Option<&Path>, body: &str, manifest: &RunManifest, threads: usize) -> io::Result<()> {
    let Some(path) = output else {
        let mut out = io::stdout().lock();
        out.write_all(body.as_bytes())?;
        return out.flush();
    };
    std::fs::write(path, body)?;
    let sidecar = Sidecar {
        manifest,
        output: path.display().to_string(),
        threads,
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        manifest_sha256: sha256_hex(manifest.to_json().as_bytes()),
        output_sha256: sha256_hex(body.as_bytes()),
    };
    let mut text = serde_json::to_string_pretty(&sidecar).expect("plain data");
    text.push('\n');
    std::fs::write(sidecar_path(path), text)
}

/// JSONL lines, one per item.
pub fn jsonl<T: Serialize>(items: impl IntoIterator<Item = T>) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(&it).expect("plain data"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.manifest.json"));
    }

    #[test]
    fn headers_are_single_lines() {
        let m = RunManifest::new("sweep", serde_json::json!({"n": 3}), Some(1), None);
        assert_eq!(m.jsonl_header().lines().count(), 1);
        assert!(m.comment_header().starts_with("# manifest {\"tool\":\"trigroup\""));
    }
}
