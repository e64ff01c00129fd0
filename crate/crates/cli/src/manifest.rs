use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use coughrank::config::PipelineConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// What a run consumed and produced. Contains no timestamps or host details,
/// so equal inputs give an equal manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: PipelineConfig,
    pub inputs: Vec<InputDigest>,
    /// Paths relative to the output directory, sorted.
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &PipelineConfig) -> Self {
        Self {
            tool: "coughrank".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: config.seed,
            config: config.clone(),
            inputs: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn manifest_json_has_no_volatile_fields() {
        let mut m = RunManifest::new("rank", &PipelineConfig::default());
        m.add_input(Path::new("a.csv"), b"abc");
        let json = m.to_json().unwrap();
        assert!(json.contains("ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"));
        assert_eq!(json, m.to_json().unwrap());
        assert!(!json.contains("time"));
    }
}
