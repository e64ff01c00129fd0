use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use coughrank::io::write_text;

use crate::error::CliResult;
use crate::manifest::RunManifest;

pub const MANIFEST_FILE: &str = "manifest.json";

/// An output directory that remembers every artifact written to it.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: BTreeSet<String>,
}

impl OutputDir {
    pub fn new(root: &Path) -> Self {
        Self {
            root: root.to_path_buf(),
            written: BTreeSet::new(),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, text: &str) -> CliResult<()> {
        write_text(&self.root.join(name), text)?;
        self.written.insert(name.to_string());
        Ok(())
    }

    pub fn artifacts(&self) -> Vec<String> {
        self.written.iter().cloned().collect()
    }

    /// Records the artifact list in `manifest` and writes it last. Returns
    /// every file written, the manifest included.
    pub fn finish(mut self, manifest: &mut RunManifest) -> CliResult<Vec<String>> {
        manifest.artifacts = self.artifacts();
        let json = manifest.to_json()?;
        self.write(MANIFEST_FILE, &json)?;
        Ok(self.artifacts())
    }
}

/// Maps a strategy or model label onto a file-name-safe stem.
pub fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems_are_sanitized() {
        assert_eq!(file_stem("1"), "1");
        assert_eq!(file_stem("s 2/x"), "s_2_x");
        assert_eq!(file_stem("Extra-Trees"), "Extra-Trees");
    }
}
