//! On-disk store of computed spectra keyed by `(k, α, grid, count)`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spectra_core::{Grid, Spectrum};

use crate::error::Result;
use crate::record::SCHEMA_VERSION;

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    schema_version: String,
    entries: BTreeMap<String, Spectrum>,
}

#[derive(Debug)]
pub struct SpectrumCache {
    path: PathBuf,
    file: CacheFile,
    dirty: bool,
}

/// Exact key: floats are written in shortest round-trip form.
pub fn cache_key(k: u32, alpha: f64, grid: &Grid, count: usize) -> String {
    format!(
        "k={k};alpha={alpha:?};left={:?};right={:?};n={};layout={:?};m={count}",
        grid.left, grid.right, grid.n, grid.layout
    )
}

impl SpectrumCache {
    /// Opens `path`, starting empty when the file does not exist. A file from
    /// another schema version is ignored and overwritten on save.
    pub fn open(path: &Path) -> Result<Self> {
        let file = match fs::read_to_string(path) {
            Ok(text) => {
                let f: CacheFile = serde_json::from_str(&text)?;
                if f.schema_version == SCHEMA_VERSION {
                    f
                } else {
                    CacheFile::default()
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => CacheFile::default(),
            Err(e) => return Err(e.into()),
        };
        Ok(Self { path: path.to_path_buf(), file, dirty: false })
    }

    pub fn get(&self, key: &str) -> Option<&Spectrum> {
        self.file.entries.get(key)
    }

    pub fn insert(&mut self, key: String, spectrum: Spectrum) {
        self.file.entries.insert(key, spectrum);
        self.dirty = true;
    }

    pub fn len(&self) -> usize {
        self.file.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.file.entries.is_empty()
    }

    /// Writes through a temporary file so a crash never leaves half a cache.
    pub fn save(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        self.file.schema_version = SCHEMA_VERSION.to_string();
        let tmp = self.path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&self.file)?)?;
        fs::rename(&tmp, &self.path)?;
        self.dirty = false;
        Ok(())
    }
}
