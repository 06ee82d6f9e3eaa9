//! File output with a manifest, and cleanup of partial results.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::config::DEFAULTS_VERSION;
use crate::error::{LabError, Result};

pub const MANIFEST: &str = "manifest.json";

/// Written in place of an undefined moment (zero-mass field).
pub const UNDEFINED: &str = "undefined";

/// An optional number that serializes as [`UNDEFINED`] when absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maybe(pub Option<f64>);

impl Serialize for Maybe {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => s.serialize_f64(v),
            None => s.serialize_str(UNDEFINED),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a, P: Serialize> {
    generator: String,
    defaults_version: u32,
    created_unix_s: u64,
    parameters: &'a P,
    files: &'a [ManifestEntry],
}

/// Files produced by one run. Unless [`OutputSet::finish`] is reached, every
/// file written so far is deleted on drop, together with the directory if
/// this run created it.
#[derive(Debug)]
pub struct OutputSet {
    root: PathBuf,
    created_root: bool,
    files: Vec<PathBuf>,
    done: bool,
}

impl OutputSet {
    pub fn create(root: &Path) -> Result<Self> {
        let created_root = !root.exists();
        fs::create_dir_all(root).map_err(|source| LabError::Io {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            created_root,
            files: Vec::new(),
            done: false,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn open(&mut self, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
        let path = self.root.join(name);
        let file = File::create(&path).map_err(|source| LabError::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path.clone());
        Ok((path, BufWriter::new(file)))
    }

    /// Writes one CSV file, with the header taken from the row type.
    pub fn csv<R: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = R>) -> Result<()> {
        let (_, file) = self.open(name)?;
        let mut w = csv::Writer::from_writer(file);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|source| LabError::Io {
            path: self.root.join(name),
            source,
        })
    }

    /// CSV with a header known only at run time.
    pub fn csv_table(&mut self, name: &str, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
        let (_, file) = self.open(name)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|source| LabError::Io {
            path: self.root.join(name),
            source,
        })
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let (path, mut file) = self.open(name)?;
        serde_json::to_writer_pretty(&mut file, value)?;
        file.write_all(b"\n")
            .and_then(|_| file.flush())
            .map_err(|source| LabError::Io { path, source })
    }

    /// Writes the manifest and keeps the files. Only the manifest carries a
    /// timestamp.
    pub fn finish<P: Serialize>(mut self, parameters: &P) -> Result<Vec<ManifestEntry>> {
        let mut entries = Vec::with_capacity(self.files.len());
        for path in &self.files {
            let bytes = fs::read(path).map_err(|source| LabError::Io {
                path: path.clone(),
                source,
            })?;
            let digest = Sha256::digest(&bytes);
            entries.push(ManifestEntry {
                path: path.strip_prefix(&self.root).unwrap_or(path).to_string_lossy().into_owned(),
                bytes: bytes.len() as u64,
                sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            });
        }
        let created_unix_s = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = Manifest {
            generator: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            defaults_version: DEFAULTS_VERSION,
            created_unix_s,
            parameters,
            files: &entries,
        };
        self.json(MANIFEST, &manifest)?;
        self.done = true;
        Ok(entries)
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if self.done {
            return;
        }
        for path in &self.files {
            let _ = fs::remove_file(path);
        }
        if self.created_root {
            // Fails, and leaves the directory, if anything else lives there.
            let _ = fs::remove_dir(&self.root);
        }
    }
}
