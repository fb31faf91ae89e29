use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use circsym_core::Result;
use tempfile::NamedTempFile;

/// Files staged in memory and written together. Nothing reaches the output
/// directory until every file has been rendered; each file is then written
/// to a temporary sibling and renamed into place.
#[derive(Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn add_with<F>(&mut self, name: &str, render: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    {
        let mut buf = Vec::new();
        render(&mut buf)?;
        self.add(name, buf);
        Ok(())
    }

    pub fn add_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.add(name, buf);
        Ok(())
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut staged = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let mut tmp = NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            staged.push((tmp, dir.join(name)));
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| e.error)?;
            written.push(path);
        }
        Ok(written)
    }
}
