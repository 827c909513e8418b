//! File access, content hashing and `.meta.json` sidecars.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// A stage's output directory plus the inputs it has read.
pub struct Stage {
    name: &'static str,
    out: PathBuf,
    seed: u64,
    config: Map<String, Value>,
    inputs: Vec<(String, String)>,
}

impl Stage {
    pub fn new(name: &'static str, out: &Path, seed: u64) -> Result<Self, CliError> {
        fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
        Ok(Self { name, out: out.to_path_buf(), seed, config: Map::new(), inputs: Vec::new() })
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    /// Records the content hash of an input file.
    pub fn input<'p>(&mut self, path: &'p Path) -> Result<&'p Path, CliError> {
        let hash = sha256_file(path)?;
        self.inputs.push((path.display().to_string(), hash));
        Ok(path)
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.out.join(file)
    }

    /// Writes `bytes` to `file` in the output directory together with its
    /// sidecar.
    pub fn write(&self, file: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.path(file);
        let mut w = BufWriter::new(File::create(&path).map_err(|e| CliError::io(&path, e))?);
        w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| CliError::io(&path, e))?;
        self.write_meta(&path, bytes)?;
        Ok(path)
    }

    pub fn write_jsonl(
        &self,
        file: &str,
        objects: impl IntoIterator<Item = Map<String, Value>>,
    ) -> Result<PathBuf, CliError> {
        let mut buf = Vec::new();
        for object in objects {
            serde_json::to_writer(&mut buf, &object).expect("JSON object serializes");
            buf.push(b'\n');
        }
        self.write(file, &buf)
    }

    fn write_meta(&self, output: &Path, bytes: &[u8]) -> Result<(), CliError> {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let inputs: Vec<Value> = self.inputs.iter().map(|(path, sha)| json!({ "path": path, "sha256": sha })).collect();
        let meta = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "stage": self.name,
            "seed": self.seed,
            "config": self.config,
            "inputs": inputs,
            "output_sha256": hex::encode(Sha256::digest(bytes)),
            "created_unix": created,
        });
        let mut name = output.file_name().expect("output has a file name").to_os_string();
        name.push(".meta.json");
        let path = output.with_file_name(name);
        let text = serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n";
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}
