//! File-backed store of problem documents and run records.
//!
//! Every write goes to a temporary file in the target directory and is then
//! renamed over the destination, so readers see either the old or the new
//! bytes. Callers serialize writers; the store itself only guards renames.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use odesys_core::GaConfig;
use serde::{Deserialize, Serialize};

use crate::bundled;
use crate::document::ProblemDocument;
use crate::runner::ResultDocument;

/// Environment variable naming the store directory.
pub const STORE_DIR_ENV: &str = "ODESYS_STORE_DIR";
pub const DEFAULT_STORE_DIR: &str = "odesys-store";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Corrupt { path: PathBuf, source: serde_json::Error },
    #[error("invalid id `{0}`")]
    InvalidId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Queued,
    Running,
    Done,
    Failed,
}

impl RunStatus {
    pub fn is_active(self) -> bool {
        matches!(self, Self::Queued | Self::Running)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub id: String,
    pub problem_id: String,
    /// SHA-256 of the problem document the run was started against.
    pub problem_hash: String,
    pub method: String,
    pub config: GaConfig,
    #[serde(default)]
    pub seeds: Vec<Vec<f64>>,
    pub status: RunStatus,
    /// Milliseconds since the Unix epoch.
    pub created_ms: u64,
    #[serde(default)]
    pub finished_ms: Option<u64>,
    #[serde(default)]
    pub result: Option<ResultDocument>,
    #[serde(default)]
    pub error: Option<RunFailure>,
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

/// Ids become file names, so only a conservative alphabet is allowed.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

/// Writes `bytes` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Debug)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    /// Opens or creates a store. An empty store is seeded with the bundled
    /// problems, and runs left queued or running by a previous process are
    /// marked failed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        let store = Self { root };
        for dir in [store.problems_dir(), store.runs_dir(), store.results_dir()] {
            fs::create_dir_all(&dir).map_err(|source| StoreError::Io { path: dir.clone(), source })?;
        }
        if store.list_problems()?.is_empty() {
            for (id, text) in bundled::BUNDLED {
                let doc = ProblemDocument::from_json(text).expect("bundled documents are valid");
                store.save_problem(id, &doc)?;
            }
        }
        for mut run in store.list_runs(None)? {
            if run.status.is_active() {
                log::warn!("run {} was interrupted by a restart", run.id);
                run.status = RunStatus::Failed;
                run.finished_ms = Some(now_ms());
                run.error = Some(RunFailure { code: "interrupted".into(), message: "the server stopped during the run".into() });
                store.save_run(&run)?;
            }
        }
        Ok(store)
    }

    /// Opens the directory named by `ODESYS_STORE_DIR`, or the default.
    pub fn from_env() -> Result<Self, StoreError> {
        let dir = std::env::var_os(STORE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_STORE_DIR.into());
        Self::open(dir)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn problems_dir(&self) -> PathBuf {
        self.root.join("problems")
    }

    fn runs_dir(&self) -> PathBuf {
        self.root.join("runs")
    }

    fn results_dir(&self) -> PathBuf {
        self.root.join("results")
    }

    fn checked(id: &str) -> Result<&str, StoreError> {
        if valid_id(id) {
            Ok(id)
        } else {
            Err(StoreError::InvalidId(id.to_string()))
        }
    }

    fn read(path: &Path) -> Result<Option<Vec<u8>>, StoreError> {
        match fs::read(path) {
            Ok(bytes) => Ok(Some(bytes)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(StoreError::Io { path: path.to_path_buf(), source }),
        }
    }

    fn write(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
        write_atomic(path, bytes).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })
    }

    fn parse<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, StoreError> {
        serde_json::from_slice(bytes).map_err(|source| StoreError::Corrupt { path: path.to_path_buf(), source })
    }

    fn json_ids(dir: &Path) -> Result<Vec<String>, StoreError> {
        let entries = fs::read_dir(dir).map_err(|source| StoreError::Io { path: dir.to_path_buf(), source })?;
        let mut ids = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|source| StoreError::Io { path: dir.to_path_buf(), source })?;
            let name = entry.file_name();
            let Some(id) = name.to_str().and_then(|n| n.strip_suffix(".json")) else { continue };
            if valid_id(id) {
                ids.push(id.to_string());
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn list_problems(&self) -> Result<Vec<String>, StoreError> {
        Self::json_ids(&self.problems_dir())
    }

    pub fn load_problem(&self, id: &str) -> Result<Option<ProblemDocument>, StoreError> {
        let path = self.problems_dir().join(format!("{}.json", Self::checked(id)?));
        Self::read(&path)?.map(|b| Self::parse(&path, &b)).transpose()
    }

    pub fn save_problem(&self, id: &str, doc: &ProblemDocument) -> Result<(), StoreError> {
        let path = self.problems_dir().join(format!("{}.json", Self::checked(id)?));
        let mut bytes = serde_json::to_vec_pretty(doc).expect("documents always serialize");
        bytes.push(b'\n');
        Self::write(&path, &bytes)
    }

    pub fn load_run(&self, id: &str) -> Result<Option<RunRecord>, StoreError> {
        let path = self.runs_dir().join(format!("{}.json", Self::checked(id)?));
        Self::read(&path)?.map(|b| Self::parse(&path, &b)).transpose()
    }

    pub fn save_run(&self, run: &RunRecord) -> Result<(), StoreError> {
        let path = self.runs_dir().join(format!("{}.json", Self::checked(&run.id)?));
        Self::write(&path, &serde_json::to_vec_pretty(run).expect("records always serialize"))
    }

    /// Runs in creation order, optionally only those of one problem.
    pub fn list_runs(&self, problem_id: Option<&str>) -> Result<Vec<RunRecord>, StoreError> {
        let mut runs = Vec::new();
        for id in Self::json_ids(&self.runs_dir())? {
            if let Some(run) = self.load_run(&id)? {
                if problem_id.is_none_or(|p| p == run.problem_id) {
                    runs.push(run);
                }
            }
        }
        runs.sort_by(|a, b| a.created_ms.cmp(&b.created_ms).then_with(|| a.id.cmp(&b.id)));
        Ok(runs)
    }

    /// Stores the exact `result.json` bytes and diagnostics of a run.
    pub fn save_result(&self, id: &str, result: &[u8], diagnostics: &[u8]) -> Result<(), StoreError> {
        let id = Self::checked(id)?;
        Self::write(&self.results_dir().join(format!("{id}.jsonl")), diagnostics)?;
        Self::write(&self.results_dir().join(format!("{id}.json")), result)
    }

    pub fn load_result(&self, id: &str) -> Result<Option<Vec<u8>>, StoreError> {
        Self::read(&self.results_dir().join(format!("{}.json", Self::checked(id)?)))
    }

    pub fn load_diagnostics(&self, id: &str) -> Result<Option<Vec<u8>>, StoreError> {
        Self::read(&self.results_dir().join(format!("{}.jsonl", Self::checked(id)?)))
    }
}
