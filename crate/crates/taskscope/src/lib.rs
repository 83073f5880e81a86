//! File formats around `taskscope-core`: corpus JSONL, WordNet database
//! directories, lexicons and wordlists, report files and model artifacts.

use std::path::PathBuf;

pub mod artifact;
pub mod corpus_io;
pub mod report;
pub mod resources;
mod write;

pub use write::write_atomic;

/// Version string echoed in every report header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: line {line}: {reason}", path.display())]
    Corpus { path: PathBuf, line: usize, reason: String },
    #[error("missing {what}: {}", path.display())]
    MissingResource { what: String, path: PathBuf },
    #[error("WordNet database in {}: {source}", dir.display())]
    WordNet { dir: PathBuf, source: taskscope_core::semsim::WordNetError },
    #[error("sentiment lexicon {}: {source}", path.display())]
    Lexicon { path: PathBuf, source: taskscope_core::features::FeatureError },
    #[error("{}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
