//! Corpus JSONL: one task record per line.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde_json::Value;
use taskscope_core::corpus::{Corpus, MicroTask, QualityReport, SkippedRecord, TaskRecord, KNOWN_FIELDS};

use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub quality: QualityReport,
}

/// A rejected line, before a file path is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct LineError {
    pub line: usize,
    pub reason: String,
}

fn parse_line(raw: &str, quality: &mut QualityReport) -> Result<(MicroTask, Vec<&'static str>), String> {
    let value: Value = serde_json::from_str(raw).map_err(|e| format!("malformed JSON: {e}"))?;
    let Value::Object(map) = &value else {
        return Err("record is not a JSON object".into());
    };
    quality.unknown_fields += map.keys().filter(|k| !KNOWN_FIELDS.contains(&k.as_str())).count();
    let record: TaskRecord = match serde_json::from_value(value.clone()) {
        Ok(r) => r,
        Err(e) => {
            // serde does not say which field failed; try them one at a time
            let field = map.iter().find(|(k, v)| {
                let single = Value::Object([((*k).clone(), (*v).clone())].into_iter().collect());
                serde_json::from_value::<TaskRecord>(single).is_err()
            });
            return Err(match field {
                Some((k, _)) => format!("bad value for `{k}`: {e}"),
                None => format!("bad record: {e}"),
            });
        }
    };
    MicroTask::from_record(record).map_err(|e| e.to_string())
}

/// Parse corpus text. Blank lines are ignored. In strict mode the first bad
/// record is an error; otherwise bad records are skipped and listed in the
/// quality report.
pub fn parse_corpus(text: &str, strict: bool) -> Result<LoadedCorpus, LineError> {
    let mut quality = QualityReport::default();
    let mut tasks = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        quality.lines_read += 1;
        let parsed = parse_line(raw, &mut quality).and_then(|(task, defaulted)| {
            if ids.contains(&task.id) {
                Err(format!("duplicate task id `{}`", task.id))
            } else {
                Ok((task, defaulted))
            }
        });
        match parsed {
            Ok((task, defaulted)) => {
                quality.record_defaults(&defaulted);
                ids.insert(task.id.clone());
                tasks.push(task);
            }
            Err(reason) if strict => return Err(LineError { line, reason }),
            Err(reason) => quality.skipped.push(SkippedRecord { line, reason }),
        }
    }
    quality.records_loaded = tasks.len();
    let corpus = Corpus::new(tasks).map_err(|e| LineError { line: 0, reason: e.to_string() })?;
    Ok(LoadedCorpus { corpus, quality })
}

pub fn load_corpus(path: &Path, strict: bool) -> Result<LoadedCorpus, Error> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    parse_corpus(&text, strict).map_err(|e| Error::Corpus { path: path.to_path_buf(), line: e.line, reason: e.reason })
}

/// Serialize records as JSONL, one compact object per line.
pub fn to_jsonl(records: &[TaskRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}
