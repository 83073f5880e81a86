//! Versioned JSON model artifacts: the fitted feature pipeline together
//! with the trained classifier.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use taskscope_core::corpus::MicroTask;
use taskscope_core::features::FeaturePipeline;
use taskscope_core::learn::{Prediction, TrainedModel};

use crate::report::RunHeader;
use crate::{write_atomic, Error};

pub const ARTIFACT_FORMAT: &str = "taskscope-model";
pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format: String,
    pub format_version: u32,
    pub header: RunHeader,
    pub pipeline: FeaturePipeline,
    pub model: TrainedModel,
}

#[derive(Debug, thiserror::Error)]
pub enum PredictError {
    #[error(transparent)]
    Features(#[from] taskscope_core::features::FeatureError),
    #[error(transparent)]
    Learn(#[from] taskscope_core::learn::LearnError),
}

impl ModelArtifact {
    pub fn new(header: RunHeader, pipeline: FeaturePipeline, model: TrainedModel) -> Self {
        Self { format: ARTIFACT_FORMAT.into(), format_version: ARTIFACT_VERSION, header, pipeline, model }
    }

    pub fn predict(&self, task: &MicroTask) -> Result<Prediction, PredictError> {
        let x = self.pipeline.transform(&[task])?;
        Ok(self.model.predict(x.row(0))?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("artifacts serialize")
    }
}

pub fn save_model(path: &Path, artifact: &ModelArtifact) -> Result<(), Error> {
    write_atomic(path, artifact.to_json().as_bytes())
}

pub fn load_model(path: &Path) -> Result<ModelArtifact, Error> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    let bad = |reason: String| Error::Format { path: path.to_path_buf(), reason };
    let value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    match value.get("format").and_then(Value::as_str) {
        Some(ARTIFACT_FORMAT) => {}
        other => return Err(bad(format!("not a model artifact (format {other:?})"))),
    }
    match value.get("format_version").and_then(Value::as_u64) {
        Some(v) if v == u64::from(ARTIFACT_VERSION) => {}
        other => return Err(bad(format!("unsupported artifact version {other:?}, expected {ARTIFACT_VERSION}"))),
    }
    serde_json::from_value(value).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use taskscope_core::corpus::Corpus;
    use taskscope_core::features::{FeatureConfig, FeatureSet, SentimentLexicon};
    use taskscope_core::learn::{train, Algorithm, LearnerConfig};

    #[test]
    fn round_trip_predicts_identically() {
        let corpus = Corpus::from_records(taskscope_core::synth::generate_synthetic_corpus(2, 3, 8)).unwrap();
        let tasks: Vec<&MicroTask> = corpus.tasks().iter().collect();
        let sets = BTreeSet::from([FeatureSet::Content, FeatureSet::Factual]);
        let pipeline = FeaturePipeline::fit(&tasks, &sets, &FeatureConfig::default(), &SentimentLexicon::builtin()).unwrap();
        let x = pipeline.transform(&tasks).unwrap();
        let model = train(Algorithm::Forest, &x, &corpus.labels(), &LearnerConfig::default(), 4).unwrap();
        let artifact = ModelArtifact::new(RunHeader::new("cv", Some(4)), pipeline, model);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&path, &artifact).unwrap();
        let loaded = load_model(&path).unwrap();
        for t in &tasks {
            assert_eq!(loaded.predict(t).unwrap(), artifact.predict(t).unwrap());
        }

        let tampered = fs::read_to_string(&path).unwrap().replace("\"format_version\":1", "\"format_version\":99");
        fs::write(&path, tampered).unwrap();
        assert!(load_model(&path).unwrap_err().to_string().contains("version"));
    }
}
