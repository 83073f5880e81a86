//! Task records, validation, and the loaded corpus.
//!
//! Reading JSONL from disk happens in the `taskscope` crate; this module owns
//! the record schema, the invariants, and HTML stripping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

mod html;

pub use html::{decode_entities, strip_html, url_host};

/// Field names understood in a corpus record.
pub const KNOWN_FIELDS: &[&str] = &[
    "id",
    "title",
    "description_html",
    "proof",
    "category",
    "employer",
    "payment",
    "time_to_finish",
    "time_to_rate",
    "positions",
    "jobs_done",
    "success_rate",
    "countries",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorpusError {
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error("invalid `{field}`: {reason}")]
    Invariant { field: &'static str, reason: String },
    #[error("duplicate task id `{0}`")]
    DuplicateId(String),
}

/// Structure recovered from the description markup.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DocStructure {
    pub bullet_count: usize,
    /// Word count of each paragraph.
    pub paragraph_lengths: Vec<usize>,
    /// Character count of each non-empty line.
    pub line_lengths: Vec<usize>,
    /// Hostnames of linked URLs, in document order, duplicates kept.
    pub url_hosts: Vec<String>,
}

/// One corpus record as it appears on the wire. Every field is optional
/// here; [`MicroTask::from_record`] enforces what is required.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description_html: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub employer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payment: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_to_finish: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_to_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positions: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs_done: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countries: Option<Vec<String>>,
}

impl TaskRecord {
    /// A record carrying only the required fields.
    pub fn new(id: &str, category: &str, description_html: &str) -> Self {
        Self {
            id: Some(id.into()),
            category: Some(category.into()),
            description_html: Some(description_html.into()),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicroTask {
    pub id: String,
    pub title: String,
    pub description_html: String,
    /// Markup-free description, derived with [`strip_html`].
    pub description_text: String,
    pub proof: String,
    pub category: String,
    pub employer: String,
    /// USD.
    pub payment: f64,
    /// Minutes.
    pub time_to_finish: f64,
    /// Days.
    pub time_to_rate: f64,
    pub positions: u64,
    pub jobs_done: u64,
    pub success_rate: f64,
    /// Uppercase ISO codes; empty means available everywhere.
    pub countries: BTreeSet<String>,
    pub structure: DocStructure,
}

/// Optional fields that were absent and filled with their default.
pub type Defaulted = Vec<&'static str>;

fn non_negative(field: &'static str, v: f64) -> Result<f64, CorpusError> {
    if !v.is_finite() || v < 0.0 {
        return Err(CorpusError::Invariant { field, reason: alloc::format!("{v} is not a finite value >= 0") });
    }
    Ok(v)
}

impl MicroTask {
    /// Validate a record and derive the plain text and structure.
    ///
    /// Missing numeric fields default to 0 and are listed in the returned
    /// [`Defaulted`]; a present `time_to_finish` must be positive.
    pub fn from_record(record: TaskRecord) -> Result<(Self, Defaulted), CorpusError> {
        let id = record.id.filter(|s| !s.trim().is_empty()).ok_or(CorpusError::MissingField("id"))?;
        let description_html = record.description_html.ok_or(CorpusError::MissingField("description_html"))?;
        let category =
            record.category.filter(|s| !s.trim().is_empty()).ok_or(CorpusError::MissingField("category"))?;
        let mut defaulted = Vec::new();
        let mut number = |field: &'static str, v: Option<f64>| match v {
            Some(v) => non_negative(field, v),
            None => {
                defaulted.push(field);
                Ok(0.0)
            }
        };
        let payment = number("payment", record.payment)?;
        let time_to_finish = number("time_to_finish", record.time_to_finish)?;
        if record.time_to_finish.is_some() && time_to_finish == 0.0 {
            return Err(CorpusError::Invariant { field: "time_to_finish", reason: "must be > 0".into() });
        }
        let time_to_rate = number("time_to_rate", record.time_to_rate)?;
        let success_rate = number("success_rate", record.success_rate)?;
        if success_rate > 1.0 {
            return Err(CorpusError::Invariant {
                field: "success_rate",
                reason: alloc::format!("{success_rate} is outside [0, 1]"),
            });
        }
        let positions = record.positions.unwrap_or_else(|| {
            defaulted.push("positions");
            0
        });
        let jobs_done = record.jobs_done.unwrap_or_else(|| {
            defaulted.push("jobs_done");
            0
        });
        let countries = record
            .countries
            .unwrap_or_default()
            .into_iter()
            .map(|c| c.trim().to_uppercase())
            .filter(|c| !c.is_empty())
            .collect();
        let (description_text, structure) = strip_html(&description_html);
        let task = MicroTask {
            id,
            title: record.title.unwrap_or_default(),
            description_html,
            description_text,
            proof: record.proof.unwrap_or_default(),
            category,
            employer: record.employer.unwrap_or_default(),
            payment,
            time_to_finish,
            time_to_rate,
            positions,
            jobs_done,
            success_rate,
            countries,
            structure,
        };
        Ok((task, defaulted))
    }

    /// The record this task was built from (derived fields dropped).
    pub fn to_record(&self) -> TaskRecord {
        TaskRecord {
            id: Some(self.id.clone()),
            title: Some(self.title.clone()),
            description_html: Some(self.description_html.clone()),
            proof: Some(self.proof.clone()),
            category: Some(self.category.clone()),
            employer: Some(self.employer.clone()),
            payment: Some(self.payment),
            time_to_finish: Some(self.time_to_finish),
            time_to_rate: Some(self.time_to_rate),
            positions: Some(self.positions),
            jobs_done: Some(self.jobs_done),
            success_rate: Some(self.success_rate),
            countries: Some(self.countries.iter().cloned().collect()),
        }
    }

    /// Title and description as one text, title first on its own line.
    pub fn full_text(&self) -> String {
        if self.title.trim().is_empty() {
            self.description_text.clone()
        } else {
            let mut s = String::with_capacity(self.title.len() + 1 + self.description_text.len());
            s.push_str(self.title.trim());
            s.push('\n');
            s.push_str(&self.description_text);
            s
        }
    }
}

/// Tasks in load order with per-category counts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    tasks: Vec<MicroTask>,
    category_counts: BTreeMap<String, usize>,
}

impl Corpus {
    pub fn new(tasks: Vec<MicroTask>) -> Result<Self, CorpusError> {
        let mut seen = BTreeSet::new();
        let mut category_counts = BTreeMap::new();
        for t in &tasks {
            if !seen.insert(t.id.as_str()) {
                return Err(CorpusError::DuplicateId(t.id.clone()));
            }
            *category_counts.entry(t.category.clone()).or_insert(0) += 1;
        }
        Ok(Self { tasks, category_counts })
    }

    pub fn from_records(records: impl IntoIterator<Item = TaskRecord>) -> Result<Self, CorpusError> {
        let tasks = records.into_iter().map(|r| MicroTask::from_record(r).map(|(t, _)| t)).collect::<Result<_, _>>()?;
        Self::new(tasks)
    }

    pub fn tasks(&self) -> &[MicroTask] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn category_counts(&self) -> &BTreeMap<String, usize> {
        &self.category_counts
    }

    pub fn labels(&self) -> Vec<String> {
        self.tasks.iter().map(|t| t.category.clone()).collect()
    }

    /// Sub-corpus with the given task indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Corpus {
        let tasks: Vec<MicroTask> = indices.iter().map(|&i| self.tasks[i].clone()).collect();
        let mut category_counts = BTreeMap::new();
        for t in &tasks {
            *category_counts.entry(t.category.clone()).or_insert(0) += 1;
        }
        Corpus { tasks, category_counts }
    }
}

/// A record that was rejected during lenient loading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub line: usize,
    pub reason: String,
}

/// Load-time bookkeeping for one corpus file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub lines_read: usize,
    pub records_loaded: usize,
    pub skipped: Vec<SkippedRecord>,
    /// Optional field name -> number of records where it was defaulted.
    pub defaulted: BTreeMap<String, usize>,
    /// Occurrences of fields outside [`KNOWN_FIELDS`].
    pub unknown_fields: usize,
}

impl QualityReport {
    pub fn record_defaults(&mut self, fields: &[&'static str]) {
        for f in fields {
            *self.defaulted.entry(f.to_string()).or_insert(0) += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rec(id: &str) -> TaskRecord {
        TaskRecord {
            payment: Some(0.3),
            time_to_finish: Some(10.0),
            time_to_rate: Some(3.0),
            positions: Some(5),
            jobs_done: Some(1),
            success_rate: Some(0.5),
            countries: Some(vec!["us".into(), " de ".into()]),
            ..TaskRecord::new(id, "Sign up", "<p>Sign up now</p>")
        }
    }

    #[test]
    fn valid_record_populates_derived_fields() {
        let (t, defaulted) = MicroTask::from_record(rec("1")).unwrap();
        assert!(defaulted.is_empty());
        assert_eq!(t.description_text, "Sign up now");
        assert_eq!(t.structure.paragraph_lengths, vec![3]);
        assert_eq!(t.countries.iter().map(String::as_str).collect::<Vec<_>>(), vec!["DE", "US"]);
    }

    #[test]
    fn required_fields() {
        let mut r = rec("1");
        r.category = None;
        assert_eq!(MicroTask::from_record(r).unwrap_err(), CorpusError::MissingField("category"));
        let mut r = rec("1");
        r.id = Some("  ".into());
        assert_eq!(MicroTask::from_record(r).unwrap_err(), CorpusError::MissingField("id"));
        let mut r = rec("1");
        r.description_html = None;
        assert_eq!(MicroTask::from_record(r).unwrap_err(), CorpusError::MissingField("description_html"));
    }

    #[test]
    fn invariant_violations() {
        let mut r = rec("1");
        r.payment = Some(-1.0);
        assert!(matches!(MicroTask::from_record(r), Err(CorpusError::Invariant { field: "payment", .. })));
        let mut r = rec("1");
        r.success_rate = Some(1.5);
        assert!(matches!(MicroTask::from_record(r), Err(CorpusError::Invariant { field: "success_rate", .. })));
        let mut r = rec("1");
        r.time_to_finish = Some(0.0);
        assert!(matches!(MicroTask::from_record(r), Err(CorpusError::Invariant { field: "time_to_finish", .. })));
        let mut r = rec("1");
        r.payment = Some(f64::NAN);
        assert!(MicroTask::from_record(r).is_err());
    }

    #[test]
    fn missing_optionals_default_and_are_reported() {
        let (t, defaulted) = MicroTask::from_record(TaskRecord::new("x", "c", "d")).unwrap();
        assert_eq!(t.payment, 0.0);
        assert_eq!(t.time_to_finish, 0.0);
        assert!(t.countries.is_empty());
        assert_eq!(defaulted, vec!["payment", "time_to_finish", "time_to_rate", "success_rate", "positions", "jobs_done"]);
    }

    #[test]
    fn corpus_counts_and_duplicates() {
        let c = Corpus::from_records(vec![rec("1"), rec("2")]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.category_counts().get("Sign up"), Some(&2));
        assert_eq!(Corpus::from_records(vec![rec("1"), rec("1")]).unwrap_err(), CorpusError::DuplicateId("1".into()));
        let sub = c.subset(&[1]);
        assert_eq!(sub.tasks()[0].id, "2");
        assert_eq!(sub.category_counts().values().sum::<usize>(), 1);
    }

    #[test]
    fn record_round_trip() {
        let (t, _) = MicroTask::from_record(rec("7")).unwrap();
        let (again, _) = MicroTask::from_record(t.to_record()).unwrap();
        assert_eq!(t, again);
    }
}
