//! Report files: a header echoing the run, then a CSV or aligned-text body.
//! Every run also keeps a JSON record so `report` can re-render it later.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use taskscope_core::cluster::{CategoryDistribution, Clustering};
use taskscope_core::corpus::QualityReport;
use taskscope_core::eval::EvaluationReport;
use taskscope_core::semsim::SimilarityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    #[default]
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected csv or text)")),
        }
    }
}

/// What produced a report: tool version, subcommand, seed and settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: BTreeMap<String, String>,
}

impl RunHeader {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            tool: "taskscope".into(),
            version: crate::VERSION.into(),
            command: command.into(),
            seed,
            config: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.into(), value.to_string());
        self
    }

    /// `# key: value` lines.
    pub fn render(&self) -> String {
        let mut out = format!("# {} {}\n# command: {}\n", self.tool, self.version, self.command);
        match self.seed {
            Some(s) => writeln!(out, "# seed: {s}").unwrap(),
            None => out.push_str("# seed: none\n"),
        }
        for (k, v) in &self.config {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Ingest { category_counts: BTreeMap<String, usize>, quality: QualityReport },
    Cv { report: EvaluationReport },
    Grid { reports: Vec<EvaluationReport> },
    Sim { matrix: SimilarityMatrix },
    Cluster { clustering: Clustering, distribution: CategoryDistribution },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Ingest { .. } => "ingest",
            Payload::Cv { .. } => "cv",
            Payload::Grid { .. } => "grid",
            Payload::Sim { .. } => "sim",
            Payload::Cluster { .. } => "cluster",
        }
    }
}

/// A finished run, as stored next to its rendered report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub header: RunHeader,
    pub payload: Payload,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run records serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Header followed by the body in the requested format.
    pub fn render(&self, format: Format) -> String {
        let mut out = self.header.render();
        let body = match (&self.payload, format) {
            (Payload::Ingest { category_counts, quality }, f) => ingest_body(category_counts, quality, f),
            (Payload::Cv { report }, f) => cv_body(report, f),
            (Payload::Grid { reports }, f) => grid_body(reports, f),
            (Payload::Sim { matrix }, f) => sim_body(matrix, f),
            (Payload::Cluster { distribution, .. }, f) => distribution_body(distribution, f),
        };
        if format == Format::Text {
            out.push('\n');
        }
        out.push_str(&body);
        out
    }
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

/// First column left-aligned, the rest right-aligned.
fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate().take(cols) {
            if i == 0 {
                write!(line, "{cell:<w$}", w = widths[0]).unwrap();
            } else {
                write!(line, "  {cell:>w$}", w = widths[i]).unwrap();
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn table(header: Vec<String>, rows: Vec<Vec<String>>, format: Format) -> String {
    match format {
        Format::Csv => csv(&header, &rows),
        Format::Text => aligned(&header, &rows),
    }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn ingest_body(counts: &BTreeMap<String, usize>, q: &QualityReport, format: Format) -> String {
    let mut rows = vec![
        vec!["lines_read".into(), q.lines_read.to_string()],
        vec!["records_loaded".into(), q.records_loaded.to_string()],
        vec!["records_skipped".into(), q.skipped.len().to_string()],
        vec!["unknown_fields".into(), q.unknown_fields.to_string()],
    ];
    rows.extend(q.defaulted.iter().map(|(f, n)| vec![format!("defaulted:{f}"), n.to_string()]));
    rows.extend(counts.iter().map(|(c, n)| vec![format!("category:{c}"), n.to_string()]));
    let mut out = table(strings(&["metric", "value"]), rows, format);
    if !q.skipped.is_empty() {
        if format == Format::Text {
            out.push('\n');
        }
        let skipped = q.skipped.iter().map(|s| vec![s.line.to_string(), s.reason.clone()]).collect();
        out.push_str(&table(strings(&["skipped_line", "reason"]), skipped, format));
    }
    out
}

fn cv_body(r: &EvaluationReport, format: Format) -> String {
    let total: usize = r.per_class.iter().map(|c| c.support).sum();
    let mut rows: Vec<Vec<String>> = r
        .per_class
        .iter()
        .map(|c| {
            vec![c.class.clone(), format!("{:.4}", c.precision), format!("{:.4}", c.recall), format!("{:.4}", c.f1), c.support.to_string()]
        })
        .collect();
    rows.push(vec!["weighted".into(), String::new(), String::new(), format!("{:.4}", r.weighted_f1), total.to_string()]);
    let header = strings(&["class", "precision", "recall", "f1", "support"]);
    match format {
        Format::Csv => csv(&header, &rows),
        Format::Text => {
            let c = &r.config_echo;
            let mut out = format!(
                "feature sets: {}\nalgorithm: {}\nfolds: {}\nweighted F1: {:.4}\n\n",
                c.feature_sets, c.algorithm, c.folds, r.weighted_f1
            );
            out.push_str(&aligned(&header, &rows));
            out.push_str("\nconfusion (rows actual, columns predicted)\n");
            let mut head = vec![String::new()];
            head.extend((0..r.classes.len()).map(|i| format!("p{}", i + 1)));
            let conf: Vec<Vec<String>> = r
                .confusion
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut v = vec![format!("p{} {}", i + 1, r.classes[i])];
                    v.extend(row.iter().map(|n| n.to_string()));
                    v
                })
                .collect();
            out.push_str(&aligned(&head, &conf));
            let folds: Vec<String> = r.fold_scores.iter().map(|s| format!("{s:.4}")).collect();
            writeln!(out, "\nfold weighted F1: {}", folds.join(" ")).unwrap();
            out
        }
    }
}

/// One row per feature-set combination, one column per
/// algorithm, weighted F1 in the cells.
fn grid_body(reports: &[EvaluationReport], format: Format) -> String {
    let mut sets: Vec<&str> = Vec::new();
    let mut algos: Vec<String> = Vec::new();
    let mut cells: BTreeMap<(&str, String), f64> = BTreeMap::new();
    for r in reports {
        let s = r.config_echo.feature_sets.as_str();
        let a = r.config_echo.algorithm.to_string();
        if !sets.contains(&s) {
            sets.push(s);
        }
        if !algos.contains(&a) {
            algos.push(a.clone());
        }
        cells.insert((s, a), r.weighted_f1);
    }
    let mut header = vec![match format {
        Format::Csv => "feature_set".to_string(),
        Format::Text => "Feature Set".to_string(),
    }];
    header.extend(algos.iter().cloned());
    let rows = sets
        .iter()
        .map(|s| {
            let mut row = vec![s.to_string()];
            row.extend(algos.iter().map(|a| cells.get(&(*s, a.clone())).map_or("-".into(), |v| format!("{v:.4}"))));
            row
        })
        .collect();
    table(header, rows, format)
}

fn sim_body(m: &SimilarityMatrix, format: Format) -> String {
    let ids = m.task_ids();
    let mut header = vec!["task_id".to_string()];
    header.extend(ids.iter().cloned());
    let digits = if format == Format::Csv { 6 } else { 3 };
    let rows = (0..m.len())
        .map(|i| {
            let mut row = vec![ids[i].clone()];
            row.extend(m.row(i).iter().map(|v| format!("{v:.digits$}")));
            row
        })
        .collect();
    table(header, rows, format)
}

/// Cluster names A1, A2, ...
pub fn cluster_name(cluster: usize) -> String {
    format!("A{}", cluster + 1)
}

/// Categories as rows, clusters as columns, member share in
/// the cells and `-` where a category is absent.
fn distribution_body(d: &CategoryDistribution, format: Format) -> String {
    let mut header = vec![match format {
        Format::Csv => "category".to_string(),
        Format::Text => "Category".to_string(),
    }];
    header.extend((0..d.rows.len()).map(cluster_name));
    let digits = if format == Format::Csv { 6 } else { 2 };
    let mut rows: Vec<Vec<String>> = d
        .categories
        .iter()
        .map(|c| {
            let mut row = vec![c.clone()];
            row.extend(d.rows.iter().map(|r| r.get(c).map_or("-".into(), |v| format!("{v:.digits$}"))));
            row
        })
        .collect();
    let mut sizes = vec!["members".to_string()];
    sizes.extend(d.sizes.iter().map(|n| n.to_string()));
    rows.push(sizes);
    table(header, rows, format)
}

/// Per-task cluster membership as CSV, with the run header.
pub fn assignments_csv(header: &RunHeader, clustering: &Clustering) -> String {
    let rows = clustering
        .task_ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let c = clustering.assignments[i];
            vec![id.clone(), cluster_name(c), (clustering.medoids[c] == i).to_string()]
        })
        .collect::<Vec<_>>();
    header.render() + &csv(&strings(&["task_id", "cluster", "medoid"]), &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use taskscope_core::eval::CellConfig;
    use taskscope_core::learn::Algorithm;

    fn report(sets: &str, algorithm: Algorithm, f1: f64) -> EvaluationReport {
        EvaluationReport {
            classes: vec!["a".into(), "b, c".into()],
            per_class: vec![],
            weighted_f1: f1,
            confusion: vec![vec![3, 1], vec![2, 4]],
            config_echo: CellConfig { feature_sets: sets.into(), algorithm, folds: 10, seed: 7 },
            fold_scores: vec![],
        }
    }

    #[test]
    fn header_echoes_seed_and_config() {
        let h = RunHeader::new("cv", Some(7)).with("folds", 10).with("algo", "knn");
        assert_eq!(h.render(), format!("# taskscope {}\n# command: cv\n# seed: 7\n# algo: knn\n# folds: 10\n", crate::VERSION));
    }

    #[test]
    fn grid_is_table_two_shaped() {
        let reports = vec![
            report("factual", Algorithm::Forest, 0.86),
            report("factual", Algorithm::SvmSmo, 0.73),
            report("content", Algorithm::Forest, 0.92),
            report("content", Algorithm::SvmSmo, 0.94),
        ];
        let body = grid_body(&reports, Format::Text);
        assert_eq!(body, "Feature Set  forest  svm_smo\nfactual      0.8600   0.7300\ncontent      0.9200   0.9400\n");
        assert_eq!(grid_body(&reports, Format::Csv).lines().next(), Some("feature_set,forest,svm_smo"));
    }

    #[test]
    fn distribution_uses_dashes_for_zero() {
        let d = CategoryDistribution {
            categories: vec!["Promotion".into(), "Sign up".into()],
            sizes: vec![3, 1],
            rows: vec![
                BTreeMap::from([("Sign up".to_string(), 2.0 / 3.0), ("Promotion".to_string(), 1.0 / 3.0)]),
                BTreeMap::from([("Sign up".to_string(), 1.0)]),
            ],
        };
        let text = distribution_body(&d, Format::Text);
        assert_eq!(text, "Category     A1    A2\nPromotion  0.33     -\nSign up    0.67  1.00\nmembers       3     1\n");
        let csv = distribution_body(&d, Format::Csv);
        assert!(csv.contains("Promotion,0.333333,-\n"));
    }

    #[test]
    fn csv_quotes_commas() {
        let s = csv(&strings(&["class"]), &[vec!["Search, Click, Engage".into()]]);
        assert_eq!(s, "class\n\"Search, Click, Engage\"\n");
    }

    #[test]
    fn run_record_json_round_trip() {
        let rec = RunRecord { header: RunHeader::new("cv", Some(1)), payload: Payload::Cv { report: report("content", Algorithm::Knn, 0.5) } };
        let back = RunRecord::from_json(&rec.to_json()).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.render(Format::Csv), rec.render(Format::Csv));
    }
}
