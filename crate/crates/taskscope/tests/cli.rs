use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn taskscope(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taskscope")).args(args).current_dir(dir).output().unwrap()
}

fn fixture_wordnet() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/mini-wordnet")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn small_corpus(dir: &Path) {
    let o = taskscope(dir, &["synth", "--out", "c.jsonl", "--per-category", "8", "--seed", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn required_action_without_wordnet_fails() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let o = taskscope(dir.path(), &["cluster", "--corpus", "c.jsonl", "--measure", "required_action", "--out", "out"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--wordnet"), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn missing_wordnet_directory_is_named() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let o = taskscope(dir.path(), &["sim", "--corpus", "c.jsonl", "--measure", "required_action", "--wordnet", "nowhere"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("nowhere"), "{}", stderr(&o));
}

#[test]
fn strict_ingest_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let good = r#"{"id":"a","category":"x","description_html":"Click it."}"#;
    let bad = r#"{"id":"b","category":"x","description_html":"Go.","payment":"lots"}"#;
    fs::write(dir.path().join("c.jsonl"), format!("{good}\n{bad}\n")).unwrap();

    let o = taskscope(dir.path(), &["ingest", "--corpus", "c.jsonl", "--strict"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("payment"), "{err}");

    let o = taskscope(dir.path(), &["ingest", "--corpus", "c.jsonl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("# seed: 7"));
    assert!(out.contains("payment"), "{out}");
}

#[test]
fn unknown_flag_and_bad_values_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    for args in [
        vec!["cv", "--corpus", "c.jsonl", "--bogus"],
        vec!["cv", "--corpus", "c.jsonl", "--algo", "jrip"],
        vec!["cv", "--corpus", "c.jsonl", "--folds", "1"],
        vec!["grid", "--corpus", "c.jsonl", "--sets", "content,nothing"],
        vec!["cluster", "--corpus", "c.jsonl", "--measure", "comprehensibility", "--k", "1000"],
        vec!["ingest", "--corpus", "absent.jsonl"],
    ] {
        let o = taskscope(dir.path(), &args);
        assert!(!o.status.success(), "{args:?} succeeded");
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn cv_writes_report_record_and_model() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let args = ["cv", "--corpus", "c.jsonl", "--sets", "content", "--algo", "knn", "--folds", "4", "--out", "out", "--save-model", "m.json"];
    let o = taskscope(dir.path(), &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/cv.txt")).unwrap();
    assert!(text.starts_with("# taskscope "));
    assert!(text.contains("# seed: 7"));
    let model = taskscope::artifact::load_model(&dir.path().join("m.json")).unwrap();
    assert_eq!(model.format_version, taskscope::artifact::ARTIFACT_VERSION);

    // report re-renders the JSON record exactly
    let o = taskscope(dir.path(), &["report", "--input", "out/cv.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), text);
}

#[test]
fn cluster_writes_assignments() {
    let dir = tempfile::tempdir().unwrap();
    small_corpus(dir.path());
    let wn = fixture_wordnet();
    let args = ["cluster", "--corpus", "c.jsonl", "--measure", "required_action", "--wordnet", wn.to_str().unwrap(), "--k", "5", "--out", "out"];
    let o = taskscope(dir.path(), &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("out/cluster-assignments.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "task_id,cluster,medoid");
    assert_eq!(rows.len(), 41);
    let table = fs::read_to_string(dir.path().join("out/cluster.txt")).unwrap();
    assert!(table.lines().any(|l| l.starts_with("Category") && l.contains("A5")));
}
