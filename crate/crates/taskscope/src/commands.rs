use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use taskscope::artifact::{save_model, ModelArtifact};
use taskscope::corpus_io::{load_corpus, to_jsonl};
use taskscope::report::{assignments_csv, Format, Payload, RunHeader, RunRecord};
use taskscope::resources::{load_lexicon, load_wordlist, load_wordnet};
use taskscope::write_atomic;
use taskscope_core::cluster::{agglomerative, category_distribution, k_medoids};
use taskscope_core::corpus::{Corpus, MicroTask};
use taskscope_core::eval::{cross_validate, grid_run, EvalConfig};
use taskscope_core::features::{all_combinations, combination_label, FeatureConfig, FeaturePipeline, FeatureSet};
use taskscope_core::learn::{train, Algorithm, LearnerConfig};
use taskscope_core::semsim::{similarity_matrix, Measure, MeasureResources, RequiredActionConfig, SimilarityMatrix, WordNetGraph, Wordlist};
use taskscope_core::synth::generate_synthetic_corpus;

use crate::cli::{ClusterArgs, Command, CvArgs, GridArgs, LearnArgs, Method, ReportArgs, Shared, SimArgs, SynthArgs};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(a),
        Command::Synth(a) => synth(a),
        Command::Cv(a) => cv(a),
        Command::Grid(a) => grid(a),
        Command::Sim(a) => sim(a),
        Command::Cluster(a) => cluster(a),
        Command::Report(a) => report(a),
    }
}

fn require_file(path: &Path, what: &str) -> Result<()> {
    if !path.is_file() {
        bail!("{what} not found: {}", path.display());
    }
    Ok(())
}

fn load(shared: &Shared) -> Result<Corpus> {
    let loaded = load_corpus(&shared.corpus, shared.strict)?;
    if loaded.corpus.is_empty() {
        bail!("{}: no valid records", shared.corpus.display());
    }
    Ok(loaded.corpus)
}

fn header(command: &str, shared: &Shared) -> RunHeader {
    RunHeader::new(command, Some(shared.seed))
        .with("corpus", shared.corpus.display())
        .with("strict", shared.strict)
}

/// Either print the report, or write `<name>.<ext>`, `<name>.json` and any
/// extra files into `out`. Everything is rendered before the first write.
fn emit(out: Option<&Path>, name: &str, record: &RunRecord, format: Format, extra: Vec<(String, String)>) -> Result<()> {
    let rendered = record.render(format);
    let Some(dir) = out else {
        std::io::stdout().write_all(rendered.as_bytes())?;
        return Ok(());
    };
    let mut files: Vec<(PathBuf, String)> =
        vec![(dir.join(format!("{name}.{}", format.extension())), rendered), (dir.join(format!("{name}.json")), record.to_json())];
    files.extend(extra.into_iter().map(|(f, s)| (dir.join(f), s)));
    for (path, contents) in &files {
        write_atomic(path, contents.as_bytes())?;
    }
    Ok(())
}

fn ingest(a: Shared) -> Result<()> {
    require_file(&a.corpus, "corpus")?;
    let loaded = load_corpus(&a.corpus, a.strict)?;
    let record = RunRecord {
        header: header("ingest", &a),
        payload: Payload::Ingest { category_counts: loaded.corpus.category_counts().clone(), quality: loaded.quality },
    };
    emit(a.out.as_deref(), "ingest", &record, a.format, vec![])
}

fn synth(a: SynthArgs) -> Result<()> {
    if a.categories == 0 || a.per_category == 0 {
        bail!("--categories and --per-category must be at least 1");
    }
    let records = generate_synthetic_corpus(a.seed, a.categories, a.per_category);
    write_atomic(&a.out, to_jsonl(&records).as_bytes())?;
    println!("wrote {} records to {}", records.len(), a.out.display());
    Ok(())
}

fn parse_set(s: &str) -> Result<FeatureSet> {
    FeatureSet::parse(s).with_context(|| format!("unknown feature set `{s}` (expected factual, content, structural or semantic)"))
}

/// One combination from `a,b` or `a+b`.
fn parse_combination(spec: &str) -> Result<BTreeSet<FeatureSet>> {
    let sets = spec.split([',', '+']).filter(|s| !s.trim().is_empty()).map(parse_set).collect::<Result<BTreeSet<_>>>()?;
    if sets.is_empty() {
        bail!("--sets is empty");
    }
    Ok(sets)
}

/// Table rows: `all-combos`, or comma-separated rows with `+` inside a row.
fn parse_rows(spec: &str) -> Result<Vec<BTreeSet<FeatureSet>>> {
    if spec.trim() == "all-combos" {
        return Ok(all_combinations());
    }
    let mut rows: Vec<BTreeSet<FeatureSet>> = Vec::new();
    for row in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let set = row.split('+').map(parse_set).collect::<Result<BTreeSet<_>>>()?;
        if !rows.contains(&set) {
            rows.push(set);
        }
    }
    if rows.is_empty() {
        bail!("--sets is empty");
    }
    Ok(rows)
}

fn parse_algorithm(s: &str) -> Result<Algorithm> {
    Algorithm::parse(s.trim()).with_context(|| format!("unknown algorithm `{s}` (expected naive_bayes, knn, tree, forest or svm_smo)"))
}

fn parse_algorithms(spec: &str) -> Result<Vec<Algorithm>> {
    if spec.trim() == "all" {
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut out = Vec::new();
    for s in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let a = parse_algorithm(s)?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        bail!("--algo is empty");
    }
    Ok(out)
}

fn eval_config(a: &LearnArgs) -> Result<EvalConfig> {
    if let Some(p) = &a.lexicon {
        require_file(p, "sentiment lexicon")?;
    }
    let learner = match &a.learner_config {
        None => LearnerConfig::default(),
        Some(p) => {
            require_file(p, "learner config")?;
            let text = fs::read_to_string(p).with_context(|| p.display().to_string())?;
            let c: LearnerConfig = serde_json::from_str(&text).with_context(|| format!("learner config {}", p.display()))?;
            c.validate().with_context(|| format!("learner config {}", p.display()))?;
            c
        }
    };
    if a.folds < 2 {
        bail!("--folds must be at least 2");
    }
    Ok(EvalConfig { learner, features: FeatureConfig::default(), lexicon: load_lexicon(a.lexicon.as_deref())? })
}

fn learn_header(h: RunHeader, a: &LearnArgs, config: &EvalConfig) -> RunHeader {
    h.with("folds", a.folds)
        .with("lexicon", a.lexicon.as_ref().map_or("builtin".to_string(), |p| p.display().to_string()))
        .with("learner", serde_json::to_string(&config.learner).expect("config serializes"))
        .with("content", serde_json::to_string(&config.features.content).expect("config serializes"))
}

fn cv(a: CvArgs) -> Result<()> {
    require_file(&a.shared.corpus, "corpus")?;
    let sets = parse_combination(&a.sets)?;
    let algorithm = parse_algorithm(&a.algo)?;
    let config = eval_config(&a.learn)?;
    let corpus = load(&a.shared)?;
    let report = cross_validate(&corpus, &sets, algorithm, a.learn.folds, a.shared.seed, &config)?;
    let h = learn_header(header("cv", &a.shared), &a.learn, &config).with("sets", combination_label(&sets)).with("algo", algorithm);

    if let Some(path) = &a.save_model {
        let tasks: Vec<&MicroTask> = corpus.tasks().iter().collect();
        let pipeline = FeaturePipeline::fit(&tasks, &sets, &config.features, &config.lexicon)?;
        let x = pipeline.transform(&tasks)?;
        let model = train(algorithm, &x, &corpus.labels(), &config.learner, a.shared.seed)?;
        save_model(path, &ModelArtifact::new(h.clone(), pipeline, model))?;
    }
    let record = RunRecord { header: h, payload: Payload::Cv { report } };
    emit(a.shared.out.as_deref(), "cv", &record, a.shared.format, vec![])
}

fn grid(a: GridArgs) -> Result<()> {
    require_file(&a.shared.corpus, "corpus")?;
    let rows = parse_rows(&a.sets)?;
    let algorithms = parse_algorithms(&a.algo)?;
    let config = eval_config(&a.learn)?;
    let corpus = load(&a.shared)?;
    let reports = grid_run(&corpus, &rows, &algorithms, a.learn.folds, a.shared.seed, &config)?;
    let h = learn_header(header("grid", &a.shared), &a.learn, &config)
        .with("sets", rows.iter().map(combination_label).collect::<Vec<_>>().join(","))
        .with("algo", algorithms.iter().map(|x| x.tag()).collect::<Vec<_>>().join(","));
    let record = RunRecord { header: h, payload: Payload::Grid { reports } };
    emit(a.shared.out.as_deref(), "grid", &record, a.shared.format, vec![])
}

enum Resource {
    WordNet(WordNetGraph, RequiredActionConfig),
    Wordlist(Wordlist),
}

/// Check and load what the measure needs, before touching the corpus.
fn measure_resource(a: &SimArgs) -> Result<Resource> {
    match a.measure {
        Measure::RequiredAction => {
            let Some(dir) = &a.wordnet else {
                bail!("measure required_action needs a WordNet database: pass --wordnet <dict dir>");
            };
            if !(0.0..=1.0).contains(&a.verb_weight) {
                bail!("--verb-weight must lie in [0, 1]");
            }
            let config = RequiredActionConfig { verb_weight: a.verb_weight, measure: a.word_measure.into() };
            Ok(Resource::WordNet(load_wordnet(dir)?, config))
        }
        Measure::Comprehensibility => Ok(Resource::Wordlist(load_wordlist(a.wordlist.as_deref())?)),
    }
}

fn sim_header(command: &str, a: &SimArgs) -> RunHeader {
    let h = header(command, &a.shared).with("measure", a.measure.tag());
    match a.measure {
        Measure::RequiredAction => h
            .with("wordnet", a.wordnet.as_ref().map_or(String::new(), |p| p.display().to_string()))
            .with("word_measure", format!("{:?}", a.word_measure).to_lowercase())
            .with("verb_weight", a.verb_weight),
        Measure::Comprehensibility => {
            h.with("wordlist", a.wordlist.as_ref().map_or("bundled".to_string(), |p| p.display().to_string()))
        }
    }
}

fn matrix(a: &SimArgs) -> Result<(Corpus, SimilarityMatrix)> {
    require_file(&a.shared.corpus, "corpus")?;
    let resource = measure_resource(a)?;
    let corpus = load(&a.shared)?;
    let resources = match &resource {
        Resource::WordNet(wordnet, config) => MeasureResources::RequiredAction { wordnet, config: *config },
        Resource::Wordlist(wordlist) => MeasureResources::Comprehensibility { wordlist },
    };
    let m = similarity_matrix(&corpus, resources);
    Ok((corpus, m))
}

fn sim(a: SimArgs) -> Result<()> {
    let (_, matrix) = matrix(&a)?;
    let record = RunRecord { header: sim_header("sim", &a), payload: Payload::Sim { matrix } };
    emit(a.shared.out.as_deref(), "sim", &record, a.shared.format, vec![])
}

fn cluster(a: ClusterArgs) -> Result<()> {
    let (corpus, matrix) = matrix(&a.sim)?;
    let seed = a.sim.shared.seed;
    let clustering = match a.method {
        Method::Pam => k_medoids(&matrix, a.k, seed, a.max_iter)?,
        Method::Average => agglomerative(&matrix, a.k, seed)?,
    };
    let distribution = category_distribution(&clustering, &corpus)?;
    let method = match a.method {
        Method::Pam => "pam",
        Method::Average => "average",
    };
    let h = sim_header("cluster", &a.sim).with("k", a.k).with("method", method).with("max_iter", a.max_iter);
    let assignments = assignments_csv(&h, &clustering);
    let record = RunRecord { header: h, payload: Payload::Cluster { clustering, distribution } };
    let extra = vec![("cluster-assignments.csv".to_string(), assignments)];
    emit(a.sim.shared.out.as_deref(), "cluster", &record, a.sim.shared.format, extra)
}

fn report(a: ReportArgs) -> Result<()> {
    require_file(&a.input, "run record")?;
    let text = fs::read_to_string(&a.input).with_context(|| a.input.display().to_string())?;
    let record = RunRecord::from_json(&text).with_context(|| format!("{} is not a run record", a.input.display()))?;
    let rendered = record.render(a.format);
    match &a.out {
        None => std::io::stdout().write_all(rendered.as_bytes())?,
        Some(dir) => write_atomic(&dir.join(format!("{}.{}", record.payload.kind(), a.format.extension())), rendered.as_bytes())?,
    }
    Ok(())
}
