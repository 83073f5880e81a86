use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taskscope::report::Format;
use taskscope_core::semsim::{Measure, WordMeasure};

#[derive(Debug, Parser)]
#[command(name = "taskscope", version, about = "Classify crowdsourcing micro-tasks and measure task similarity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a corpus, reporting record quality.
    Ingest(Shared),
    /// Write a synthetic corpus as JSONL.
    Synth(SynthArgs),
    /// Stratified cross-validation of one feature-set combination and algorithm.
    Cv(CvArgs),
    /// Cross-validation over feature-set combinations and algorithms (F1 table).
    Grid(GridArgs),
    /// Pairwise task similarity matrix.
    Sim(SimArgs),
    /// Cluster tasks by similarity and tabulate categories per cluster.
    Cluster(ClusterArgs),
    /// Re-render a saved run record (`<command>.json`) as CSV or text.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Corpus file, one JSON record per line.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Output directory. Without it the report is printed to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or text.
    #[arg(long, default_value = "text")]
    pub format: Format,
    /// Fail on the first invalid record instead of skipping it.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// JSONL file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub categories: usize,
    #[arg(long, default_value_t = 60)]
    pub per_category: usize,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Sentiment lexicon, `word<TAB>+1|-1` per line (built-in list otherwise).
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// JSON file overriding learner settings (knn_k, forest_trees, svm_c, ...).
    #[arg(long)]
    pub learner_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[command(flatten)]
    pub learn: LearnArgs,
    /// Feature sets combined into one matrix, e.g. `content` or `factual,structural`.
    #[arg(long)]
    pub sets: String,
    /// naive_bayes, knn, tree, forest or svm_smo.
    #[arg(long)]
    pub algo: String,
    /// Also train on the whole corpus and save the model as JSON here.
    #[arg(long)]
    pub save_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[command(flatten)]
    pub learn: LearnArgs,
    /// `all-combos`, or table rows separated by commas with `+` joining sets
    /// inside a row, e.g. `factual,content,factual+content`.
    #[arg(long, default_value = "all-combos")]
    pub sets: String,
    /// `all` or a comma list of algorithms.
    #[arg(long, default_value = "all")]
    pub algo: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordMeasureArg {
    Path,
    WuPalmer,
}

impl From<WordMeasureArg> for WordMeasure {
    fn from(m: WordMeasureArg) -> Self {
        match m {
            WordMeasureArg::Path => WordMeasure::Path,
            WordMeasureArg::WuPalmer => WordMeasure::WuPalmer,
        }
    }
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    Measure::parse(s).ok_or_else(|| format!("unknown measure `{s}` (expected required_action or comprehensibility)"))
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub shared: Shared,
    /// required_action or comprehensibility.
    #[arg(long, value_parser = parse_measure)]
    pub measure: Measure,
    /// WordNet database directory, needed by required_action.
    #[arg(long)]
    pub wordnet: Option<PathBuf>,
    /// English word list for comprehensibility (bundled list otherwise).
    #[arg(long)]
    pub wordlist: Option<PathBuf>,
    /// Word similarity inside required_action.
    #[arg(long, value_enum, default_value = "path")]
    pub word_measure: WordMeasureArg,
    /// Weight of the verb in phrase similarity; arguments get the rest.
    #[arg(long, default_value_t = 0.7)]
    pub verb_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// k-medoids (PAM).
    Pam,
    /// Average-linkage agglomerative.
    Average,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value_t = taskscope_core::cluster::DEFAULT_K)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "pam")]
    pub method: Method,
    #[arg(long, default_value_t = taskscope_core::cluster::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run record written by another subcommand.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "text")]
    pub format: Format,
    /// Output directory. Without it the report is printed to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
