//! Task similarity: *required action* from verb phrases and WordNet, and
//! *comprehensibility* from readability-style features.

mod comprehensibility;
mod matrix;
mod phrases;
mod wordnet;

pub use comprehensibility::{
    comprehensibility_columns, comprehensibility_similarity, document_frequencies, unusual_word_ratio,
    ComprehensibilityVector, FeatureStats, Wordlist, COMPREHENSIBILITY_DIM, STD_FLOOR, UNUSUAL_MAX_DF,
};
pub use matrix::{
    corpus_comprehensibility, corpus_phrases, similarity_matrix, MatrixError, Measure, MeasureResources,
    SimilarityMatrix,
};
pub use phrases::{
    extract_verb_phrases, extract_verb_phrases_from_text, phrase_similarity, phrase_similarity_with,
    required_action_similarity, required_action_similarity_with, RequiredActionConfig, VerbPhrase,
    MAX_PHRASE_WORDS, TRIGGER_PRECEDERS,
};
pub use wordnet::{normalize_lemma, Pos, Synset, SynsetId, WordMeasure, WordNetError, WordNetGraph, WordNetSources};
