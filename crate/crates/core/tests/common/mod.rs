#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use taskscope_core::corpus::Corpus;
use taskscope_core::semsim::{Pos, WordNetGraph, WordNetSources};
use taskscope_core::synth::generate_synthetic_corpus;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/mini-wordnet")
}

/// Parse the mini-WordNet fixture from disk.
pub fn fixture_wordnet() -> WordNetGraph {
    let dir = fixture_dir();
    let read = |name: &str| fs::read_to_string(dir.join(name)).unwrap();
    let (dv, iv, dn, inn, ev, en) =
        (read("data.verb"), read("index.verb"), read("data.noun"), read("index.noun"), read("verb.exc"), read("noun.exc"));
    let sources = WordNetSources {
        data: vec![(Pos::Verb, dv.as_str()), (Pos::Noun, dn.as_str())],
        index: vec![(Pos::Verb, iv.as_str()), (Pos::Noun, inn.as_str())],
        exceptions: vec![(Pos::Verb, ev.as_str()), (Pos::Noun, en.as_str())],
    };
    WordNetGraph::from_sources(&sources).unwrap()
}

pub fn synthetic_corpus(seed: u64, per_category: usize) -> Corpus {
    Corpus::from_records(generate_synthetic_corpus(seed, 5, per_category)).unwrap()
}
