//! Loading the external resources: WordNet, sentiment lexicon, wordlist.

use std::fs;
use std::path::Path;

use taskscope_core::features::SentimentLexicon;
use taskscope_core::semsim::{Pos, WordNetGraph, WordNetSources, Wordlist};

use crate::Error;

/// The `web2` English word list, used when no wordlist path is given so
/// results never depend on the host's dictionary file.
pub const BUNDLED_WORDLIST: &str = include_str!("../resources/web2.txt");

fn read(path: &Path, what: &str) -> Result<String, Error> {
    if !path.is_file() {
        return Err(Error::MissingResource { what: what.to_string(), path: path.to_path_buf() });
    }
    fs::read_to_string(path).map_err(Error::io(path))
}

fn read_optional(path: &Path) -> Result<Option<String>, Error> {
    if path.is_file() {
        fs::read_to_string(path).map(Some).map_err(Error::io(path))
    } else {
        Ok(None)
    }
}

/// Load a WordNet database directory (the `dict` folder of a WordNet 3.x
/// install). Noun and verb `data`/`index` files are required; adjective and
/// adverb files and the `*.exc` exception lists are read when present.
pub fn load_wordnet(dir: &Path) -> Result<WordNetGraph, Error> {
    if !dir.is_dir() {
        return Err(Error::MissingResource { what: "WordNet directory".into(), path: dir.to_path_buf() });
    }
    let mut files: Vec<(Pos, String, String)> = Vec::new();
    let mut exceptions: Vec<(Pos, String)> = Vec::new();
    for pos in [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv] {
        let suffix = pos.file_suffix();
        let data_path = dir.join(format!("data.{suffix}"));
        let index_path = dir.join(format!("index.{suffix}"));
        let required = matches!(pos, Pos::Noun | Pos::Verb);
        if required || data_path.is_file() || index_path.is_file() {
            let data = read(&data_path, &format!("WordNet file data.{suffix}"))?;
            let index = read(&index_path, &format!("WordNet file index.{suffix}"))?;
            files.push((pos, data, index));
        }
        if let Some(exc) = read_optional(&dir.join(format!("{suffix}.exc")))? {
            exceptions.push((pos, exc));
        }
    }
    let sources = WordNetSources {
        data: files.iter().map(|(p, d, _)| (*p, d.as_str())).collect(),
        index: files.iter().map(|(p, _, i)| (*p, i.as_str())).collect(),
        exceptions: exceptions.iter().map(|(p, e)| (*p, e.as_str())).collect(),
    };
    WordNetGraph::from_sources(&sources).map_err(|source| Error::WordNet { dir: dir.to_path_buf(), source })
}

/// Sentiment lexicon from a `word<TAB>+1|-1` file, or the built-in list.
pub fn load_lexicon(path: Option<&Path>) -> Result<SentimentLexicon, Error> {
    match path {
        None => Ok(SentimentLexicon::builtin()),
        Some(p) => {
            let text = read(p, "sentiment lexicon")?;
            SentimentLexicon::parse(&text).map_err(|source| Error::Lexicon { path: p.to_path_buf(), source })
        }
    }
}

/// One word per line; without a path the bundled list is used.
pub fn load_wordlist(path: Option<&Path>) -> Result<Wordlist, Error> {
    match path {
        None => Ok(bundled_wordlist()),
        Some(p) => Ok(Wordlist::parse(&read(p, "wordlist")?)),
    }
}

pub fn bundled_wordlist() -> Wordlist {
    Wordlist::parse(BUNDLED_WORDLIST)
}
