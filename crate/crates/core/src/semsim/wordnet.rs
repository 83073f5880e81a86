//! Reader for the WordNet database files (`data.*`, `index.*`, `*.exc`) and
//! the hypernym-graph measures built on it.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    /// Suffix of the database file names (`data.noun`, `adj.exc`, ...).
    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
        }
    }

    /// Part-of-speech letter used inside the files; satellites (`s`) are adjectives.
    pub fn from_letter(c: &str) -> Option<Pos> {
        match c {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "s" => Some(Pos::Adj),
            "r" => Some(Pos::Adv),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_suffix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synset {
    pub id: SynsetId,
    /// Lowercase, underscores for spaces.
    pub lemmas: Vec<String>,
    pub gloss: String,
    /// Targets of `@` and `@i` pointers.
    pub hypernyms: Vec<SynsetId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordNetError {
    #[error("{file} line {line}: {reason}")]
    Malformed { file: String, line: usize, reason: String },
    #[error("{file} line {line}: pointer to missing synset {target:08}")]
    DanglingPointer { file: String, line: usize, target: u64 },
}

/// File contents handed to the parser, keyed by part of speech.
#[derive(Debug, Clone, Default)]
pub struct WordNetSources<'a> {
    pub data: Vec<(Pos, &'a str)>,
    pub index: Vec<(Pos, &'a str)>,
    pub exceptions: Vec<(Pos, &'a str)>,
}

/// Which graph measure [`WordNetGraph::similarity`] computes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordMeasure {
    /// `1 / (1 + L)` with `L` the shortest hypernym path length.
    #[default]
    Path,
    WuPalmer,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WordNetGraph {
    synsets: BTreeMap<SynsetId, Synset>,
    lemma_index: BTreeMap<(String, Pos), Vec<SynsetId>>,
    exceptions: BTreeMap<(String, Pos), Vec<String>>,
}

/// Canonical lemma form: lowercase, spaces as underscores.
pub fn normalize_lemma(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}

struct Fields<'a> {
    it: core::str::SplitWhitespace<'a>,
    file: &'a str,
    line: usize,
}

impl<'a> Fields<'a> {
    fn err(&self, reason: impl Into<String>) -> WordNetError {
        WordNetError::Malformed { file: self.file.to_string(), line: self.line, reason: reason.into() }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, WordNetError> {
        self.it.next().ok_or_else(|| self.err(format!("missing {what}")))
    }

    fn number(&mut self, what: &str, radix: u32) -> Result<u64, WordNetError> {
        let s = self.next(what)?;
        u64::from_str_radix(s, radix).map_err(|_| self.err(format!("bad {what} `{s}`")))
    }
}

/// Lines with their 1-based numbers and byte offsets, license header skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    let mut offset = 0;
    text.split_inclusive('\n').enumerate().filter_map(move |(i, raw)| {
        let at = offset;
        offset += raw.len();
        let line = raw.trim_end_matches(['\n', '\r']);
        (!line.is_empty() && !line.starts_with(' ')).then_some((i + 1, at, line))
    })
}

/// Adjective lemmas may carry a syntactic marker such as `(p)`.
fn strip_marker(word: &str) -> &str {
    match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    }
}

impl WordNetGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sources(sources: &WordNetSources<'_>) -> Result<Self, WordNetError> {
        let mut g = Self::new();
        // pointer targets are checked once every synset is known
        let mut pending: Vec<(String, usize, SynsetId)> = Vec::new();
        for &(pos, text) in &sources.data {
            let file = format!("data.{pos}");
            for (line_no, at, line) in content_lines(text) {
                let (head, gloss) = line.split_once(" | ").unwrap_or((line, ""));
                let mut f = Fields { it: head.split_whitespace(), file: &file, line: line_no };
                let offset = f.number("synset offset", 10)?;
                if offset != at as u64 {
                    return Err(f.err(format!("offset {offset:08} does not match byte position {at}")));
                }
                f.next("lex_filenum")?;
                let ss_type = f.next("ss_type")?;
                if Pos::from_letter(ss_type) != Some(pos) {
                    return Err(f.err(format!("synset type `{ss_type}` in {file}")));
                }
                let w_cnt = f.number("w_cnt", 16)?;
                let mut lemmas = Vec::with_capacity(w_cnt as usize);
                for _ in 0..w_cnt {
                    lemmas.push(normalize_lemma(strip_marker(f.next("word")?)));
                    f.number("lex_id", 16)?;
                }
                let p_cnt = f.number("p_cnt", 10)?;
                let mut hypernyms = Vec::new();
                for _ in 0..p_cnt {
                    let symbol = f.next("pointer symbol")?;
                    let target = f.number("pointer offset", 10)?;
                    let letter = f.next("pointer pos")?;
                    let target_pos = Pos::from_letter(letter).ok_or_else(|| f.err(format!("bad pointer pos `{letter}`")))?;
                    f.next("source/target")?;
                    if matches!(symbol, "@" | "@i") {
                        let id = SynsetId { pos: target_pos, offset: target };
                        hypernyms.push(id);
                        pending.push((file.clone(), line_no, id));
                    }
                }
                let id = SynsetId { pos, offset };
                g.synsets.insert(id, Synset { id, lemmas, gloss: gloss.trim().to_string(), hypernyms });
            }
        }
        if let Some((file, line, target)) = pending.into_iter().find(|(_, _, id)| !g.synsets.contains_key(id)) {
            return Err(WordNetError::DanglingPointer { file, line, target: target.offset });
        }
        for &(pos, text) in &sources.index {
            let file = format!("index.{pos}");
            for (line_no, _, line) in content_lines(text) {
                let mut f = Fields { it: line.split_whitespace(), file: &file, line: line_no };
                let lemma = normalize_lemma(f.next("lemma")?);
                f.next("pos")?;
                let synset_cnt = f.number("synset_cnt", 10)?;
                let p_cnt = f.number("p_cnt", 10)?;
                for _ in 0..p_cnt {
                    f.next("pointer symbol")?;
                }
                f.number("sense_cnt", 10)?;
                f.number("tagsense_cnt", 10)?;
                let mut ids = Vec::with_capacity(synset_cnt as usize);
                for _ in 0..synset_cnt {
                    let offset = f.number("synset offset", 10)?;
                    let id = SynsetId { pos, offset };
                    if !g.synsets.contains_key(&id) {
                        return Err(WordNetError::DanglingPointer { file: file.clone(), line: line_no, target: offset });
                    }
                    ids.push(id);
                }
                g.lemma_index.insert((lemma, pos), ids);
            }
        }
        for &(pos, text) in &sources.exceptions {
            for (_, _, line) in content_lines(text) {
                let mut words = line.split_whitespace();
                if let Some(form) = words.next() {
                    let bases: Vec<String> = words.map(normalize_lemma).collect();
                    if !bases.is_empty() {
                        g.exceptions.insert((normalize_lemma(form), pos), bases);
                    }
                }
            }
        }
        Ok(g)
    }

    /// Add a synset at the next free offset, indexing its lemmas.
    pub fn add_synset(&mut self, pos: Pos, lemmas: &[&str], gloss: &str) -> SynsetId {
        let offset = self.synsets.keys().filter(|id| id.pos == pos).map(|id| id.offset + 1).max().unwrap_or(0);
        let id = SynsetId { pos, offset };
        let lemmas: Vec<String> = lemmas.iter().map(|l| normalize_lemma(l)).collect();
        for l in &lemmas {
            self.lemma_index.entry((l.clone(), pos)).or_default().push(id);
        }
        self.synsets.insert(id, Synset { id, lemmas, gloss: gloss.to_string(), hypernyms: Vec::new() });
        id
    }

    /// Link `child` to `parent`; both must exist. Returns false otherwise.
    pub fn add_hypernym(&mut self, child: SynsetId, parent: SynsetId) -> bool {
        if !self.synsets.contains_key(&parent) {
            return false;
        }
        match self.synsets.get_mut(&child) {
            Some(s) if !s.hypernyms.contains(&parent) => {
                s.hypernyms.push(parent);
                true
            }
            _ => false,
        }
    }

    pub fn add_exception(&mut self, form: &str, pos: Pos, base: &str) {
        self.exceptions.entry((normalize_lemma(form), pos)).or_default().push(normalize_lemma(base));
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn hypernym_edge_count(&self) -> usize {
        self.synsets.values().map(|s| s.hypernyms.len()).sum()
    }

    pub fn lemma_count(&self) -> usize {
        self.lemma_index.len()
    }

    pub fn exception_count(&self) -> usize {
        self.exceptions.len()
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Synsets of an exact lemma, in sense order.
    pub fn synsets_of(&self, lemma: &str, pos: Pos) -> &[SynsetId] {
        self.lemma_index.get(&(normalize_lemma(lemma), pos)).map_or(&[], Vec::as_slice)
    }

    pub fn has_lemma(&self, lemma: &str, pos: Pos) -> bool {
        !self.synsets_of(lemma, pos).is_empty()
    }

    /// Base form of `word`: exception lists first, then the detachment rules
    /// for `pos`; the first candidate present in the index wins.
    pub fn lemmatize(&self, word: &str, pos: Pos) -> Option<String> {
        let form = normalize_lemma(word);
        if form.is_empty() {
            return None;
        }
        let mut candidates = vec![form.clone()];
        if let Some(bases) = self.exceptions.get(&(form.clone(), pos)) {
            candidates.extend(bases.iter().cloned());
        } else {
            for &(suffix, ending) in detachment_rules(pos) {
                if let Some(stem) = form.strip_suffix(suffix) {
                    if !stem.is_empty() {
                        candidates.push(format!("{stem}{ending}"));
                    }
                }
            }
        }
        candidates.into_iter().find(|c| self.has_lemma(c, pos))
    }

    /// Every hypernym ancestor of `id` (itself included) with its shortest distance.
    pub fn ancestors(&self, id: SynsetId) -> BTreeMap<SynsetId, usize> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        dist.insert(id, 0);
        queue.push_back(id);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            if let Some(s) = self.synsets.get(&cur) {
                for &h in &s.hypernyms {
                    if let Entry::Vacant(slot) = dist.entry(h) {
                        slot.insert(d + 1);
                        queue.push_back(h);
                    }
                }
            }
        }
        dist
    }

    fn root_distance(&self, ancestors: &BTreeMap<SynsetId, usize>) -> usize {
        ancestors
            .iter()
            .filter(|(id, _)| self.synsets.get(id).is_none_or(|s| s.hypernyms.is_empty()))
            .map(|(_, d)| *d)
            .min()
            .unwrap_or(0)
    }

    /// Shortest hypernym path length between two synsets. Synsets without a
    /// common ancestor meet at a virtual root above all roots.
    pub fn path_length(&self, a: SynsetId, b: SynsetId) -> usize {
        let da = self.ancestors(a);
        let db = self.ancestors(b);
        da.iter()
            .filter_map(|(id, x)| db.get(id).map(|y| x + y))
            .min()
            .unwrap_or_else(|| self.root_distance(&da) + self.root_distance(&db) + 2)
    }

    /// Wu-Palmer score `2 d(c) / (dist(a, c) + dist(b, c) + 2 d(c))` over
    /// common ancestors `c`, where `d(c)` counts nodes from a root down to
    /// `c`. No common ancestor gives 0.
    pub fn wu_palmer(&self, a: SynsetId, b: SynsetId) -> f64 {
        let da = self.ancestors(a);
        let db = self.ancestors(b);
        let mut best: f64 = 0.0;
        for (id, x) in &da {
            if let Some(y) = db.get(id) {
                let depth = (self.root_distance(&self.ancestors(*id)) + 1) as f64;
                best = best.max(2.0 * depth / ((x + y) as f64 + 2.0 * depth));
            }
        }
        best
    }

    /// Word similarity in `[0, 1]`: 1 for identical strings, 0 when either
    /// lemma is unknown, otherwise the best score over synset pairs.
    pub fn similarity(&self, a: &str, b: &str, pos: Pos, measure: WordMeasure) -> f64 {
        let (a, b) = (normalize_lemma(a), normalize_lemma(b));
        if a == b {
            return 1.0;
        }
        let (sa, sb) = (self.synsets_of(&a, pos), self.synsets_of(&b, pos));
        let mut best: f64 = 0.0;
        for &x in sa {
            for &y in sb {
                let s = match measure {
                    WordMeasure::Path => 1.0 / (1.0 + self.path_length(x, y) as f64),
                    WordMeasure::WuPalmer => self.wu_palmer(x, y),
                };
                best = best.max(s);
            }
        }
        best
    }

    pub fn word_similarity(&self, a: &str, b: &str, pos: Pos) -> f64 {
        self.similarity(a, b, pos, WordMeasure::Path)
    }
}

fn detachment_rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => &[("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y")],
        Pos::Verb => &[("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", "")],
        Pos::Adj => &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
        Pos::Adv => &[],
    }
}
