use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use indexmap::IndexMap;
use rand::Rng;
use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::embeddings::EmbeddingSet;
use crate::graph::EtymologicalGraph;
use crate::seed::{rng_for, LABEL_RANDOM_PAIRS};
use crate::{Error, Result};

/// Anything that can answer "is this word known?".
pub trait Vocabulary {
    fn contains_word(&self, word: &str) -> bool;
}

impl Vocabulary for EmbeddingSet {
    fn contains_word(&self, word: &str) -> bool {
        self.contains(word)
    }
}

impl Vocabulary for EtymologicalGraph {
    fn contains_word(&self, word: &str) -> bool {
        self.word_id(word).is_some()
    }
}

impl Vocabulary for HashSet<String> {
    fn contains_word(&self, word: &str) -> bool {
        self.contains(word)
    }
}

impl<V> Vocabulary for IndexMap<String, V> {
    fn contains_word(&self, word: &str) -> bool {
        self.contains_key(word)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairStats {
    /// pair lines read
    pub raw: usize,
    pub self_pairs: usize,
    /// repeats of an unordered pair already seen
    pub duplicates: usize,
    /// pairs with at least one word outside the vocabulary
    pub dropped_oov: usize,
    pub kept: usize,
}

/// Ground-truth synonym pairs, deduplicated as unordered pairs, no `(w, w)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SynonymPairs {
    pub pairs: Vec<(String, String)>,
    pub source: String,
    pub stats: PairStats,
}

impl SynonymPairs {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Builds a pair set directly, applying the same self-pair and
    /// duplicate rules as the file loader.
    pub fn from_pairs<I, S>(pairs: I, source: &str) -> Self
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut out = SynonymPairs {
            source: source.to_owned(),
            ..Default::default()
        };
        let mut seen = HashSet::new();
        for (a, b) in pairs {
            out.push_checked(a.into(), b.into(), &mut seen, |_| true);
        }
        out
    }

    fn push_checked(
        &mut self,
        a: String,
        b: String,
        seen: &mut HashSet<(String, String)>,
        known: impl Fn(&str) -> bool,
    ) {
        self.stats.raw += 1;
        if a == b {
            self.stats.self_pairs += 1;
            return;
        }
        let key = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if !seen.insert(key) {
            self.stats.duplicates += 1;
            return;
        }
        if !known(&a) || !known(&b) {
            self.stats.dropped_oov += 1;
            return;
        }
        self.stats.kept += 1;
        self.pairs.push((a, b));
    }
}

/// Reads `word1<TAB>word2` lines. Blank lines and `#` comments are skipped.
pub fn load_synonym_pairs<R: BufRead, V: Vocabulary + ?Sized>(
    reader: R,
    vocabulary: &V,
) -> Result<SynonymPairs> {
    let mut out = SynonymPairs::default();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| {
            if e.kind() == std::io::ErrorKind::InvalidData {
                Error::InvalidUtf8 { line: line_no }
            } else {
                Error::Io(e)
            }
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected word1<TAB>word2"))?;
        let a: String = a.trim().nfc().collect();
        let b: String = b.trim().nfc().collect();
        if a.is_empty() || b.is_empty() || b.contains('\t') {
            return Err(Error::parse(
                line_no,
                "expected exactly two non-empty words",
            ));
        }
        out.push_checked(a, b, &mut seen, |w| vocabulary.contains_word(w));
    }
    Ok(out)
}

pub fn read_synonym_file<V: Vocabulary + ?Sized>(
    path: impl AsRef<Path>,
    vocabulary: &V,
) -> Result<SynonymPairs> {
    let path = path.as_ref();
    let mut pairs = load_synonym_pairs(BufReader::new(File::open(path)?), vocabulary)?;
    pairs.source = path.display().to_string();
    Ok(pairs)
}

/// `n` unordered pairs of distinct words, uniform with replacement, never a
/// pair listed in `exclusions`. Each pair comes back in vocabulary order.
pub fn sample_random_pairs(
    vocabulary: &[String],
    n: usize,
    seed: u64,
    exclusions: &SynonymPairs,
) -> Result<Vec<(String, String)>> {
    let index: HashMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let excluded = exclusion_set(&index, exclusions);
    Ok(sample_index_pairs(vocabulary.len(), n, seed, &excluded)?
        .into_iter()
        .map(|(i, j)| (vocabulary[i].clone(), vocabulary[j].clone()))
        .collect())
}

pub(crate) fn exclusion_set(
    index: &HashMap<&str, usize>,
    exclusions: &SynonymPairs,
) -> HashSet<(usize, usize)> {
    exclusions
        .pairs
        .iter()
        .filter_map(|(a, b)| {
            let (i, j) = (*index.get(a.as_str())?, *index.get(b.as_str())?);
            Some((i.min(j), i.max(j)))
        })
        .collect()
}

pub(crate) fn sample_index_pairs(
    len: usize,
    n: usize,
    seed: u64,
    excluded: &HashSet<(usize, usize)>,
) -> Result<Vec<(usize, usize)>> {
    if len < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 words to sample pairs, vocabulary has {len}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of random pairs must be at least 1".into(),
        ));
    }
    let total = len as u128 * (len as u128 - 1) / 2;
    if excluded.len() as u128 >= total {
        return Err(Error::InvalidArgument("every word pair is excluded".into()));
    }
    let mut rng = rng_for(seed, LABEL_RANDOM_PAIRS);
    let mut pairs = Vec::with_capacity(n);
    while pairs.len() < n {
        let i = rng.random_range(0..len);
        let mut j = rng.random_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let pair = (i.min(j), i.max(j));
        if excluded.contains(&pair) {
            continue;
        }
        pairs.push(pair);
    }
    Ok(pairs)
}
