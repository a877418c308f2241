use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use indexmap::IndexMap;
use unicode_normalization::UnicodeNormalization;

use crate::{Error, Result};

/// A word and its ordered etymological roots. Root multiplicity is kept
/// here even though the graph collapses repeats into one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word: String,
    pub roots: Vec<String>,
}

impl LexiconEntry {
    /// NFC-normalizes the word and roots and checks that neither the word
    /// nor any root is empty and that there is at least one root.
    pub fn new<I, S>(word: &str, roots: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let word: String = word.trim().nfc().collect();
        if word.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        let roots: Vec<String> = roots
            .into_iter()
            .map(|r| r.as_ref().nfc().collect())
            .collect();
        if roots.is_empty() {
            return Err(Error::InvalidArgument(format!("word {word} has no roots")));
        }
        if roots.iter().any(String::is_empty) {
            return Err(Error::InvalidArgument(format!(
                "word {word} has an empty root"
            )));
        }
        Ok(Self { word, roots })
    }
}

/// How the roots field of a lexicon line is split.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootSplit {
    /// `root1 root2 ... rootN`, separated by spaces.
    #[default]
    Whitespace,
    /// Every non-space character is one root (convenient for Hanzi/Hanja).
    Characters,
}

/// Lexicon file layout: `word<TAB>roots`, one record per line, `#` starts
/// a comment line, blank lines are ignored.
#[derive(Clone, Debug, Default)]
pub struct LexiconFormat {
    pub split: RootSplit,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub entries: Vec<LexiconEntry>,
    /// Number of lines whose word had already been seen and was merged.
    pub merged: usize,
}

pub fn parse_lexicon<R: BufRead>(mut reader: R, format: &LexiconFormat) -> Result<Lexicon> {
    let mut merged_entries: IndexMap<String, Vec<String>> = IndexMap::new();
    let mut merged = 0;
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|_| Error::InvalidUtf8 { line: line_no })?;
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, roots) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "missing tab between word and roots"))?;
        let roots: Vec<&str> = match format.split {
            RootSplit::Whitespace => roots.split_whitespace().collect(),
            RootSplit::Characters => roots
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .map(|(i, c)| &roots[i..i + c.len_utf8()])
                .collect(),
        };
        if roots.is_empty() {
            return Err(Error::parse(line_no, "empty roots field"));
        }
        let entry = LexiconEntry::new(word, roots).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::parse(line_no, msg),
            other => other,
        })?;
        match merged_entries.get_mut(&entry.word) {
            Some(existing) => {
                merged += 1;
                for root in entry.roots {
                    if !existing.contains(&root) {
                        existing.push(root);
                    }
                }
            }
            None => {
                merged_entries.insert(entry.word, entry.roots);
            }
        }
    }
    let entries = merged_entries
        .into_iter()
        .map(|(word, roots)| LexiconEntry { word, roots })
        .collect();
    Ok(Lexicon { entries, merged })
}

pub fn read_lexicon_file(path: impl AsRef<Path>, format: &LexiconFormat) -> Result<Lexicon> {
    let file = File::open(path)?;
    parse_lexicon(BufReader::new(file), format)
}
