//! Lexicon ingestion and the bipartite etymological graph.

mod biadjacency;
mod lexicon;
mod stats;

pub use biadjacency::{biadjacency, Biadjacency};
pub use lexicon::{
    parse_lexicon, read_lexicon_file, Lexicon, LexiconEntry, LexiconFormat, RootSplit,
};
pub use stats::{graph_stats, GraphStats};

use indexmap::IndexSet;
use sha2::{Digest, Sha256};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootId(pub usize);

/// An edge always joins one root to one word, so the graph cannot hold a
/// word–word or root–root edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub root: RootId,
    pub word: WordId,
}

/// Bipartite graph of words and their etymological roots.
///
/// Nodes are kept in order of first appearance. Edges are binary: a root
/// repeated inside one word contributes a single edge.
#[derive(Clone, Debug, Default)]
pub struct EtymologicalGraph {
    words: IndexSet<String>,
    roots: IndexSet<String>,
    // roots of each word, in first-seen order, deduplicated
    word_roots: Vec<Vec<RootId>>,
    root_degrees: Vec<usize>,
    edges: Vec<Edge>,
}

impl EtymologicalGraph {
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl ExactSizeIterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn roots(&self) -> impl ExactSizeIterator<Item = &str> {
        self.roots.iter().map(String::as_str)
    }

    pub fn word(&self, id: WordId) -> &str {
        &self.words[id.0]
    }

    pub fn root(&self, id: RootId) -> &str {
        &self.roots[id.0]
    }

    pub fn word_id(&self, word: &str) -> Option<WordId> {
        self.words.get_index_of(word).map(WordId)
    }

    pub fn root_id(&self, root: &str) -> Option<RootId> {
        self.roots.get_index_of(root).map(RootId)
    }

    /// Edges in insertion order (outer loop over words, inner over roots).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn roots_of(&self, word: WordId) -> &[RootId] {
        &self.word_roots[word.0]
    }

    pub fn word_degree(&self, word: WordId) -> usize {
        self.word_roots[word.0].len()
    }

    pub fn root_degree(&self, root: RootId) -> usize {
        self.root_degrees[root.0]
    }

    fn add_word(&mut self, word: &str) -> WordId {
        if let Some(id) = self.words.get_index_of(word) {
            return WordId(id);
        }
        let (id, _) = self.words.insert_full(word.to_owned());
        self.word_roots.push(Vec::new());
        WordId(id)
    }

    fn add_root(&mut self, root: &str) -> RootId {
        if let Some(id) = self.roots.get_index_of(root) {
            return RootId(id);
        }
        let (id, _) = self.roots.insert_full(root.to_owned());
        self.root_degrees.push(0);
        RootId(id)
    }

    fn add_edge(&mut self, root: RootId, word: WordId) {
        let roots = &mut self.word_roots[word.0];
        if roots.contains(&root) {
            return;
        }
        roots.push(root);
        self.root_degrees[root.0] += 1;
        self.edges.push(Edge { root, word });
    }

    /// SHA-256 over the node lists and edge list, hex encoded. Identifies
    /// the graph an embedding set was derived from.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for w in &self.words {
            hasher.update(w.as_bytes());
            hasher.update([0u8]);
        }
        hasher.update([1u8]);
        for r in &self.roots {
            hasher.update(r.as_bytes());
            hasher.update([0u8]);
        }
        hasher.update([1u8]);
        for e in &self.edges {
            hasher.update((e.root.0 as u64).to_le_bytes());
            hasher.update((e.word.0 as u64).to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Builds the etymological graph: for every entry add the word node, then
/// for every root add the root node and the (root, word) edge.
pub fn build_graph(entries: &[LexiconEntry]) -> Result<EtymologicalGraph> {
    let mut graph = EtymologicalGraph::default();
    for entry in entries {
        if entry.word.trim().is_empty() {
            return Err(Error::InvalidArgument(
                "lexicon entry with empty word".into(),
            ));
        }
        if entry.roots.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "word {} has no roots",
                entry.word
            )));
        }
        if entry.roots.iter().any(String::is_empty) {
            return Err(Error::InvalidArgument(format!(
                "word {} has an empty root",
                entry.word
            )));
        }
        let word = graph.add_word(&entry.word);
        for root in &entry.roots {
            let root = graph.add_root(root);
            graph.add_edge(root, word);
        }
    }
    Ok(graph)
}
