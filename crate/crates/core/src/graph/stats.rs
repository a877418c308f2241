use std::collections::BTreeMap;

use serde::Serialize;

use super::{EtymologicalGraph, RootId, WordId};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub word_count: usize,
    pub root_count: usize,
    pub edge_count: usize,
    /// number of words per root-degree (distinct roots in the word)
    pub word_length_histogram: BTreeMap<usize, usize>,
    pub mean_word_degree: f64,
    pub max_word_degree: usize,
    pub mean_root_degree: f64,
    pub max_root_degree: usize,
}

pub fn graph_stats(graph: &EtymologicalGraph) -> GraphStats {
    let mut histogram = BTreeMap::new();
    let mut max_word_degree = 0;
    for w in 0..graph.word_count() {
        let d = graph.word_degree(WordId(w));
        *histogram.entry(d).or_insert(0) += 1;
        max_word_degree = max_word_degree.max(d);
    }
    let max_root_degree = (0..graph.root_count())
        .map(|r| graph.root_degree(RootId(r)))
        .max()
        .unwrap_or(0);
    let mean = |total: usize, n: usize| if n == 0 { 0.0 } else { total as f64 / n as f64 };
    GraphStats {
        word_count: graph.word_count(),
        root_count: graph.root_count(),
        edge_count: graph.edge_count(),
        word_length_histogram: histogram,
        mean_word_degree: mean(graph.edge_count(), graph.word_count()),
        max_word_degree,
        mean_root_degree: mean(graph.edge_count(), graph.root_count()),
        max_root_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, LexiconEntry};

    #[test]
    fn empty_graph_is_all_zero() {
        let s = graph_stats(&EtymologicalGraph::default());
        assert_eq!((s.word_count, s.root_count, s.edge_count), (0, 0, 0));
        assert_eq!((s.max_word_degree, s.max_root_degree), (0, 0));
        assert_eq!(s.mean_word_degree, 0.0);
        assert!(s.word_length_histogram.is_empty());
    }

    #[test]
    fn shared_root() {
        let entries = [
            LexiconEntry::new("林", ["木"]).unwrap(),
            LexiconEntry::new("森", ["木"]).unwrap(),
        ];
        let s = graph_stats(&build_graph(&entries).unwrap());
        assert_eq!((s.word_count, s.root_count, s.edge_count), (2, 1, 2));
        assert_eq!(s.max_root_degree, 2);
        assert_eq!(s.word_length_histogram.get(&1), Some(&2));
    }
}
