use indexmap::IndexMap;

use super::EtymologicalGraph;
use crate::linalg::SparseMatrix;
use crate::{Error, Result};

/// The `#roots × #words` 0/1 matrix of the graph with its row and column
/// labels.
#[derive(Clone, Debug)]
pub struct Biadjacency {
    pub matrix: SparseMatrix,
    pub root_index: IndexMap<String, usize>,
    pub word_index: IndexMap<String, usize>,
}

pub fn biadjacency(graph: &EtymologicalGraph) -> Result<Biadjacency> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); graph.root_count()];
    for edge in graph.edges() {
        rows[edge.root.0].push(edge.word.0);
    }
    let mut row_offsets = Vec::with_capacity(rows.len() + 1);
    let mut col_indices = Vec::with_capacity(graph.edge_count());
    row_offsets.push(0);
    for mut row in rows {
        row.sort_unstable();
        col_indices.extend(row);
        row_offsets.push(col_indices.len());
    }
    let values = vec![1.0; col_indices.len()];
    let matrix = SparseMatrix::new(
        graph.root_count(),
        graph.word_count(),
        row_offsets,
        col_indices,
        values,
    )?;
    let root_index = graph
        .roots()
        .enumerate()
        .map(|(i, r)| (r.to_owned(), i))
        .collect();
    let word_index = graph
        .words()
        .enumerate()
        .map(|(i, w)| (w.to_owned(), i))
        .collect();
    Ok(Biadjacency {
        matrix,
        root_index,
        word_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, LexiconEntry};

    #[test]
    fn single_edge() {
        let g = build_graph(&[LexiconEntry::new("林", ["木"]).unwrap()]).unwrap();
        let b = biadjacency(&g).unwrap();
        assert_eq!(b.matrix.to_dense_rows(), vec![vec![1.0]]);
    }

    #[test]
    fn row_and_column_sums() {
        let g = build_graph(&[
            LexiconEntry::new("AB", ["A", "B"]).unwrap(),
            LexiconEntry::new("AC", ["A", "C"]).unwrap(),
        ])
        .unwrap();
        let b = biadjacency(&g).unwrap();
        assert_eq!((b.matrix.n_rows(), b.matrix.n_cols()), (3, 2));
        let dense = b.matrix.to_dense_rows();
        let row_sums: Vec<f64> = dense.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<f64> = (0..2).map(|j| dense.iter().map(|r| r[j]).sum()).collect();
        assert_eq!(row_sums, [2.0, 1.0, 1.0]);
        assert_eq!(col_sums, [2.0, 2.0]);
        assert_eq!(b.root_index["A"], 0);
        assert_eq!(b.word_index["AC"], 1);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(
            biadjacency(&EtymologicalGraph::default()),
            Err(Error::EmptyGraph)
        ));
    }
}
