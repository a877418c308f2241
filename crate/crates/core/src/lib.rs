//! Word embeddings learned from etymological composition.
//!
//! Words are linked to their etymological roots in a bipartite graph. The
//! `#roots × #words` biadjacency matrix of that graph is factorized with a
//! randomized truncated SVD, and the columns of `V*` become word vectors.
//! The [`eval`] module measures how well those vectors separate synonym
//! pairs from random pairs of words.
//!
//! ```
//! use etymograph::graph::{build_graph, parse_lexicon, LexiconFormat};
//!
//! let text = "木\t木\n林\t木 木\n森\t木 木 木\n";
//! let lexicon = parse_lexicon(text.as_bytes(), &LexiconFormat::default()).unwrap();
//! let graph = build_graph(&lexicon.entries).unwrap();
//! assert_eq!(graph.word_count(), 3);
//! assert_eq!(graph.root_count(), 1);
//! ```

pub mod cli;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod graph;
pub mod linalg;
pub mod seed;

pub use error::{Error, Result};
