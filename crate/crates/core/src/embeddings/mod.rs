//! Word and root vectors taken from the truncated factorization, and the
//! similarity measures used to compare them.

mod io;

pub use io::{
    export_embeddings, import_embeddings, load_embeddings, metadata_path, read_metadata,
    save_embeddings, write_metadata,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::linalg::SvdResult;
use crate::{Error, Result};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMode {
    /// inner product of the raw vectors
    #[default]
    Dot,
    /// inner product of the normalized vectors
    Cosine,
}

impl SimilarityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityMode::Dot => "dot",
            SimilarityMode::Cosine => "cosine",
        }
    }

    pub fn other(self) -> Self {
        match self {
            SimilarityMode::Dot => SimilarityMode::Cosine,
            SimilarityMode::Cosine => SimilarityMode::Dot,
        }
    }
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(SimilarityMode::Dot),
            "cosine" => Ok(SimilarityMode::Cosine),
            other => Err(Error::InvalidArgument(format!(
                "unknown similarity mode {other:?} (expected dot or cosine)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityScore {
    pub value: f64,
    pub mode: SimilarityMode,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmbeddingKind {
    /// columns of `V*`
    #[default]
    Words,
    /// rows of `U`
    Roots,
}

/// Where an embedding set came from. Written next to the vectors as a flat
/// `key=value` sidecar.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Provenance {
    pub kind: EmbeddingKind,
    pub k: usize,
    pub source_graph_hash: Option<String>,
    pub seed: Option<u64>,
    pub default_mode: SimilarityMode,
    /// exponent α of the experimental `Σ^α` column scaling; 0 means none
    pub sigma_weight: f64,
    /// anything else worth recording, such as the run configuration
    pub extra: BTreeMap<String, String>,
}

/// Vocabulary plus one `dimension`-long vector per word, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSet {
    dimension: usize,
    vocabulary: Vec<String>,
    index: HashMap<String, usize>,
    vectors: Vec<f64>,
    pub provenance: Provenance,
}

impl EmbeddingSet {
    pub fn new(vocabulary: Vec<String>, dimension: usize, vectors: Vec<f64>) -> Result<Self> {
        if vectors.len() != vocabulary.len() * dimension {
            return Err(Error::DimensionMismatch {
                context: "embedding vectors",
                expected: vocabulary.len() * dimension,
                found: vectors.len(),
            });
        }
        let mut index = HashMap::with_capacity(vocabulary.len());
        for (i, w) in vocabulary.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate word {w} in vocabulary"
                )));
            }
        }
        Ok(Self {
            dimension,
            vocabulary,
            index,
            vectors,
            provenance: Provenance {
                k: dimension,
                ..Provenance::default()
            },
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn vector(&self, word: &str) -> Result<&[f64]> {
        self.index_of(word)
            .map(|i| self.vector_at(i))
            .ok_or_else(|| Error::UnknownWord(word.to_owned()))
    }

    pub fn vector_at(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Similarity of the words at vocabulary positions `i` and `j`.
    pub fn similarity_at(&self, i: usize, j: usize, mode: SimilarityMode) -> Result<f64> {
        let (a, b) = (self.vector_at(i), self.vector_at(j));
        let d = dot(a, b);
        match mode {
            SimilarityMode::Dot => Ok(d),
            SimilarityMode::Cosine => {
                let (na, nb) = (dot(a, a).sqrt(), dot(b, b).sqrt());
                if na == 0.0 {
                    return Err(Error::ZeroNorm(self.vocabulary[i].clone()));
                }
                if nb == 0.0 {
                    return Err(Error::ZeroNorm(self.vocabulary[j].clone()));
                }
                Ok((d / (na * nb)).clamp(-1.0, 1.0))
            }
        }
    }

    /// Every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.vectors.iter_mut().for_each(|x| *x *= factor);
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn similarity(
    e: &EmbeddingSet,
    w1: &str,
    w2: &str,
    mode: SimilarityMode,
) -> Result<SimilarityScore> {
    let i = e
        .index_of(w1)
        .ok_or_else(|| Error::UnknownWord(w1.to_owned()))?;
    let j = e
        .index_of(w2)
        .ok_or_else(|| Error::UnknownWord(w2.to_owned()))?;
    Ok(SimilarityScore {
        value: e.similarity_at(i, j, mode)?,
        mode,
    })
}

/// Word vectors: the vector of `w` is column `word_index[w]` of `V*`.
pub fn derive_embeddings(
    r: &SvdResult,
    word_index: &IndexMap<String, usize>,
) -> Result<EmbeddingSet> {
    derive_embeddings_with_sigma_weight(r, word_index, 0.0)
}

/// Experimental: word vectors scaled by `Σ^alpha` (component `c` multiplied
/// by `sigma[c]^alpha`). `alpha = 0` is [`derive_embeddings`].
pub fn derive_embeddings_with_sigma_weight(
    r: &SvdResult,
    word_index: &IndexMap<String, usize>,
    alpha: f64,
) -> Result<EmbeddingSet> {
    let k = r.vt.rows();
    let vocabulary = ordered_vocabulary(word_index, r.vt.cols(), "word index")?;
    let weights = sigma_weights(&r.sigma, alpha);
    let mut vectors = Vec::with_capacity(vocabulary.len() * k);
    for j in 0..vocabulary.len() {
        vectors.extend((0..k).map(|c| r.vt[(c, j)] * weights[c]));
    }
    let mut set = EmbeddingSet::new(vocabulary, k, vectors)?;
    set.provenance = Provenance {
        kind: EmbeddingKind::Words,
        k,
        seed: Some(r.seed),
        sigma_weight: alpha,
        ..Provenance::default()
    };
    Ok(set)
}

/// Root vectors: the vector of root `t` is row `root_index[t]` of `U`.
pub fn derive_root_embeddings(
    r: &SvdResult,
    root_index: &IndexMap<String, usize>,
) -> Result<EmbeddingSet> {
    let k = r.u.cols();
    let vocabulary = ordered_vocabulary(root_index, r.u.rows(), "root index")?;
    let mut vectors = Vec::with_capacity(vocabulary.len() * k);
    for i in 0..vocabulary.len() {
        vectors.extend_from_slice(r.u.row(i));
    }
    let mut set = EmbeddingSet::new(vocabulary, k, vectors)?;
    set.provenance = Provenance {
        kind: EmbeddingKind::Roots,
        k,
        seed: Some(r.seed),
        ..Provenance::default()
    };
    Ok(set)
}

fn sigma_weights(sigma: &[f64], alpha: f64) -> Vec<f64> {
    if alpha == 0.0 {
        vec![1.0; sigma.len()]
    } else {
        sigma.iter().map(|s| s.powf(alpha)).collect()
    }
}

/// Inverts a label → position map that must cover `0..expected` exactly.
fn ordered_vocabulary(
    index: &IndexMap<String, usize>,
    expected: usize,
    context: &'static str,
) -> Result<Vec<String>> {
    if index.len() != expected {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            found: index.len(),
        });
    }
    let mut slots: Vec<Option<String>> = vec![None; expected];
    for (label, &pos) in index {
        match slots.get_mut(pos) {
            Some(slot @ None) => *slot = Some(label.clone()),
            Some(Some(_)) => {
                return Err(Error::InvalidArgument(format!(
                    "{context}: position {pos} used twice"
                )))
            }
            None => {
                return Err(Error::InvalidArgument(format!(
                    "{context}: position {pos} out of range for {expected} columns"
                )))
            }
        }
    }
    Ok(slots
        .into_iter()
        .map(|s| s.expect("bijection checked"))
        .collect())
}
