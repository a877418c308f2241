use std::collections::HashMap;

use serde::Serialize;

use super::distribution::{quantile_sorted, Distribution, Summary};
use super::pairs::{exclusion_set, sample_index_pairs, PairStats, SynonymPairs};
use crate::embeddings::{EmbeddingSet, SimilarityMode};
use crate::{Error, Result};

/// Smallest random-pair sample accepted for threshold estimation.
pub const MIN_THRESHOLD_SAMPLE: usize = 100;

/// Similarity of every pair, in pair order.
pub fn similarity_distribution<S: AsRef<str>>(
    e: &EmbeddingSet,
    pairs: &[(S, S)],
    mode: SimilarityMode,
) -> Result<Distribution> {
    let values = pairs
        .iter()
        .map(|(a, b)| {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = e
                .index_of(a)
                .ok_or_else(|| Error::UnknownWord(a.to_owned()))?;
            let j = e
                .index_of(b)
                .ok_or_else(|| Error::UnknownWord(b.to_owned()))?;
            e.similarity_at(i, j, mode)
        })
        .collect::<Result<Vec<f64>>>()?;
    Distribution::new(values)
}

/// The `coverage`-quantile of `|value|` over the random-pair sample. A pair
/// is detected when `|sim| > threshold`.
pub fn detection_threshold(random: &Distribution, coverage: f64) -> Result<f64> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "coverage {coverage} outside (0, 1)"
        )));
    }
    if random.len() < MIN_THRESHOLD_SAMPLE {
        return Err(Error::InvalidArgument(format!(
            "random sample has {} values, at least {MIN_THRESHOLD_SAMPLE} needed",
            random.len()
        )));
    }
    let mut abs: Vec<f64> = random.values().iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&abs, coverage))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub mode: SimilarityMode,
    pub k: usize,
    pub coverage: f64,
    pub n_random: usize,
    pub seed: u64,
    pub synonym_pairs: usize,
    pub synonym_stats: PairStats,
    pub random: Summary,
    pub synonyms: Summary,
    /// `coverage`-quantile of |similarity| over random pairs
    pub threshold_99: f64,
    pub synonym_separation_99: f64,
    pub random_outside_99: f64,
    /// standard deviation of the random-pair similarities
    pub sigma_threshold: f64,
    pub synonym_separation_sigma: f64,
    pub random_outside_sigma: f64,
}

/// A report together with the two samples behind it.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub report: EvalReport,
    pub random: Distribution,
    pub synonyms: Distribution,
}

pub fn evaluate(
    e: &EmbeddingSet,
    synonyms: &SynonymPairs,
    n_random: usize,
    seed: u64,
    mode: SimilarityMode,
    coverage: f64,
) -> Result<EvalReport> {
    evaluate_detailed(e, synonyms, n_random, seed, mode, coverage).map(|ev| ev.report)
}

pub fn evaluate_detailed(
    e: &EmbeddingSet,
    synonyms: &SynonymPairs,
    n_random: usize,
    seed: u64,
    mode: SimilarityMode,
    coverage: f64,
) -> Result<Evaluation> {
    if synonyms.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "coverage {coverage} outside (0, 1)"
        )));
    }
    let synonym_dist = similarity_distribution(e, &synonyms.pairs, mode)?;

    let index: HashMap<&str, usize> = e
        .vocabulary()
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let excluded = exclusion_set(&index, synonyms);
    let random_pairs = sample_index_pairs(e.len(), n_random, seed, &excluded)?;
    let random_values = random_pairs
        .iter()
        .map(|&(i, j)| e.similarity_at(i, j, mode))
        .collect::<Result<Vec<f64>>>()?;
    let random_dist = Distribution::new(random_values)?;

    let threshold = detection_threshold(&random_dist, coverage)?;
    let sigma = random_dist.summary().std;
    let report = EvalReport {
        mode,
        k: e.dimension(),
        coverage,
        n_random,
        seed,
        synonym_pairs: synonyms.len(),
        synonym_stats: synonyms.stats,
        random: random_dist.summary().clone(),
        synonyms: synonym_dist.summary().clone(),
        threshold_99: threshold,
        synonym_separation_99: synonym_dist.fraction_beyond(threshold),
        random_outside_99: random_dist.fraction_beyond(threshold),
        sigma_threshold: sigma,
        synonym_separation_sigma: synonym_dist.fraction_beyond(sigma),
        random_outside_sigma: random_dist.fraction_beyond(sigma),
    };
    Ok(Evaluation {
        report,
        random: random_dist,
        synonyms: synonym_dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sample_gives_zero_threshold() {
        let d = Distribution::new(vec![0.0; 200]).unwrap();
        assert_eq!(detection_threshold(&d, 0.99).unwrap(), 0.0);
    }

    #[test]
    fn threshold_on_symmetric_integers() {
        // ±1..±100 scaled by 0.01: |v| = 0.01..1.00, each twice
        let values: Vec<f64> = (1..=100)
            .flat_map(|i| [i as f64 * 0.01, -(i as f64) * 0.01])
            .collect();
        let d = Distribution::new(values).unwrap();
        // sorted |v|: index 2m and 2m+1 hold (m+1)/100; h = 199 · 0.99 = 197.01
        let expected = 0.99 + 0.01 * (1.0 - 0.99);
        let got = detection_threshold(&d, 0.99).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn threshold_argument_errors() {
        let d = Distribution::new(vec![1.0; 99]).unwrap();
        assert!(detection_threshold(&d, 0.99).is_err());
        let d = Distribution::new(vec![1.0; 100]).unwrap();
        assert!(detection_threshold(&d, 1.0).is_err());
        assert!(detection_threshold(&d, 0.0).is_err());
    }

    #[test]
    fn empty_pair_list() {
        let e = EmbeddingSet::new(vec!["a".into()], 1, vec![1.0]).unwrap();
        let pairs: Vec<(String, String)> = vec![];
        assert!(matches!(
            similarity_distribution(&e, &pairs, SimilarityMode::Dot),
            Err(Error::EmptySample)
        ));
        assert!(matches!(
            evaluate(
                &e,
                &SynonymPairs::default(),
                100,
                1,
                SimilarityMode::Dot,
                0.99
            ),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn perfect_separation() {
        // orthogonal basis vectors: every distinct pair has dot 0; synonym
        // pairs share a vector and score 1
        let n = 40;
        let mut words = Vec::new();
        let mut vectors = Vec::new();
        for i in 0..n {
            words.push(format!("w{i}"));
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            vectors.extend(v);
        }
        for i in 0..5 {
            words.push(format!("s{i}"));
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            vectors.extend(v);
        }
        let e = EmbeddingSet::new(words, n, vectors).unwrap();
        let syn = SynonymPairs::from_pairs((0..5).map(|i| (format!("w{i}"), format!("s{i}"))), "t");
        let r = evaluate(&e, &syn, 5000, 3, SimilarityMode::Dot, 0.99).unwrap();
        assert_eq!(r.synonym_separation_99, 1.0);
        assert_eq!(r.threshold_99, 0.0);
        assert_eq!(r.random_outside_99, 0.0);
    }
}
