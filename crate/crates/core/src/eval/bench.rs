use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use super::pairs::SynonymPairs;
use super::report::{evaluate, EvalReport};
use crate::embeddings::{derive_embeddings_with_sigma_weight, SimilarityMode};
use crate::graph::{biadjacency, EtymologicalGraph};
use crate::linalg::{reconstruction_error, truncated_svd, SparseMatrix, SvdOptions};
use crate::{Error, Result};

/// Everything `evaluate` needs besides the embeddings, plus the
/// factorization settings for sweeps.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub synonyms: SynonymPairs,
    pub n_random: usize,
    pub seed: u64,
    pub mode: SimilarityMode,
    pub coverage: f64,
    pub svd: SvdOptions,
    pub sigma_weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub k: usize,
    /// wall-clock seconds of the factorization
    pub seconds: f64,
    pub report: EvalReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

/// Factorizes afresh for every `k` (same seed each time), derives the word
/// vectors and evaluates them.
pub fn dimension_sweep(
    graph: &EtymologicalGraph,
    dims: &[usize],
    config: &EvalConfig,
) -> Result<SweepReport> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions to sweep".into()));
    }
    let b = biadjacency(graph)?;
    let mut rows = Vec::with_capacity(dims.len());
    for &k in dims {
        let start = Instant::now();
        let svd = truncated_svd(&b.matrix, k, config.seed, &config.svd)?;
        let seconds = start.elapsed().as_secs_f64();
        let embeddings =
            derive_embeddings_with_sigma_weight(&svd, &b.word_index, config.sigma_weight)?;
        let report = evaluate(
            &embeddings,
            &config.synonyms,
            config.n_random,
            config.seed,
            config.mode,
            config.coverage,
        )?;
        log::info!(
            "k={k}: {seconds:.3}s, separation {:.4}",
            report.synonym_separation_99
        );
        rows.push(SweepRow { k, seconds, report });
    }
    Ok(SweepReport { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub k: usize,
    pub seconds: f64,
    pub reconstruction_error: f64,
}

/// One timed factorization per `k`, after a single untimed warm-up run at
/// the first `k`.
pub fn benchmark_factorization(
    a: &SparseMatrix,
    dims: &[usize],
    seed: u64,
    options: &SvdOptions,
) -> Result<Vec<BenchRow>> {
    let Some(&first) = dims.first() else {
        return Err(Error::InvalidArgument("no dimensions to benchmark".into()));
    };
    truncated_svd(a, first, seed, options)?;
    dims.iter()
        .map(|&k| {
            let start = Instant::now();
            let svd = truncated_svd(a, k, seed, options)?;
            let seconds = start.elapsed().as_secs_f64();
            let reconstruction_error = reconstruction_error(a, &svd)?;
            log::info!("k={k}: {seconds:.3}s, error {reconstruction_error:.6}");
            Ok(BenchRow {
                k,
                seconds,
                reconstruction_error,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(sweep: &SweepReport, mut out: W) -> Result<()> {
    writeln!(
        out,
        "k,seconds,mode,threshold_99,synonym_separation_99,random_outside_99,sigma_threshold,synonym_separation_sigma,random_outside_sigma"
    )?;
    for row in &sweep.rows {
        let r = &row.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.k,
            row.seconds,
            r.mode,
            r.threshold_99,
            r.synonym_separation_99,
            r.random_outside_99,
            r.sigma_threshold,
            r.synonym_separation_sigma,
            r.random_outside_sigma
        )?;
    }
    Ok(())
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> Result<()> {
    writeln!(out, "k,seconds,reconstruction_error")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            row.k, row.seconds, row.reconstruction_error
        )?;
    }
    Ok(())
}
