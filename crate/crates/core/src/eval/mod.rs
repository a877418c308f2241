//! Synonym-discovery evaluation: random-pair baselines, similarity
//! distributions, detection thresholds, separation fractions, dimension
//! sweeps and factorization timing.

mod bench;
mod distribution;
mod pairs;
mod report;

pub use bench::{
    benchmark_factorization, dimension_sweep, write_bench_csv, write_sweep_csv, BenchRow,
    EvalConfig, SweepReport, SweepRow,
};
pub use distribution::{quantile_sorted, Distribution, Histogram, Summary, DEFAULT_BINS};
pub use pairs::{
    load_synonym_pairs, read_synonym_file, sample_random_pairs, PairStats, SynonymPairs, Vocabulary,
};
pub use report::{
    detection_threshold, evaluate, evaluate_detailed, similarity_distribution, EvalReport,
    Evaluation, MIN_THRESHOLD_SAMPLE,
};
