//! Command-line front end: `stats`, `embed`, `eval`, `sweep` and `bench`.
//!
//! Exit codes: 0 on success, 1 on an internal error, 2 on a usage or input
//! error. Error messages name the stage that failed.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::embeddings::{
    derive_embeddings_with_sigma_weight, derive_root_embeddings, load_embeddings, metadata_path,
    save_embeddings, SimilarityMode,
};
use crate::eval::{
    benchmark_factorization, dimension_sweep, evaluate_detailed, read_synonym_file,
    write_bench_csv, write_sweep_csv, EvalConfig, EvalReport, Evaluation, Histogram,
};
use crate::graph::{
    biadjacency, build_graph, graph_stats, read_lexicon_file, EtymologicalGraph, LexiconFormat,
};
use crate::linalg::{random_sparse, truncated_svd, RandomValues};
use crate::{Error, Result};

pub use config::{parse_dims, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const CONFIG_ENV: &str = "ETYMOGRAPH_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "etymograph",
    version,
    about = "Etymology-based word embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print lexicon graph statistics as JSON
    Stats,
    /// Factorize the lexicon graph and write word vectors
    Embed,
    /// Evaluate word vectors against a synonym list
    Eval,
    /// Factorize and evaluate at several dimensions, CSV out
    Sweep,
    /// Time the factorization at several dimensions, CSV out
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Benchmark a generated ROWSxCOLS binary matrix instead of a lexicon
    #[arg(long, value_name = "ROWSxCOLS")]
    generate: Option<String>,
    /// Density of the generated matrix
    #[arg(long, default_value_t = 2e-4)]
    density: f64,
}

#[derive(Debug, Default, Args)]
struct Flags {
    #[arg(long, global = true, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    synonyms: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    embeddings: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write root vectors (embed)
    #[arg(long, global = true, value_name = "FILE")]
    root_out: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    mode: Option<SimilarityMode>,
    #[arg(long, global = true)]
    coverage: Option<f64>,
    #[arg(long, global = true)]
    n_random: Option<usize>,
    #[arg(long, global = true)]
    oversampling: Option<usize>,
    #[arg(long, global = true)]
    power_iters: Option<usize>,
    /// 0 = one per core, 1 = sequential (bit-reproducible)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Comma-separated dimensions (sweep, bench)
    #[arg(long, global = true, value_name = "K1,K2,...")]
    dims: Option<String>,
    /// Experimental: scale vector component c by sigma_c^alpha
    #[arg(long, global = true)]
    sigma_weight: Option<f64>,
    /// Histogram bins in the distribution CSVs (eval)
    #[arg(long, global = true)]
    bins: Option<usize>,
    /// Treat every character of the roots field as one root
    #[arg(long, global = true)]
    char_roots: bool,
    /// Flat key=value file with defaults for the flags above
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    config: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        macro_rules! take {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = &self.$field { c.$target = v.clone().into(); })*
            };
        }
        take!(
            lexicon => lexicon, synonyms => synonyms, embeddings => embeddings, out => out,
            root_out => root_out, k => k, seed => seed, mode => mode, coverage => coverage,
            n_random => n_random, oversampling => oversampling, power_iters => power_iterations,
            threads => threads, sigma_weight => sigma_weight, bins => bins,
        );
        if let Some(dims) = &self.dims {
            c.dims = parse_dims(dims)?;
        }
        if self.char_roots {
            c.root_split = crate::graph::RootSplit::Characters;
        }
        c.validate()?;
        Ok(c)
    }
}

/// A failure tagged with the pipeline stage it came from.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        if self.error.is_input_error() {
            EXIT_USAGE
        } else {
            EXIT_INTERNAL
        }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

type CmdResult = std::result::Result<(), StageError>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.flags.resolve().stage("config").and_then(|config| {
        let par = config.svd_options().parallelism;
        par.install(|| dispatch(&cli.command, &config))
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, config: &RunConfig) -> CmdResult {
    match command {
        Command::Stats => cmd_stats(config),
        Command::Embed => cmd_embed(config),
        Command::Eval => cmd_eval(config),
        Command::Sweep => cmd_sweep(config),
        Command::Bench(args) => cmd_bench(config, args),
    }
}

fn require<'a>(
    path: &'a Option<PathBuf>,
    flag: &str,
    stage: &'static str,
) -> std::result::Result<&'a Path, StageError> {
    path.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("missing --{flag}")))
        .stage(stage)
}

fn load_graph(config: &RunConfig) -> std::result::Result<EtymologicalGraph, StageError> {
    let path = require(&config.lexicon, "lexicon", "read lexicon")?;
    let format = LexiconFormat {
        split: config.root_split,
    };
    let lexicon = read_lexicon_file(path, &format)
        .map_err(|e| with_path(e, path))
        .stage("read lexicon")?;
    if lexicon.merged > 0 {
        log::info!("merged {} repeated lexicon words", lexicon.merged);
    }
    build_graph(&lexicon.entries).stage("build graph")
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io(io) => Error::Io(io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    }
}

/// Opens `--out`, or stdout when it is absent.
fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| with_path(e.into(), p))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

const GRAPH_KEYS: &[&str] = &["lexicon", "root_split"];
const SVD_KEYS: &[&str] = &[
    "k",
    "seed",
    "oversampling",
    "power_iters",
    "threads",
    "sigma_weight",
];
const EVAL_KEYS: &[&str] = &["synonyms", "seed", "mode", "coverage", "n_random", "bins"];

/// The resolved settings a command depends on, for echoing into its output.
fn echo(config: &RunConfig, groups: &[&[&str]]) -> BTreeMap<String, String> {
    let mut all = config.echo();
    all.retain(|key, _| groups.iter().any(|g| g.contains(&key.as_str())));
    all
}

/// Writes the echoed settings next to a CSV or JSON output as `out.meta`.
fn write_config_sidecar(out: Option<&Path>, settings: &BTreeMap<String, String>) -> Result<()> {
    let Some(out) = out else { return Ok(()) };
    let path = metadata_path(out);
    let mut w = BufWriter::new(File::create(&path).map_err(|e| with_path(e.into(), &path))?);
    for (key, value) in settings {
        writeln!(w, "{key}={value}")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_stats(config: &RunConfig) -> CmdResult {
    let graph = load_graph(config)?;
    write_json(&graph_stats(&graph), config.out.as_deref()).stage("write stats")?;
    write_config_sidecar(config.out.as_deref(), &echo(config, &[GRAPH_KEYS])).stage("write stats")
}

fn cmd_embed(config: &RunConfig) -> CmdResult {
    let out = require(&config.out, "out", "embed")?;
    let graph = load_graph(config)?;
    let b = biadjacency(&graph).stage("biadjacency")?;
    let svd = truncated_svd(&b.matrix, config.k, config.seed, &config.svd_options())
        .stage("factorize")?;
    let mut words = derive_embeddings_with_sigma_weight(&svd, &b.word_index, config.sigma_weight)
        .stage("derive vectors")?;
    let hash = graph.content_hash();
    let echo: BTreeMap<String, String> = echo(config, &[GRAPH_KEYS, SVD_KEYS, &["mode"]])
        .into_iter()
        .map(|(key, value)| (format!("config.{key}"), value))
        .collect();
    words.provenance.source_graph_hash = Some(hash.clone());
    words.provenance.default_mode = config.mode;
    words.provenance.extra = echo.clone();
    save_embeddings(&words, out)
        .map_err(|e| with_path(e, out))
        .stage("write embeddings")?;
    if let Some(root_out) = &config.root_out {
        let mut roots = derive_root_embeddings(&svd, &b.root_index).stage("derive root vectors")?;
        roots.provenance.source_graph_hash = Some(hash);
        roots.provenance.default_mode = config.mode;
        roots.provenance.extra = echo;
        save_embeddings(&roots, root_out)
            .map_err(|e| with_path(e, root_out))
            .stage("write root vectors")?;
    }
    log::info!(
        "wrote {} vectors of dimension {} to {}",
        words.len(),
        words.dimension(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    config: BTreeMap<String, String>,
    /// whether the embeddings came with a `.meta` sidecar
    provenance: &'static str,
    /// one report per mode; the configured mode first
    reports: Vec<&'a EvalReport>,
}

fn cmd_eval(config: &RunConfig) -> CmdResult {
    let path = require(&config.embeddings, "embeddings", "load embeddings")?;
    let syn_path = require(&config.synonyms, "synonyms", "read synonyms")?;
    let (embeddings, had_sidecar) = load_embeddings(path)
        .map_err(|e| with_path(e, path))
        .stage("load embeddings")?;
    let synonyms = read_synonym_file(syn_path, &embeddings)
        .map_err(|e| with_path(e, syn_path))
        .stage("read synonyms")?;
    let s = &synonyms.stats;
    log::info!(
        "synonyms: {} lines, {} kept, {} self-pairs, {} duplicates, {} out of vocabulary",
        s.raw,
        s.kept,
        s.self_pairs,
        s.duplicates,
        s.dropped_oov
    );

    // Vectors produced elsewhere carry no preferred similarity, so both
    // modes are reported for them.
    let mut modes = vec![config.mode];
    if !had_sidecar {
        modes.push(config.mode.other());
    }
    let mut evaluations = Vec::new();
    for mode in modes {
        let ev = evaluate_detailed(
            &embeddings,
            &synonyms,
            config.n_random,
            config.seed,
            mode,
            config.coverage,
        )
        .stage("evaluate")?;
        evaluations.push(ev);
    }

    let output = EvalOutput {
        config: echo(config, &[EVAL_KEYS, &["embeddings"]]),
        provenance: if had_sidecar { "sidecar" } else { "external" },
        reports: evaluations.iter().map(|ev| &ev.report).collect(),
    };
    write_json(&output, config.out.as_deref()).stage("write report")?;
    if let Some(out) = &config.out {
        for ev in &evaluations {
            write_distribution_csvs(ev, out, config.bins).stage("write distributions")?;
        }
    }
    Ok(())
}

/// Paths of the histogram CSVs that accompany a report at `out`.
pub fn distribution_csv_paths(out: &Path, mode: SimilarityMode) -> (PathBuf, PathBuf) {
    (
        out.with_extension(format!("{mode}.random.csv")),
        out.with_extension(format!("{mode}.synonyms.csv")),
    )
}

fn write_distribution_csvs(ev: &Evaluation, out: &Path, bins: usize) -> Result<()> {
    let half_width = ev.random.max_abs().max(ev.synonyms.max_abs());
    let (random_path, synonym_path) = distribution_csv_paths(out, ev.report.mode);
    for (dist, path) in [(&ev.random, random_path), (&ev.synonyms, synonym_path)] {
        let hist = Histogram::symmetric(dist.values(), bins, half_width)?;
        let mut w = BufWriter::new(File::create(&path).map_err(|e| with_path(e.into(), &path))?);
        hist.write_csv(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn require_dims(
    config: &RunConfig,
    stage: &'static str,
) -> std::result::Result<Vec<usize>, StageError> {
    if config.dims.is_empty() {
        return Err(Error::InvalidArgument("missing --dims".into())).stage(stage);
    }
    Ok(config.dims.clone())
}

fn cmd_sweep(config: &RunConfig) -> CmdResult {
    let dims = require_dims(config, "sweep")?;
    let syn_path = require(&config.synonyms, "synonyms", "read synonyms")?;
    let graph = load_graph(config)?;
    let synonyms = read_synonym_file(syn_path, &graph)
        .map_err(|e| with_path(e, syn_path))
        .stage("read synonyms")?;
    let eval = EvalConfig {
        synonyms,
        n_random: config.n_random,
        seed: config.seed,
        mode: config.mode,
        coverage: config.coverage,
        svd: config.svd_options(),
        sigma_weight: config.sigma_weight,
    };
    let sweep = dimension_sweep(&graph, &dims, &eval).stage("sweep")?;
    let out = output(config.out.as_deref()).stage("write sweep")?;
    write_sweep_csv(&sweep, out).stage("write sweep")?;
    let mut settings = echo(config, &[GRAPH_KEYS, SVD_KEYS, EVAL_KEYS, &["dims"]]);
    settings.remove("k");
    write_config_sidecar(config.out.as_deref(), &settings).stage("write sweep")
}

/// `"5000x50000"` → `(5000, 50000)`.
pub fn parse_shape(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("bad matrix shape {text:?}, expected ROWSxCOLS"));
    let (r, c) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let r = r.trim().parse().map_err(|_| bad())?;
    let c = c.trim().parse().map_err(|_| bad())?;
    Ok((r, c))
}

fn cmd_bench(config: &RunConfig, args: &BenchArgs) -> CmdResult {
    let dims = require_dims(config, "bench")?;
    let matrix = match &args.generate {
        Some(shape) => {
            let (rows, cols) = parse_shape(shape).stage("generate matrix")?;
            random_sparse(rows, cols, args.density, config.seed, RandomValues::Binary)
                .stage("generate matrix")?
        }
        None => {
            let graph = load_graph(config)?;
            biadjacency(&graph).stage("biadjacency")?.matrix
        }
    };
    let rows = benchmark_factorization(&matrix, &dims, config.seed, &config.svd_options())
        .stage("factorize")?;
    let out = output(config.out.as_deref()).stage("write bench")?;
    write_bench_csv(&rows, out).stage("write bench")?;
    let mut settings = echo(config, &[SVD_KEYS, &["dims"]]);
    match &args.generate {
        Some(shape) => {
            settings.insert("generate".into(), shape.clone());
            settings.insert("density".into(), args.density.to_string());
        }
        None => settings.extend(echo(config, &[GRAPH_KEYS])),
    }
    settings.remove("k");
    settings.remove("sigma_weight");
    write_config_sidecar(config.out.as_deref(), &settings).stage("write bench")
}
