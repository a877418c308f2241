//! Run configuration: flags override the config file, which overrides the
//! built-in defaults. The config file is flat `key=value` text; keys are the
//! long flag names with `-` or `_`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::embeddings::SimilarityMode;
use crate::graph::RootSplit;
use crate::linalg::{Parallelism, SvdOptions};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub root_out: Option<PathBuf>,
    pub k: usize,
    pub seed: u64,
    pub mode: SimilarityMode,
    pub coverage: f64,
    pub n_random: usize,
    pub oversampling: usize,
    pub power_iterations: usize,
    /// 0 = one per core, 1 = sequential and bit-reproducible
    pub threads: usize,
    pub dims: Vec<usize>,
    pub sigma_weight: f64,
    pub bins: usize,
    pub root_split: RootSplit,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lexicon: None,
            synonyms: None,
            embeddings: None,
            out: None,
            root_out: None,
            k: 300,
            seed: 42,
            mode: SimilarityMode::Dot,
            coverage: 0.99,
            n_random: 100_000,
            oversampling: 10,
            power_iterations: 4,
            threads: 1,
            dims: Vec::new(),
            sigma_weight: 0.0,
            bins: 100,
            root_split: RootSplit::Whitespace,
        }
    }
}

impl RunConfig {
    pub fn svd_options(&self) -> SvdOptions {
        SvdOptions {
            oversampling: self.oversampling,
            power_iterations: self.power_iterations,
            parallelism: Parallelism::from_threads(self.threads),
        }
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let bad = || Error::InvalidArgument(format!("bad value {value:?} for {key}"));
        match key.as_str() {
            "lexicon" => self.lexicon = Some(value.into()),
            "synonyms" => self.synonyms = Some(value.into()),
            "embeddings" => self.embeddings = Some(value.into()),
            "out" => self.out = Some(value.into()),
            "root_out" => self.root_out = Some(value.into()),
            "k" => self.k = value.parse().map_err(|_| bad())?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "mode" => self.mode = value.parse()?,
            "coverage" => self.coverage = value.parse().map_err(|_| bad())?,
            "n_random" => self.n_random = value.parse().map_err(|_| bad())?,
            "oversampling" => self.oversampling = value.parse().map_err(|_| bad())?,
            "power_iters" | "power_iterations" => {
                self.power_iterations = value.parse().map_err(|_| bad())?
            }
            "threads" => self.threads = value.parse().map_err(|_| bad())?,
            "dims" => self.dims = parse_dims(value)?,
            "sigma_weight" => self.sigma_weight = value.parse().map_err(|_| bad())?,
            "bins" => self.bins = value.parse().map_err(|_| bad())?,
            "root_split" => {
                self.root_split = match value {
                    "whitespace" => RootSplit::Whitespace,
                    "chars" | "characters" => RootSplit::Characters,
                    _ => return Err(bad()),
                }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown config key {other:?}"
                )))
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(i + 1, format!("{}: expected key=value", path.display()))
            })?;
            self.set(key, value).map_err(|e| match e {
                Error::InvalidArgument(msg) => {
                    Error::parse(i + 1, format!("{}: {msg}", path.display()))
                }
                other => other,
            })?;
        }
        Ok(())
    }

    /// Checks the numeric ranges the operations rely on.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if !(self.coverage > 0.0 && self.coverage < 1.0) {
            return bad(format!("coverage {} outside (0, 1)", self.coverage));
        }
        if self.n_random < crate::eval::MIN_THRESHOLD_SAMPLE {
            return bad(format!(
                "n-random must be at least {}",
                crate::eval::MIN_THRESHOLD_SAMPLE
            ));
        }
        if self.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        if !self.sigma_weight.is_finite() {
            return bad("sigma-weight must be finite".into());
        }
        Ok(())
    }

    /// The settings that determine a run's results, for echoing into its
    /// outputs. Output paths are left out.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        if let Some(p) = path(&self.lexicon) {
            m.insert("lexicon".into(), p);
        }
        if let Some(p) = path(&self.synonyms) {
            m.insert("synonyms".into(), p);
        }
        if let Some(p) = path(&self.embeddings) {
            m.insert("embeddings".into(), p);
        }
        m.insert("k".into(), self.k.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("mode".into(), self.mode.to_string());
        m.insert("coverage".into(), self.coverage.to_string());
        m.insert("n_random".into(), self.n_random.to_string());
        m.insert("oversampling".into(), self.oversampling.to_string());
        m.insert("power_iters".into(), self.power_iterations.to_string());
        m.insert("threads".into(), self.threads.to_string());
        if !self.dims.is_empty() {
            let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
            m.insert("dims".into(), dims.join(","));
        }
        m.insert("sigma_weight".into(), self.sigma_weight.to_string());
        m.insert("bins".into(), self.bins.to_string());
        let split = match self.root_split {
            RootSplit::Whitespace => "whitespace",
            RootSplit::Characters => "chars",
        };
        m.insert("root_split".into(), split.into());
        m
    }
}

/// `"16,4,8"` → `[4, 8, 16]` (sorted, deduplicated).
pub fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let mut dims = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| Error::InvalidArgument(format!("bad dimension {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    dims.sort_unstable();
    dims.dedup();
    Ok(dims)
}
