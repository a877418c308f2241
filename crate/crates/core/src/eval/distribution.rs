use std::io::Write;

use serde::Serialize;

use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 100;

/// Empirical quantile of sorted data with linear interpolation between
/// order statistics: `h = (n − 1) p`, interpolating between `x[⌊h⌋]` and
/// `x[⌊h⌋ + 1]`. `p = 0` gives the minimum and `p = 1` the maximum.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let p = p.clamp(0.0, 1.0);
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// population standard deviation (divides by `count`)
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub p01: f64,
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
    pub p99: f64,
}

/// Equal-width bins over `[-half_width, half_width]`; the last bin is
/// closed on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn symmetric(values: &[f64], bins: usize, half_width: f64) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidArgument(
                "histogram needs at least one bin".into(),
            ));
        }
        let half_width = if half_width > 0.0 { half_width } else { 1.0 };
        let width = 2.0 * half_width / bins as f64;
        let edges = (0..=bins).map(|b| -half_width + b as f64 * width).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let pos = ((v + half_width) / width).floor();
            let bin = if pos < 0.0 {
                0
            } else {
                (pos as usize).min(bins - 1)
            };
            counts[bin] += 1;
        }
        Ok(Self { edges, counts })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bin_lo,bin_hi,count")?;
        for (b, count) in self.counts.iter().enumerate() {
            writeln!(out, "{},{},{}", self.edges[b], self.edges[b + 1], count)?;
        }
        Ok(())
    }
}

/// A sample of similarity values, kept in the order given, with summary
/// statistics and a histogram symmetric about zero.
#[derive(Clone, Debug)]
pub struct Distribution {
    values: Vec<f64>,
    sorted: Vec<f64>,
    summary: Summary,
    histogram: Histogram,
}

impl Distribution {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_bins(values, DEFAULT_BINS)
    }

    pub fn with_bins(values: Vec<f64>, bins: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite similarity value {bad}"
            )));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let q = |p| quantile_sorted(&sorted, p);
        let summary = Summary {
            count: values.len(),
            mean,
            std: var.sqrt(),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            p01: q(0.01),
            p05: q(0.05),
            p25: q(0.25),
            p50: q(0.5),
            p75: q(0.75),
            p95: q(0.95),
            p99: q(0.99),
        };
        let half_width = summary.min.abs().max(summary.max.abs());
        let histogram = Histogram::symmetric(&values, bins, half_width)?;
        Ok(Self {
            values,
            sorted,
            summary,
            histogram,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn summary(&self) -> &Summary {
        &self.summary
    }

    pub fn histogram(&self) -> &Histogram {
        &self.histogram
    }

    pub fn quantile(&self, p: f64) -> f64 {
        quantile_sorted(&self.sorted, p)
    }

    /// Largest absolute value in the sample.
    pub fn max_abs(&self) -> f64 {
        self.summary.min.abs().max(self.summary.max.abs())
    }

    /// Fraction of values with `|v| > threshold`.
    pub fn fraction_beyond(&self, threshold: f64) -> f64 {
        let beyond = self.values.iter().filter(|v| v.abs() > threshold).count();
        beyond as f64 / self.values.len() as f64
    }
}
