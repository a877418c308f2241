//! Generators and brute-force oracles shared by the integration tests and
//! the acceptance suite. Nothing here calls into the code it checks.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use etymograph::linalg::SparseMatrix;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sparse matrix: each entry is present with probability `density`
/// and then uniform in (0, 1], or 1 when `binary`.
pub fn bernoulli_matrix(
    rows: usize,
    cols: usize,
    density: f64,
    binary: bool,
    seed: u64,
) -> SparseMatrix {
    let mut r = rng(seed);
    let mut triplets = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if r.random::<f64>() < density {
                let v = if binary { 1.0 } else { 1.0 - r.random::<f64>() };
                triplets.push((i, j, v));
            }
        }
    }
    SparseMatrix::from_triplets(rows, cols, triplets).unwrap()
}

/// Plain triple loop `A x` over a dense copy.
pub fn dense_matvec(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dense_matvec_t(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let cols = rows.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| rows.iter().zip(y).map(|(row, yi)| row[j] * yi).sum())
        .collect()
}

/// Lexicon text with `words` distinct words over exactly `roots` roots
/// (`r000`, ...). Word `i < roots` contains root `i` so every root occurs.
/// Words take 1 to 4 roots drawn with replacement, so some lines repeat a
/// root, and `repeats` extra lines re-list existing words with new roots.
pub fn random_lexicon_text(words: usize, roots: usize, repeats: usize, seed: u64) -> String {
    let mut r = rng(seed);
    let mut lines = Vec::new();
    let root = |i: usize| format!("r{i:03}");
    for w in 0..words {
        let n = r.random_range(1..=4);
        let mut rs: Vec<String> = (0..n).map(|_| root(r.random_range(0..roots))).collect();
        if w < roots {
            rs.push(root(w));
        }
        lines.push(format!("w{w:04}\t{}", rs.join(" ")));
    }
    for _ in 0..repeats {
        let w = r.random_range(0..words);
        lines.push(format!("w{w:04}\t{}", root(r.random_range(0..roots))));
    }
    lines.join("\n") + "\n"
}

/// word → set of roots, read straight off the raw lines.
pub fn raw_word_roots(text: &str) -> BTreeMap<String, BTreeSet<String>> {
    let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for line in text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
    {
        let (word, roots) = line.split_once('\t').unwrap();
        map.entry(word.to_string())
            .or_default()
            .extend(roots.split_whitespace().map(str::to_string));
    }
    map
}

/// Graph statistics recounted from the raw lines.
#[derive(Debug, PartialEq)]
pub struct Recount {
    pub word_count: usize,
    pub root_count: usize,
    pub edge_count: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub max_word_degree: usize,
    pub max_root_degree: usize,
    pub mean_word_degree: f64,
    pub mean_root_degree: f64,
}

pub fn recount(map: &BTreeMap<String, BTreeSet<String>>) -> Recount {
    let mut root_degree: HashMap<&str, usize> = HashMap::new();
    let mut histogram = BTreeMap::new();
    let mut edges = 0;
    for roots in map.values() {
        edges += roots.len();
        *histogram.entry(roots.len()).or_insert(0) += 1;
        for r in roots {
            *root_degree.entry(r).or_insert(0) += 1;
        }
    }
    Recount {
        word_count: map.len(),
        root_count: root_degree.len(),
        edge_count: edges,
        histogram,
        max_word_degree: map.values().map(BTreeSet::len).max().unwrap_or(0),
        max_root_degree: root_degree.values().copied().max().unwrap_or(0),
        mean_word_degree: edges as f64 / map.len() as f64,
        mean_root_degree: edges as f64 / root_degree.len() as f64,
    }
}

/// Lexicon with planted synonyms. 200 roots form 40 fields of 5. Each of
/// the 200 synonym pairs takes 3 roots of one field for its first word; the
/// second word keeps 2 of them and adds one more root of the same field.
/// 1,600 filler words take 3 distinct roots uniformly at random.
pub fn planted_synonym_lexicon(seed: u64) -> (String, Vec<(String, String)>) {
    const FIELDS: usize = 40;
    const FIELD_SIZE: usize = 5;
    let mut r = rng(seed);
    let root = |f: usize, i: usize| format!("f{f:02}r{i}");
    let mut lines = Vec::new();
    let mut pairs = Vec::new();
    for p in 0..200 {
        let field = p % FIELDS;
        let mut members: Vec<usize> = (0..FIELD_SIZE).collect();
        members.shuffle(&mut r);
        let a: Vec<String> = members[..3].iter().map(|&i| root(field, i)).collect();
        let extra = *members[3..].choose(&mut r).unwrap();
        let b: Vec<String> = vec![a[0].clone(), a[1].clone(), root(field, extra)];
        let (wa, wb) = (format!("s{p:03}a"), format!("s{p:03}b"));
        lines.push(format!("{wa}\t{}", a.join(" ")));
        lines.push(format!("{wb}\t{}", b.join(" ")));
        pairs.push((wa, wb));
    }
    let all_roots: Vec<String> = (0..FIELDS)
        .flat_map(|f| (0..FIELD_SIZE).map(move |i| (f, i)))
        .map(|(f, i)| root(f, i))
        .collect();
    for w in 0..1600 {
        let chosen: Vec<&String> = all_roots.choose_multiple(&mut r, 3).collect();
        let joined: Vec<&str> = chosen.iter().map(|s| s.as_str()).collect();
        lines.push(format!("x{w:04}\t{}", joined.join(" ")));
    }
    (lines.join("\n") + "\n", pairs)
}

/// Linear-interpolation quantile computed from scratch: sort, then
/// interpolate at position `(n - 1) p`.
pub fn sort_quantile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = (v.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn write_file(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Lexicon whose root frequencies follow a Zipf law (`p(r) ∝ 1/(r+1)`), as
/// character frequencies do, giving a decaying spectrum. Each word takes 1
/// to 4 roots.
pub fn zipf_lexicon_text(words: usize, roots: usize, seed: u64) -> String {
    let mut r = rng(seed);
    let weights: Vec<f64> = (0..roots).map(|i| 1.0 / (i + 1) as f64).collect();
    let dist = rand::distr::weighted::WeightedIndex::new(&weights).unwrap();
    let mut out = String::new();
    for w in 0..words {
        let n = r.random_range(1..=4);
        let rs: Vec<String> = (0..n).map(|_| format!("r{:03}", r.sample(&dist))).collect();
        out.push_str(&format!("w{w:04}\t{}\n", rs.join(" ")));
    }
    out
}
