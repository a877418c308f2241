//! Text format for embeddings (word2vec text layout):
//!
//! ```text
//! <vocab_size> <dimension>
//! word v1 v2 ... vk
//! ```
//!
//! Floats are written in the shortest decimal form that parses back to the
//! same `f64` (at most 17 significant digits), so export/import is exact.
//! Provenance goes to a `key=value` sidecar named `<file>.meta`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{EmbeddingKind, EmbeddingSet, Provenance, SimilarityMode};
use crate::{Error, Result};

pub fn export_embeddings<W: Write>(e: &EmbeddingSet, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", e.len(), e.dimension())?;
    for (i, word) in e.vocabulary().iter().enumerate() {
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!(
                "word {word:?} cannot be written in the whitespace-separated format"
            )));
        }
        out.write_all(word.as_bytes())?;
        for x in e.vector_at(i) {
            write!(out, " {x}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn import_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingSet> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (vocab_size, dimension) = loop {
        let Some((line_no, line)) = lines.next() else {
            return Err(Error::parse(1, "missing header"));
        };
        let line = line.map_err(|e| utf8_or_io(e, line_no))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed = match fields.as_slice() {
            [n, k] => n.parse::<usize>().ok().zip(k.parse::<usize>().ok()),
            _ => None,
        };
        break parsed
            .ok_or_else(|| Error::parse(line_no, "header must be `<vocab_size> <dimension>`"))?;
    };

    let mut vocabulary = Vec::with_capacity(vocab_size);
    let mut vectors = Vec::with_capacity(vocab_size * dimension);
    let mut seen = std::collections::HashSet::with_capacity(vocab_size);
    let mut last_line = 1;
    for (line_no, line) in lines {
        last_line = line_no;
        let line = line.map_err(|e| utf8_or_io(e, line_no))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-empty line has a field");
        let before = vectors.len();
        for field in fields {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad number {field:?}")))?;
            vectors.push(x);
        }
        let found = vectors.len() - before;
        if found != dimension {
            return Err(Error::parse(
                line_no,
                format!("expected {dimension} components, found {found}"),
            ));
        }
        if !seen.insert(word.to_owned()) {
            return Err(Error::parse(line_no, format!("duplicate word {word}")));
        }
        if vocabulary.len() == vocab_size {
            return Err(Error::parse(
                line_no,
                format!("more than {vocab_size} vectors"),
            ));
        }
        vocabulary.push(word.to_owned());
    }
    if vocabulary.len() != vocab_size {
        return Err(Error::parse(
            last_line,
            format!(
                "header announces {vocab_size} vectors, file has {}",
                vocabulary.len()
            ),
        ));
    }
    EmbeddingSet::new(vocabulary, dimension, vectors)
}

fn utf8_or_io(e: std::io::Error, line: usize) -> Error {
    if e.kind() == std::io::ErrorKind::InvalidData {
        Error::InvalidUtf8 { line }
    } else {
        Error::Io(e)
    }
}

pub fn metadata_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

pub fn write_metadata<W: Write>(p: &Provenance, mut out: W) -> Result<()> {
    let kind = match p.kind {
        EmbeddingKind::Words => "words",
        EmbeddingKind::Roots => "roots",
    };
    writeln!(out, "kind={kind}")?;
    writeln!(out, "k={}", p.k)?;
    if let Some(hash) = &p.source_graph_hash {
        writeln!(out, "source_graph_hash={hash}")?;
    }
    if let Some(seed) = p.seed {
        writeln!(out, "seed={seed}")?;
    }
    writeln!(out, "default_mode={}", p.default_mode)?;
    writeln!(out, "sigma_weight={}", p.sigma_weight)?;
    for (key, value) in &p.extra {
        writeln!(out, "{key}={value}")?;
    }
    Ok(())
}

pub fn read_metadata<R: BufRead>(reader: R) -> Result<Provenance> {
    let mut p = Provenance::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, "expected key=value"))?;
        let bad = |what: &str| Error::parse(line_no, format!("bad {what} {value:?}"));
        match key.trim() {
            "kind" => {
                p.kind = match value {
                    "words" => EmbeddingKind::Words,
                    "roots" => EmbeddingKind::Roots,
                    _ => return Err(bad("kind")),
                }
            }
            "k" => p.k = value.parse().map_err(|_| bad("k"))?,
            "source_graph_hash" => p.source_graph_hash = Some(value.to_owned()),
            "seed" => p.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "default_mode" => {
                p.default_mode = value.parse::<SimilarityMode>().map_err(|_| bad("mode"))?
            }
            "sigma_weight" => p.sigma_weight = value.parse().map_err(|_| bad("sigma_weight"))?,
            other => {
                p.extra.insert(other.to_owned(), value.to_owned());
            }
        }
    }
    Ok(p)
}

/// Writes the vectors to `path` and the provenance to `path.meta`.
pub fn save_embeddings(e: &EmbeddingSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    export_embeddings(e, BufWriter::new(File::create(path)?))?;
    let mut meta = BufWriter::new(File::create(metadata_path(path))?);
    write_metadata(&e.provenance, &mut meta)?;
    meta.flush()?;
    Ok(())
}

/// Reads vectors from `path`. Returns whether a `.meta` sidecar was found;
/// without one the set is treated as externally produced.
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<(EmbeddingSet, bool)> {
    let path = path.as_ref();
    let mut set = import_embeddings(BufReader::new(File::open(path)?))?;
    let meta = metadata_path(path);
    if meta.exists() {
        let provenance = read_metadata(BufReader::new(File::open(meta)?))?;
        set.provenance = provenance;
        Ok((set, true))
    } else {
        Ok((set, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn export_string(e: &EmbeddingSet) -> String {
        let mut buf = Vec::new();
        export_embeddings(e, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn export_format() {
        let e = EmbeddingSet::new(vec!["a".into()], 2, vec![1.0, 2.0]).unwrap();
        assert_eq!(export_string(&e), "1 2\na 1 2\n");
    }

    #[test]
    fn import_errors_carry_line_numbers() {
        let err = import_embeddings("2 2\na 1 2\nb 1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = import_embeddings("2 1\na 1\na 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = import_embeddings("x y\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = import_embeddings("3 1\na 1\nb 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = import_embeddings("1 1\na 1\nb 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = import_embeddings("1 1\na nan?\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn unicode_words_and_trailing_space() {
        let e = import_embeddings("1 3\n森林 0.5 -1e-3 2 \n".as_bytes()).unwrap();
        assert_eq!(e.vector("森林").unwrap(), &[0.5, -1e-3, 2.0]);
    }

    #[test]
    fn rejects_words_with_spaces() {
        let e = EmbeddingSet::new(vec!["a b".into()], 1, vec![1.0]).unwrap();
        assert!(export_embeddings(&e, Vec::new()).is_err());
    }

    #[test]
    fn metadata_round_trip() {
        let mut p = Provenance {
            kind: EmbeddingKind::Roots,
            k: 12,
            source_graph_hash: Some("abc".into()),
            seed: Some(99),
            default_mode: SimilarityMode::Cosine,
            sigma_weight: 0.5,
            ..Provenance::default()
        };
        p.extra.insert("config.n_random".into(), "100000".into());
        let mut buf = Vec::new();
        write_metadata(&p, &mut buf).unwrap();
        assert_eq!(read_metadata(buf.as_slice()).unwrap(), p);
    }
}
