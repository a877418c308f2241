//! Matrix Market coordinate format (`real general`, 1-indexed).

use std::io::{BufRead, Write};

use super::SparseMatrix;
use crate::{Error, Result};

pub fn write_matrix_market<W: Write>(matrix: &SparseMatrix, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(
        out,
        "{} {} {}",
        matrix.n_rows(),
        matrix.n_cols(),
        matrix.nnz()
    )?;
    for (i, j, v) in matrix.iter() {
        writeln!(out, "{} {} {}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SparseMatrix> {
    let mut lines = reader.lines().enumerate();
    let (_, banner) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing Matrix Market banner"))?;
    let banner = banner?.to_ascii_lowercase();
    if !banner.starts_with("%%matrixmarket matrix coordinate") {
        return Err(Error::parse(1, "expected a coordinate Matrix Market file"));
    }
    if banner.contains("complex") || banner.contains("symmetric") || banner.contains("hermitian") {
        return Err(Error::parse(
            1,
            "only real/integer/pattern general matrices are supported",
        ));
    }
    let pattern = banner.contains("pattern");

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("expected an integer, found {s:?}")))
        };
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(Error::parse(line_no, "size line needs rows, cols and nnz"));
                }
                size = Some((
                    parse_usize(fields[0])?,
                    parse_usize(fields[1])?,
                    parse_usize(fields[2])?,
                ));
                triplets.reserve(size.unwrap().2);
            }
            Some((rows, cols, _)) => {
                let expected = if pattern { 2 } else { 3 };
                if fields.len() != expected {
                    return Err(Error::parse(line_no, format!("expected {expected} fields")));
                }
                let i = parse_usize(fields[0])?;
                let j = parse_usize(fields[1])?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(Error::parse(
                        line_no,
                        format!("entry ({i}, {j}) out of range"),
                    ));
                }
                let v = if pattern {
                    1.0
                } else {
                    fields[2]
                        .parse::<f64>()
                        .map_err(|_| Error::parse(line_no, format!("bad value {:?}", fields[2])))?
                };
                triplets.push((i - 1, j - 1, v));
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| Error::parse(1, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(Error::InvalidArgument(format!(
            "header announces {nnz} entries, file has {}",
            triplets.len()
        )));
    }
    SparseMatrix::from_triplets(rows, cols, triplets)
}
