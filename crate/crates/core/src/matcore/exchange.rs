use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::matrix::{check_finite, CMatrix};

// Plain-text matrix exchange format:
//   rows cols
//   re im        (one line per entry, row-major)
// Blank lines and lines starting with '#' are skipped. A file may hold
// several matrices back to back.

/// Writes one matrix in exchange format.
pub fn write_matrix(w: &mut impl Write, a: &CMatrix) -> Result<()> {
    writeln!(w, "{} {}", a.nrows(), a.ncols())?;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            writeln!(w, "{} {}", a[(i, j)].re, a[(i, j)].im)?;
        }
    }
    Ok(())
}

/// Writes several matrices back to back.
pub fn write_matrices(w: &mut impl Write, mats: &[CMatrix]) -> Result<()> {
    for a in mats {
        write_matrix(w, a)?;
    }
    Ok(())
}

pub fn write_matrix_file(path: impl AsRef<Path>, a: &CMatrix) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_matrix(&mut f, a)
}

struct ContentLines {
    lines: std::vec::IntoIter<String>,
    line_no: usize,
}

impl ContentLines {
    fn from_reader(r: &mut impl BufRead) -> Result<Self> {
        let mut all = Vec::new();
        for line in r.lines() {
            all.push(line?);
        }
        Ok(ContentLines {
            lines: all.into_iter(),
            line_no: 0,
        })
    }

    fn next_content(&mut self) -> Option<(usize, String)> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((self.line_no, trimmed.to_string()));
        }
    }
}

fn parse_pair(line_no: usize, text: &str) -> Result<(f64, f64)> {
    let bad = |msg: &str| Error::Parse {
        line: line_no,
        msg: msg.into(),
    };
    let mut parts = text.split_whitespace();
    let a = parts
        .next()
        .ok_or_else(|| bad("expected two numbers"))?
        .parse::<f64>()
        .map_err(|e| bad(&e.to_string()))?;
    let b = parts
        .next()
        .ok_or_else(|| bad("expected two numbers"))?
        .parse::<f64>()
        .map_err(|e| bad(&e.to_string()))?;
    if parts.next().is_some() {
        return Err(bad("expected exactly two numbers"));
    }
    Ok((a, b))
}

fn read_one(lines: &mut ContentLines) -> Result<Option<CMatrix>> {
    let Some((line_no, header)) = lines.next_content() else {
        return Ok(None);
    };
    let (r, c) = parse_pair(line_no, &header)?;
    if r.fract() != 0.0 || c.fract() != 0.0 || r < 1.0 || c < 1.0 || r > 1e6 || c > 1e6 {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("bad dimensions {r} {c}"),
        });
    }
    let (rows, cols) = (r as usize, c as usize);
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let Some((line_no, text)) = lines.next_content() else {
            return Err(Error::Parse {
                line: lines.line_no,
                msg: "unexpected end of file inside matrix body".into(),
            });
        };
        let (re, im) = parse_pair(line_no, &text)?;
        entries.push(Complex64::new(re, im));
    }
    let m = CMatrix::from_row_slice(rows, cols, &entries);
    check_finite(&m)?;
    Ok(Some(m))
}

/// Reads a single matrix; trailing content is an error.
pub fn read_matrix(r: &mut impl BufRead) -> Result<CMatrix> {
    let mut lines = ContentLines::from_reader(r)?;
    let m = read_one(&mut lines)?.ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    if lines.next_content().is_some() {
        return Err(Error::Parse {
            line: lines.line_no,
            msg: "trailing content after matrix".into(),
        });
    }
    Ok(m)
}

/// Reads all matrices in the stream (at least one).
pub fn read_matrices(r: &mut impl BufRead) -> Result<Vec<CMatrix>> {
    let mut lines = ContentLines::from_reader(r)?;
    let mut out = Vec::new();
    while let Some(m) = read_one(&mut lines)? {
        out.push(m);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty input".into(),
        });
    }
    Ok(out)
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<CMatrix> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_matrix(&mut f)
}

pub fn read_matrices_file(path: impl AsRef<Path>) -> Result<Vec<CMatrix>> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_matrices(&mut f)
}
