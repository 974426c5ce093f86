//! Plain-text matrix and permutation dumps.
//!
//! A matrix file starts with a line holding `n`, followed by `n` lines of `n`
//! space-separated entries written with 17 significant digits, which is
//! enough for an exact `f64` round trip. A permutation file holds one target
//! index per line.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::models::Permutation;

pub fn write_matrix<W: Write>(mut w: W, m: &Matrix) -> std::io::Result<()> {
    assert!(m.is_square());
    writeln!(w, "{}", m.rows())?;
    let mut line = String::new();
    for i in 0..m.rows() {
        line.clear();
        for (j, x) in m.row(i).iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{x:.16e}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(r: R) -> Result<Matrix> {
    let mut lines = r.lines();
    let header =
        next_nonempty(&mut lines)?.ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line `{}`", header.trim())))?;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = next_nonempty(&mut lines)?
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
        let before = data.len();
        for tok in line.split_whitespace() {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad entry `{tok}` in row {i}")))?;
            data.push(x);
        }
        if data.len() - before != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                data.len() - before
            )));
        }
    }
    if next_nonempty(&mut lines)?.is_some() {
        return Err(Error::Parse("trailing data after matrix rows".into()));
    }
    Matrix::from_vec(n, n, data)
}

pub fn write_permutation<W: Write>(mut w: W, p: &Permutation) -> std::io::Result<()> {
    for t in p.targets() {
        writeln!(w, "{t}")?;
    }
    Ok(())
}

pub fn read_permutation<R: BufRead>(r: R) -> Result<Permutation> {
    let mut targets = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        targets.push(
            t.parse()
                .map_err(|_| Error::Parse(format!("bad permutation entry `{t}`")))?,
        );
    }
    Permutation::new(targets)
}

fn next_nonempty<I>(lines: &mut I) -> Result<Option<String>>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    for line in lines {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if !line.trim().is_empty() {
            return Ok(Some(line));
        }
    }
    Ok(None)
}
