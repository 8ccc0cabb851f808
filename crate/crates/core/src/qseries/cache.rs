//! Rank-table persistence.
//!
//! JSON layout: `{"format_version": 1, "n_max": N, "rows": [[[m, "count"], ...], ...]}`
//! with one row per n listing m = 0, 1, ... and counts as decimal strings.
//! CSV layout: header `n,m,count`, one line per stored entry. The loader
//! sniffs the format from the first non-blank byte and revalidates every row
//! sum against p̄(n).

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::table::RankTable;
use crate::error::{Error, Result};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    n_max: usize,
    rows: Vec<Vec<(i64, String)>>,
}

pub fn save_table_json(t: &RankTable, path: &Path) -> Result<()> {
    let rows = (0..=t.n_max())
        .map(|n| Ok(t.row(n)?.into_iter().map(|(m, v)| (m, v.to_string())).collect()))
        .collect::<Result<Vec<_>>>()?;
    let file = CacheFile { format_version: CACHE_FORMAT_VERSION, n_max: t.n_max(), rows };
    let mut w = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer(&mut w, &file)?;
    w.flush()?;
    Ok(())
}

pub fn save_table_csv(t: &RankTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    write_csv(t, &mut w)?;
    w.flush()?;
    Ok(())
}

pub(crate) fn write_csv(t: &RankTable, w: &mut impl Write) -> Result<()> {
    writeln!(w, "n,m,count")?;
    for n in 0..=t.n_max() {
        for (m, v) in t.row(n)? {
            writeln!(w, "{n},{m},{v}")?;
        }
    }
    Ok(())
}

pub fn load_table(path: &Path) -> Result<RankTable> {
    let text = fs::read_to_string(path)?;
    match text.trim_start().as_bytes().first() {
        Some(b'{') => from_json(&text),
        Some(_) => from_csv(&text),
        None => Err(Error::Cache(format!("{} is empty", path.display()))),
    }
}

fn parse_count(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Cache(format!("bad count `{s}`")))
}

fn from_json(text: &str) -> Result<RankTable> {
    let file: CacheFile = serde_json::from_str(text)?;
    if file.format_version != CACHE_FORMAT_VERSION {
        return Err(Error::Cache(format!(
            "format_version {} is not supported (expected {CACHE_FORMAT_VERSION})",
            file.format_version
        )));
    }
    if file.rows.len() != file.n_max + 1 {
        return Err(Error::Cache(format!("header says n_max = {} but {} rows follow", file.n_max, file.rows.len())));
    }
    let mut rows = Vec::with_capacity(file.rows.len());
    for (n, row) in file.rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (m, s) in row {
            place(&mut out, n, *m, parse_count(s)?)?;
        }
        rows.push(out);
    }
    RankTable::from_rows(&rows).map_err(cache_err)
}

fn from_csv(text: &str) -> Result<RankTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("n,m,count") => {}
        other => return Err(Error::Cache(format!("unexpected CSV header {other:?}"))),
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut it = line.split(',');
        let (Some(n), Some(m), Some(v), None) = (it.next(), it.next(), it.next(), it.next()) else {
            return Err(Error::Cache(format!("line {}: expected three fields", i + 2)));
        };
        let n: usize = n.trim().parse().map_err(|_| Error::Cache(format!("line {}: bad n", i + 2)))?;
        let m: i64 = m.trim().parse().map_err(|_| Error::Cache(format!("line {}: bad m", i + 2)))?;
        if rows.len() <= n {
            rows.resize(n + 1, Vec::new());
        }
        place(&mut rows[n], n, m, parse_count(v)?)?;
    }
    if rows.is_empty() {
        return Err(Error::Cache("CSV has no data rows".into()));
    }
    RankTable::from_rows(&rows).map_err(cache_err)
}

fn place(row: &mut Vec<BigInt>, n: usize, m: i64, v: BigInt) -> Result<()> {
    if m < 0 {
        return Err(Error::Cache(format!("row {n}: negative rank {m} (only m >= 0 is stored)")));
    }
    let m = m as usize;
    if row.len() <= m {
        row.resize(m + 1, BigInt::default());
    }
    row[m] = v;
    Ok(())
}

fn cache_err(e: Error) -> Error {
    match e {
        Error::Consistency(msg) => Error::Cache(msg),
        other => other,
    }
}
