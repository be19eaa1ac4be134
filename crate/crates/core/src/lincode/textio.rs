//! Plain-text matrix format: a header line `n k field_json`, then k rows of
//! whitespace-separated element encodings.

use std::fmt::Write;

use super::{LinearCode, WeightDistribution};
use crate::error::{Error, Result};
use crate::galois::{FieldDescriptor, FieldTower};

/// Serializes the supplied generator (not the reduced basis).
pub fn write_matrix(code: &LinearCode) -> String {
    let desc = code.field().descriptor();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}",
        code.n(),
        code.generator().len(),
        serde_json::to_string(&desc).expect("descriptor serializes")
    );
    for row in code.generator() {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn read_matrix(text: &str) -> Result<LinearCode> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut parts = header.trim().splitn(3, char::is_whitespace);
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("header: missing n".into()))?;
    let k: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("header: missing k".into()))?;
    let json = parts.next().ok_or_else(|| Error::Parse("header: missing field descriptor".into()))?;
    let desc: FieldDescriptor =
        serde_json::from_str(json.trim()).map_err(|e| Error::Parse(format!("field descriptor: {e}")))?;
    let tower = FieldTower::from_descriptor(&desc)?;
    let mut rows = Vec::with_capacity(k);
    for (i, line) in lines.enumerate() {
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.len() != k {
        return Err(Error::Parse(format!("header declares {k} rows, found {}", rows.len())));
    }
    LinearCode::with_length(tower.top().clone(), n, rows)
}

/// `weight,count` CSV of the nonzero entries.
pub fn distribution_csv(w: &WeightDistribution) -> String {
    let mut out = String::from("weight,count\n");
    for (i, c) in w.support() {
        let _ = writeln!(out, "{i},{c}");
    }
    out
}
