//! Linear codes over a single [`Field`]: row reduction, exhaustive weight
//! distributions, duals, puncturing, the MacWilliams transform, Pless moments,
//! classical bounds and Hermitian orthogonality.

mod bounds;
mod enumerate;
mod macwilliams;
mod textio;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::Field;

pub use bounds::{bound_verdicts, optimality_certificate, BoundKind, BoundVerdict, Optimality};
pub use macwilliams::{krawtchouk, macwilliams_transform, pless_check, PlessVerdict};
pub use textio::{distribution_csv, read_matrix, write_matrix};

/// Maximum number of codewords enumerated unless overridden.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Budget from `FWC_BUDGET` if set and parseable, else [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("FWC_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Gaussian elimination to reduced row echelon form.
/// Returns the rank, the nonzero reduced rows and their pivot columns.
pub fn rank_and_rref(field: &Field, rows: &[Vec<u32>]) -> (usize, Vec<Vec<u32>>, Vec<usize>) {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = field.inv(m[r][c]).expect("nonzero pivot");
        if inv != 1 {
            for x in m[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = field.neg(row[c]);
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = field.add(*x, field.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (r, m, pivots)
}

/// A linear code given by a generator matrix.
///
/// The matrix as supplied is kept (its columns are the point multiset used by
/// the hyperplane check); the reduced basis is recomputed on construction.
#[derive(Debug, Clone)]
pub struct LinearCode {
    field: Arc<Field>,
    n: usize,
    generator: Vec<Vec<u32>>,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl LinearCode {
    pub fn new(field: Arc<Field>, generator: Vec<Vec<u32>>) -> Result<LinearCode> {
        let n = generator.first().map_or(0, |r| r.len());
        Self::with_length(field, n, generator)
    }

    /// Like [`LinearCode::new`] but with an explicit length, so that codes
    /// with no generator rows still know n.
    pub fn with_length(field: Arc<Field>, n: usize, generator: Vec<Vec<u32>>) -> Result<LinearCode> {
        for (i, row) in generator.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!("row {i} has length {} but n = {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= field.size()) {
                return Err(Error::Structural(format!("entry {bad} in row {i} is not an element of F_{}", field.size())));
            }
        }
        let (_, basis, pivots) = rank_and_rref(&field, &generator);
        Ok(LinearCode { field, n, generator, basis, pivots })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.basis.len()
    }
    /// The matrix as supplied.
    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }
    /// Reduced row echelon basis.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// Number of codewords, or `None` if it does not fit in 64 bits.
    pub fn size(&self) -> Option<u64> {
        (self.field.size() as u64).checked_pow(self.k() as u32)
    }

    fn check_budget(&self, budget: u64) -> Result<u64> {
        match self.size() {
            Some(s) if s <= budget => Ok(s),
            _ => Err(Error::Resource(format!(
                "enumerating {}^{} codewords exceeds the budget of {budget} (override with FWC_BUDGET)",
                self.field.size(),
                self.k()
            ))),
        }
    }

    /// u · basis.
    pub fn encode(&self, msg: &[u32]) -> Vec<u32> {
        encode_rows(&self.field, &self.basis, msg, self.n)
    }

    /// u · G with the supplied generator matrix.
    pub fn encode_generator(&self, msg: &[u32]) -> Vec<u32> {
        encode_rows(&self.field, &self.generator, msg, self.n)
    }

    /// Exact weight distribution by incremental Gray-code enumeration.
    pub fn weight_distribution(&self, budget: u64) -> Result<WeightDistribution> {
        self.check_budget(budget)?;
        let counts = enumerate::gray_weights(&self.field, &self.basis, self.n);
        Ok(WeightDistribution::from_counts(self.field.size(), counts))
    }

    /// Exact weight distribution by re-encoding every message from scratch.
    pub fn weight_distribution_reencode(&self, budget: u64) -> Result<WeightDistribution> {
        self.check_budget(budget)?;
        let counts = enumerate::reencode_weights(&self.field, &self.basis, self.n);
        Ok(WeightDistribution::from_counts(self.field.size(), counts))
    }

    /// Calls `visit` on every codeword (in Gray-code order).
    pub fn for_each_codeword(&self, budget: u64, visit: impl FnMut(&[u32])) -> Result<()> {
        self.check_budget(budget)?;
        enumerate::gray_visit(&self.field, &self.basis, self.n, visit);
        Ok(())
    }

    /// Generator of the dual code, from the nullspace of the reduced basis.
    pub fn dual(&self) -> LinearCode {
        let f = &self.field;
        let mut free = vec![true; self.n];
        for &c in &self.pivots {
            free[c] = false;
        }
        let rows: Vec<Vec<u32>> = (0..self.n)
            .filter(|&c| free[c])
            .map(|c| {
                let mut v = vec![0u32; self.n];
                v[c] = 1;
                for (row, &pc) in self.basis.iter().zip(&self.pivots) {
                    v[pc] = f.neg(row[c]);
                }
                v
            })
            .collect();
        LinearCode::with_length(f.clone(), self.n, rows).expect("nullspace rows are well formed")
    }

    /// Delete coordinate `i` from the generator and re-reduce.
    pub fn puncture(&self, i: usize) -> Result<LinearCode> {
        if i >= self.n {
            return Err(Error::Domain(format!("coordinate {i} out of range for length {}", self.n)));
        }
        let rows = self
            .generator
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect())
            .collect();
        LinearCode::with_length(self.field.clone(), self.n - 1, rows)
    }

    /// True iff both codes are the same subspace of the same ambient space.
    pub fn same_row_space(&self, other: &LinearCode) -> bool {
        *self.field == *other.field && self.n == other.n && self.basis == other.basis
    }

    /// Σ x_i y_i^s = 0 for all basis pairs, over a field of size s².
    pub fn hermitian_self_orthogonal(&self) -> Result<bool> {
        let f = &self.field;
        if !f.degree().is_multiple_of(2) {
            return Err(Error::Domain(format!("F_{} is not a field of square order", f.size())));
        }
        let s = (f.characteristic() as u64).pow(f.degree() / 2);
        for x in &self.basis {
            for y in &self.basis {
                let mut acc = 0;
                for (&a, &b) in x.iter().zip(y) {
                    acc = f.add(acc, f.mul(a, f.pow(b, s)));
                }
                if acc != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks wt(uG) = n − #{columns c of G : u·c = 0} for one message `u`
    /// against the supplied generator.
    pub fn hyperplane_weight_check(&self, u: &[u32]) -> Result<bool> {
        if u.len() != self.generator.len() {
            return Err(Error::Structural(format!(
                "message of length {} for a generator with {} rows",
                u.len(),
                self.generator.len()
            )));
        }
        let f = &self.field;
        let weight = self.encode_generator(u).iter().filter(|&&x| x != 0).count();
        let on_hyperplane = (0..self.n)
            .filter(|&j| {
                let dot = u.iter().zip(&self.generator).fold(0, |acc, (&ui, row)| f.add(acc, f.mul(ui, row[j])));
                dot == 0
            })
            .count();
        Ok(weight == self.n - on_hyperplane)
    }
}

pub(crate) fn encode_rows(field: &Field, rows: &[Vec<u32>], msg: &[u32], n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for (&u, row) in msg.iter().zip(rows) {
        if u == 0 {
            continue;
        }
        for (o, &g) in out.iter_mut().zip(row) {
            if g != 0 {
                *o = field.add(*o, field.mul(u, g));
            }
        }
    }
    out
}

/// Exact weight distribution A_0..A_n of a code over a field of the given size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub field_size: u32,
    pub counts: Vec<BigUint>,
}

impl WeightDistribution {
    pub fn from_counts(field_size: u32, counts: Vec<u64>) -> Self {
        WeightDistribution { field_size, counts: counts.into_iter().map(BigUint::from).collect() }
    }

    /// Build from (weight, multiplicity) pairs, merging equal weights.
    pub fn from_pairs(n: usize, field_size: u32, pairs: &[(u64, BigUint)]) -> Result<Self> {
        let mut counts = vec![BigUint::zero(); n + 1];
        for (w, c) in pairs {
            let slot = counts
                .get_mut(*w as usize)
                .ok_or_else(|| Error::Consistency(format!("weight {w} exceeds length {n}")))?;
            *slot += c;
        }
        Ok(WeightDistribution { field_size, counts })
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Dimension implied by the total count, if it is a power of the field size.
    pub fn dimension(&self) -> Option<usize> {
        let total = self.total();
        let q = BigUint::from(self.field_size);
        let mut acc = BigUint::one();
        for k in 0..=self.n().max(1) * 64 {
            if acc == total {
                return Some(k);
            }
            if acc > total {
                return None;
            }
            acc *= &q;
        }
        None
    }

    /// Least positive weight that occurs, or `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&i| !self.counts[i].is_zero())
    }

    pub fn count(&self, w: usize) -> BigUint {
        self.counts.get(w).cloned().unwrap_or_default()
    }

    /// Nonzero entries as (weight, count).
    pub fn support(&self) -> Vec<(usize, BigUint)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }

    /// Number of distinct nonzero weights.
    pub fn weight_count(&self) -> usize {
        self.support().iter().filter(|(w, _)| *w > 0).count()
    }

    /// `1 + 36z^6 + 27z^8` style enumerator.
    pub fn enumerator(&self) -> String {
        self.support()
            .iter()
            .map(|(w, c)| if *w == 0 { c.to_string() } else { format!("{c}z^{w}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Invariants: A_0 = 1 and the total is a power of the field size.
    pub fn is_well_formed(&self) -> bool {
        self.counts.first().is_some_and(|c| c.is_one()) && self.dimension().is_some()
    }

    pub fn as_u64(&self) -> Option<Vec<u64>> {
        self.counts.iter().map(|c| c.to_u64()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct WdRepr {
    n: usize,
    field_size: u32,
    enumerator: String,
    counts: BTreeMap<usize, String>,
}

impl Serialize for WeightDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WdRepr {
            n: self.n(),
            field_size: self.field_size,
            enumerator: self.enumerator(),
            counts: self.support().into_iter().map(|(w, c)| (w, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = WdRepr::deserialize(d)?;
        let mut counts = vec![BigUint::zero(); r.n + 1];
        for (w, c) in r.counts {
            let v: BigUint = c.parse().map_err(serde::de::Error::custom)?;
            *counts.get_mut(w).ok_or_else(|| serde::de::Error::custom("weight exceeds n"))? = v;
        }
        Ok(WeightDistribution { field_size: r.field_size, counts })
    }
}
