//! Support designs of fixed-weight codewords: extraction, t-design
//! verification, complements, the Assmus–Mattson hypothesis audit and export.

use std::collections::HashSet;

use serde::Serialize;

use crate::lincode::{rank_and_rref, LinearCode, WeightDistribution};
use crate::{Error, Result};

mod theorems;

pub use theorems::{verify_design_theorems, DesignClaim, DesignMethod, DesignOptions, DesignReport};

/// Largest C(n, t) the containment count will tabulate.
pub const MAX_T_SUBSETS: u64 = 1 << 22;
/// Largest C(n, κ) the dual support search will scan.
pub const MAX_SEARCH_SUBSETS: u64 = 1_000_000;

/// Points 0..n and a deduplicated set of κ-subsets, each sorted, in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignInstance {
    pub n: usize,
    pub kappa: usize,
    pub blocks: Vec<Vec<usize>>,
    /// How many codewords the blocks came from (0 when not from a code).
    pub codewords: u64,
}

impl DesignInstance {
    /// Validates sizes and ranges, then sorts and dedups the blocks.
    pub fn new(n: usize, kappa: usize, blocks: Vec<Vec<usize>>) -> Result<DesignInstance> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            b.dedup();
            if b.len() != kappa || b.last().is_some_and(|&x| x >= n) {
                return Err(Error::Structural(format!("block {b:?} is not a {kappa}-subset of 0..{n}")));
            }
            if seen.insert(b.clone()) {
                out.push(b);
            }
        }
        out.sort_unstable();
        Ok(DesignInstance { n, kappa, blocks: out, codewords: 0 })
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// A design together with verified t and λ; serializes as the export format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifiedDesign {
    pub n: usize,
    pub t: usize,
    pub kappa: usize,
    pub lambda: u64,
    pub blocks: Vec<Vec<usize>>,
}

impl VerifiedDesign {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// One block per line, indices separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn is_steiner(&self) -> bool {
        self.t >= 2 && self.lambda == 1
    }
}

/// C(n, k) in 128 bits; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn support_key(word: &[u32]) -> Vec<u64> {
    let mut key = vec![0u64; word.len().div_ceil(64)];
    for (i, &x) in word.iter().enumerate() {
        if x != 0 {
            key[i / 64] |= 1 << (i % 64);
        }
    }
    key
}

fn key_to_block(key: &[u64]) -> Vec<usize> {
    let mut b = Vec::new();
    for (w, &bits) in key.iter().enumerate() {
        let mut bits = bits;
        while bits != 0 {
            b.push(w * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    b
}

/// Supports of all weight-κ codewords, deduplicated.
pub fn supports_of_weight(code: &LinearCode, kappa: usize, budget: u64) -> Result<DesignInstance> {
    let mut keys = HashSet::new();
    let mut codewords = 0u64;
    code.for_each_codeword(budget, |w| {
        if w.iter().filter(|&&x| x != 0).count() == kappa {
            codewords += 1;
            keys.insert(support_key(w));
        }
    })?;
    if codewords == 0 {
        return Err(Error::EmptyDesign(format!("no codewords of weight {kappa} in a [{}, {}] code", code.n(), code.k())));
    }
    let mut blocks: Vec<Vec<usize>> = keys.iter().map(|k| key_to_block(k)).collect();
    blocks.sort_unstable();
    Ok(DesignInstance { n: code.n(), kappa, blocks, codewords })
}

/// Lexicographic successor of a sorted k-subset of 0..n.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Supports of the minimum-weight codewords of C⊥ without enumerating C⊥.
///
/// When κ is the minimum distance of C⊥, a κ-set S of coordinates carries
/// s^{κ − rank G_S} − 1 dual codewords, all with support exactly S. The
/// returned `codewords` is that total and must equal A⊥_κ.
pub fn dual_min_weight_supports(code: &LinearCode, kappa: usize) -> Result<DesignInstance> {
    let n = code.n();
    let subsets = binomial(n as u64, kappa as u64).unwrap_or(u128::MAX);
    if kappa == 0 || subsets > MAX_SEARCH_SUBSETS as u128 {
        return Err(Error::Resource(format!(
            "support search over C({n}, {kappa}) = {subsets} subsets exceeds {MAX_SEARCH_SUBSETS}"
        )));
    }
    let field = code.field();
    let s = field.size() as u64;
    let g = code.basis();
    let mut blocks = Vec::new();
    let mut codewords = 0u64;
    let mut c: Vec<usize> = (0..kappa).collect();
    loop {
        // Columns of G restricted to S, as rows.
        let rows: Vec<Vec<u32>> = c.iter().map(|&j| g.iter().map(|r| r[j]).collect()).collect();
        let (rank, _, _) = rank_and_rref(field, &rows);
        if rank < kappa {
            codewords += s.pow((kappa - rank) as u32) - 1;
            blocks.push(c.clone());
        }
        if !next_combination(&mut c, n) {
            break;
        }
    }
    if blocks.is_empty() {
        return Err(Error::EmptyDesign(format!("no dual codewords of weight {kappa}")));
    }
    Ok(DesignInstance { n, kappa, blocks, codewords })
}

/// Colex rank of a sorted subset.
fn colex_rank(c: &[usize], binom: &[Vec<u64>]) -> usize {
    c.iter().enumerate().map(|(i, &x)| binom[x][i + 1] as usize).sum()
}

/// Outcome of counting t-subset containments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DesignVerdict {
    Design { lambda: u64 },
    /// The first t-subset (lexicographically) and the first one whose count
    /// differs from it.
    NotADesign { first: Vec<usize>, first_count: u64, other: Vec<usize>, other_count: u64 },
}

/// Counts, for every t-subset, the blocks containing it.
pub fn check_t_design(d: &DesignInstance, t: usize) -> Result<DesignVerdict> {
    let (n, kappa) = (d.n, d.kappa);
    if t > kappa || kappa > n {
        return Err(Error::Domain(format!("need t <= kappa <= n, got t = {t}, kappa = {kappa}, n = {n}")));
    }
    let total = binomial(n as u64, t as u64).unwrap_or(u128::MAX);
    if total > MAX_T_SUBSETS as u128 {
        return Err(Error::Resource(format!("C({n}, {t}) t-subsets exceed {MAX_T_SUBSETS}")));
    }
    let binom: Vec<Vec<u64>> =
        (0..=n).map(|a| (0..=t).map(|b| binomial(a as u64, b as u64).expect("bounded") as u64).collect()).collect();
    let mut counts = vec![0u64; total as usize];
    let mut sub: Vec<usize> = (0..t).collect();
    for block in &d.blocks {
        if t == 0 {
            counts[0] += 1;
            continue;
        }
        // Every t-subset of the block via index combinations.
        let mut idx: Vec<usize> = (0..t).collect();
        loop {
            for (s, &i) in sub.iter_mut().zip(&idx) {
                *s = block[i];
            }
            counts[colex_rank(&sub, &binom)] += 1;
            if !next_combination(&mut idx, kappa) {
                break;
            }
        }
    }
    let mut c: Vec<usize> = (0..t).collect();
    let mut first: Option<(Vec<usize>, u64)> = None;
    loop {
        let v = counts[colex_rank(&c, &binom)];
        match &first {
            None => first = Some((c.clone(), v)),
            Some((f, fv)) if *fv != v => {
                return Ok(DesignVerdict::NotADesign { first: f.clone(), first_count: *fv, other: c, other_count: v });
            }
            _ => {}
        }
        if t == 0 || !next_combination(&mut c, n) {
            break;
        }
    }
    Ok(DesignVerdict::Design { lambda: first.map_or(0, |f| f.1) })
}

/// λ if `d` is a t-design, otherwise a `NotADesign` error naming the witness.
pub fn verify_t_design(d: &DesignInstance, t: usize) -> Result<u64> {
    match check_t_design(d, t)? {
        DesignVerdict::Design { lambda } => Ok(lambda),
        DesignVerdict::NotADesign { first, first_count, other, other_count } => Err(Error::NotADesign(format!(
            "{first:?} lies in {first_count} blocks but {other:?} lies in {other_count}"
        ))),
    }
}

/// Verifies and packages `d` as a t-design.
pub fn verified(d: &DesignInstance, t: usize) -> Result<VerifiedDesign> {
    let lambda = verify_t_design(d, t)?;
    Ok(VerifiedDesign { n: d.n, t, kappa: d.kappa, lambda, blocks: d.blocks.clone() })
}

/// Blocks replaced by their complements; κ becomes n − κ.
pub fn complement_design(d: &DesignInstance) -> DesignInstance {
    let blocks = d
        .blocks
        .iter()
        .map(|b| {
            let mut inside = vec![false; d.n];
            for &x in b {
                inside[x] = true;
            }
            (0..d.n).filter(|&x| !inside[x]).collect()
        })
        .collect();
    let mut out = DesignInstance::new(d.n, d.n - d.kappa, blocks).expect("complements are well formed");
    out.codewords = 0;
    out
}

/// 𝔟·C(κ, t) = λ·C(n, t).
pub fn design_count_identity(blocks: u64, n: usize, kappa: usize, t: usize, lambda: u64) -> bool {
    match (binomial(kappa as u64, t as u64), binomial(n as u64, t as u64)) {
        (Some(a), Some(b)) => (blocks as u128).checked_mul(a) == (lambda as u128).checked_mul(b),
        _ => false,
    }
}

/// λ forced by the count identity from 𝔟 blocks, if integral.
pub fn lambda_from_blocks(blocks: u128, n: usize, kappa: usize, t: usize) -> Option<u64> {
    let num = blocks.checked_mul(binomial(kappa as u64, t as u64)?)?;
    let den = binomial(n as u64, t as u64)?;
    (den != 0 && num % den == 0).then(|| (num / den) as u64)
}

/// Which code plays the role of C in the Assmus–Mattson hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Code,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmAudit {
    /// The code taken as C in the hypothesis.
    pub orientation: Side,
    pub t: usize,
    pub d: usize,
    /// Nonzero weights of the other code in [1, n − t].
    pub s: usize,
    /// Weight range of the claimed side the conclusion covers.
    pub covered: (usize, usize),
    pub holds: bool,
}

/// Largest w ≤ n with w − ⌊(w + q − 2)/(q − 1)⌋ < d.
fn am_w(n: usize, d: usize, q: u64) -> usize {
    let q = q as usize;
    (0..=n).rev().find(|&w| w - (w + q - 2) / (q - 1) < d).unwrap_or(0)
}

/// Checks that the Assmus–Mattson theorem predicts a t-design on the weight-κ
/// codewords of `side`, trying C and C⊥ in turn as the hypothesis' code.
pub fn assmus_mattson_audit(code: &WeightDistribution, dual: &WeightDistribution, t: usize, side: Side, kappa: usize) -> AmAudit {
    let n = code.n();
    let q = code.field_size as u64;
    let nonzero = |w: &WeightDistribution| -> Vec<usize> { w.support().into_iter().map(|(i, _)| i).filter(|&i| i > 0).collect() };
    let mut first = None;
    for orientation in [Side::Code, Side::Dual] {
        let (c, cd) = if orientation == Side::Code { (code, dual) } else { (dual, code) };
        let d = nonzero(c).first().copied().unwrap_or(0);
        let dd = nonzero(cd).first().copied().unwrap_or(0);
        let s = nonzero(cd).into_iter().filter(|&i| i <= n.saturating_sub(t)).count();
        let hypothesis = t < d && s + t <= d;
        // The claimed side is C (first bullet) or C⊥ (second bullet) of this orientation.
        let covered = if side == orientation { (d, am_w(n, d, q)) } else { (dd, n.saturating_sub(t).min(am_w(n, dd, q))) };
        let holds = hypothesis && covered.0 <= kappa && kappa <= covered.1;
        let audit = AmAudit { orientation, t, d, s, covered, holds };
        if holds {
            return audit;
        }
        first.get_or_insert(audit);
    }
    first.expect("two orientations tried")
}
