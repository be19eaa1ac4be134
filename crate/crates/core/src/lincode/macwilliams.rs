use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::WeightDistribution;
use crate::error::{Error, Result};

/// Krawtchouk values K_j(i) for j = 0..=n, via the three-term recurrence
/// (j+1) K_{j+1} = ((n−j)(s−1) + j − s·i) K_j − (s−1)(n−j+1) K_{j−1}.
pub fn krawtchouk(n: usize, s: u32, i: usize) -> Vec<BigInt> {
    let s = BigInt::from(s);
    let sm1 = &s - 1;
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::one());
    if n == 0 {
        return out;
    }
    out.push(BigInt::from(n) * &sm1 - &s * BigInt::from(i));
    for j in 1..n {
        let a = BigInt::from(n - j) * &sm1 + BigInt::from(j) - &s * BigInt::from(i);
        let b = &sm1 * BigInt::from(n - j + 1);
        let num = a * &out[j] - b * &out[j - 1];
        out.push(num / BigInt::from(j + 1));
    }
    out
}

/// Dual distribution A⊥_j = s^{−k} Σ_i A_i K_j(i).
///
/// Fails if the total is not s^k or any output is negative or fractional,
/// which means the input was not the distribution of a linear code.
pub fn macwilliams_transform(w: &WeightDistribution, k: usize) -> Result<WeightDistribution> {
    let n = w.n();
    let s = w.field_size;
    let size = BigUint::from(s).pow(k as u32);
    if w.total() != size {
        return Err(Error::Consistency(format!("distribution sums to {} but s^k = {size}", w.total())));
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, a) in w.support() {
        let a = BigInt::from_biguint(Sign::Plus, a);
        for (slot, kv) in acc.iter_mut().zip(krawtchouk(n, s, i)) {
            *slot += &a * kv;
        }
    }
    let size = BigInt::from_biguint(Sign::Plus, size);
    let mut counts = Vec::with_capacity(n + 1);
    for (j, v) in acc.into_iter().enumerate() {
        if v.is_negative() {
            return Err(Error::Consistency(format!("dual count A_{j} = {v}/{size} is negative")));
        }
        if !(&v % &size).is_zero() {
            return Err(Error::Consistency(format!("dual count A_{j} = {v}/{size} is not an integer")));
        }
        counts.push((v / &size).to_biguint().expect("nonnegative"));
    }
    if !counts[0].is_one() {
        return Err(Error::Consistency(format!("dual A_0 = {} instead of 1", counts[0])));
    }
    Ok(WeightDistribution { field_size: s, counts })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlessVerdict {
    pub passed: bool,
    /// Index (0..=3) of the first violated moment.
    pub first_failure: Option<usize>,
}

/// The first four Pless power moments, each multiplied through by a power of
/// s so that both sides are integers.
pub fn pless_check(w: &WeightDistribution, k: usize, dual_prefix: [u64; 4]) -> PlessVerdict {
    let n = BigInt::from(w.n());
    let q = BigInt::from(w.field_size);
    let qk = q.pow(k as u32);
    let [_, a1, a2, a3] = dual_prefix.map(BigInt::from);
    let moment = |r: u32| -> BigInt {
        w.support()
            .iter()
            .map(|(j, c)| BigInt::from(*j).pow(r) * BigInt::from_biguint(Sign::Plus, c.clone()))
            .sum()
    };
    let rhs = [
        BigInt::one(),
        &q * &n - &n - &a1,
        (&q - 1) * &n * (&q * &n - &n + 1) - (BigInt::from(2) * &q * &n - &q - BigInt::from(2) * &n + 2) * &a1
            + BigInt::from(2) * &a2,
        (&q - 1) * &n * (&q * &q * &n * &n - BigInt::from(2) * &q * &n * &n + BigInt::from(3) * &q * &n - &q + &n * &n - BigInt::from(3) * &n + 2)
            - (BigInt::from(3) * &q * &q * &n * &n - BigInt::from(3) * &q * &q * &n - BigInt::from(6) * &q * &n * &n
                + BigInt::from(12) * &q * &n
                + &q * &q
                - BigInt::from(6) * &q
                + BigInt::from(3) * &n * &n
                - BigInt::from(9) * &n
                + 6)
                * &a1
            + BigInt::from(6) * (&q * &n - &q - &n + 2) * &a2
            - BigInt::from(6) * &a3,
    ];
    for (r, rhs) in rhs.iter().enumerate() {
        let lhs = moment(r as u32) * q.pow(r as u32);
        if lhs != &qk * rhs {
            return PlessVerdict { passed: false, first_failure: Some(r) };
        }
    }
    PlessVerdict { passed: true, first_failure: None }
}
