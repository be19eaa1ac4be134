use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Griesmer,
    Singleton,
    SpherePacking,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub bound: BoundKind,
    pub satisfied: bool,
    pub meets_with_equality: bool,
    /// Distance from the bound, in the bound's own units (decimal string).
    pub slack: String,
    /// "MDS" / "almost MDS" for the Singleton bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub(crate) fn griesmer_sum(k: u64, d: u64, q: u64) -> u128 {
    let mut sum = 0u128;
    let mut qi = 1u128;
    for i in 0..k {
        if qi >= d as u128 {
            // every remaining term is ceil(d/q^i) = 1
            return sum + (k - i) as u128 * (d > 0) as u128;
        }
        sum += (d as u128).div_ceil(qi);
        qi *= q as u128;
    }
    sum
}

/// Σ_{i ≤ t} C(n, i)(q−1)^i.
fn ball(n: u64, t: u64, q: u64) -> BigUint {
    (0..=t.min(n)).map(|i| binom(n, i) * BigUint::from(q - 1).pow(i as u32)).sum()
}

fn sphere_slack(n: u64, k: u64, d: u64, q: u64) -> BigInt {
    let t = (d.saturating_sub(1)) / 2;
    let room = BigUint::from(q).pow((n.saturating_sub(k)) as u32);
    if k > n {
        return BigInt::from(-1);
    }
    BigInt::from(room) - BigInt::from(ball(n, t, q))
}

/// Griesmer, Singleton and sphere-packing verdicts for an [n, k, d]_q code.
pub fn bound_verdicts(n: u64, k: u64, d: u64, q: u64) -> Vec<BoundVerdict> {
    let g = griesmer_sum(k, d, q) as i128;
    let g_slack = n as i128 - g;
    let defect = n as i128 + 1 - k as i128 - d as i128;
    let s_slack = sphere_slack(n, k, d, q);
    vec![
        BoundVerdict {
            bound: BoundKind::Griesmer,
            satisfied: g_slack >= 0,
            meets_with_equality: g_slack == 0,
            slack: g_slack.to_string(),
            label: None,
        },
        BoundVerdict {
            bound: BoundKind::Singleton,
            satisfied: defect >= 0,
            meets_with_equality: defect == 0,
            slack: defect.to_string(),
            label: match defect {
                0 => Some("MDS".into()),
                1 => Some("almost MDS".into()),
                _ => None,
            },
        },
        BoundVerdict {
            bound: BoundKind::SpherePacking,
            satisfied: s_slack >= BigInt::zero(),
            meets_with_equality: s_slack.is_zero(),
            slack: s_slack.to_string(),
            label: None,
        },
    ]
}

/// Which bounds show that no [n, k, d+1] or [n, k+1, d] code exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Optimality {
    /// Bounds violated by [n, k, d+1].
    pub distance: Vec<BoundKind>,
    /// Bounds violated by [n, k+1, d].
    pub dimension: Vec<BoundKind>,
}

impl Optimality {
    pub fn distance_optimal_by(&self, b: BoundKind) -> bool {
        self.distance.contains(&b)
    }
    pub fn dimension_optimal_by(&self, b: BoundKind) -> bool {
        self.dimension.contains(&b)
    }
}

pub fn optimality_certificate(n: u64, k: u64, d: u64, q: u64) -> Optimality {
    let violated = |n, k, d| -> Vec<BoundKind> {
        bound_verdicts(n, k, d, q).into_iter().filter(|v| !v.satisfied).map(|v| v.bound).collect()
    };
    Optimality { distance: violated(n, k, d + 1), dimension: violated(n, k + 1, d) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn griesmer_matches_direct_sum() {
        for q in [2u64, 3, 4, 5] {
            for k in 1..8 {
                for d in 1..70 {
                    let direct: u128 = (0..k).map(|i| (d as u128).div_ceil((q as u128).pow(i as u32))).sum();
                    assert_eq!(griesmer_sum(k, d, q), direct, "q={q} k={k} d={d}");
                }
            }
        }
    }
}
