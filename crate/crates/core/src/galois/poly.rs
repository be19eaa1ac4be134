use super::conway::CONWAY;
use super::Field;
use crate::error::{Error, Result};

/// Tabulated Conway polynomial, constant term first.
pub fn conway_polynomial(p: u32, n: u32) -> Option<Vec<u32>> {
    CONWAY
        .iter()
        .find(|(pp, nn, _)| *pp == p && *nn == n)
        .map(|(_, _, c)| c.to_vec())
}

pub(crate) fn order_mod_p(g: u32, p: u32) -> u64 {
    let mut x = g as u64 % p as u64;
    if x == 0 {
        return 0;
    }
    let mut k = 1;
    while x != 1 {
        x = x * g as u64 % p as u64;
        k += 1;
    }
    k
}

/// Least monic primitive polynomial of degree `deg` over `base`, comparing
/// coefficient vectors from the leading coefficient down by encoding.
pub fn least_primitive_polynomial(base: &Field, deg: u32) -> Result<Vec<u32>> {
    if deg < 2 {
        return Err(Error::Domain("primitive polynomial search needs degree >= 2".into()));
    }
    let s = base.size() as u64;
    let count = s
        .checked_pow(deg)
        .ok_or_else(|| Error::Resource("primitive polynomial search space too large".into()))?;
    for n in 0..count {
        let mut c = Vec::with_capacity(deg as usize + 1);
        let mut t = n;
        for _ in 0..deg {
            c.push((t % s) as u32);
            t /= s;
        }
        if c[0] == 0 {
            continue;
        }
        c.push(1);
        if Field::try_extend(base, &c)?.is_some() {
            return Ok(c);
        }
    }
    Err(Error::Consistency(format!("no primitive polynomial of degree {deg} over F_{s}")))
}
