//! Codeword enumeration kernels.
//!
//! Messages are walked as vectors over F_p in a modular p-ary Gray code, so
//! consecutive codewords differ by one precomputed generator. The message
//! space is cut into a fixed number of contiguous ranges that are processed in
//! parallel and merged by integer addition.

use rayon::prelude::*;

use super::encode_rows;
use crate::galois::Field;

const CHUNKS: u64 = 64;

struct Steps {
    p: u32,
    dim: usize,
    gens: Vec<Vec<u32>>,
    supports: Vec<Vec<usize>>,
}

impl Steps {
    /// One generator per F_p coordinate: (p^d as a field element) · row_i.
    fn new(field: &Field, basis: &[Vec<u32>]) -> Steps {
        let p = field.characteristic();
        let e = field.degree() as usize;
        let mut gens = Vec::with_capacity(basis.len() * e);
        for row in basis {
            for d in 0..e {
                let unit = p.pow(d as u32);
                gens.push(row.iter().map(|&x| field.mul(unit, x)).collect::<Vec<u32>>());
            }
        }
        let supports = gens
            .iter()
            .map(|g| g.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect())
            .collect();
        Steps { p, dim: basis.len() * e, gens, supports }
    }

    fn total(&self) -> u64 {
        (self.p as u64).pow(self.dim as u32)
    }

    /// Codeword for the Gray image of message index `idx`.
    fn start(&self, field: &Field, n: usize, idx: u64) -> Vec<u32> {
        let p = self.p as u64;
        let mut digits = vec![0u64; self.dim + 1];
        let mut t = idx;
        for d in digits.iter_mut().take(self.dim) {
            *d = t % p;
            t /= p;
        }
        let gray: Vec<u32> = (0..self.dim).map(|j| ((digits[j] + p - digits[j + 1]) % p) as u32).collect();
        encode_rows(field, &self.gens, &gray, n)
    }

    /// Index of the generator added when stepping from `idx` to `idx + 1`.
    #[inline]
    fn step_index(&self, mut idx: u64) -> usize {
        let p = self.p as u64;
        let mut j = 0;
        while idx % p == p - 1 {
            idx /= p;
            j += 1;
        }
        j
    }
}

fn ranges(total: u64) -> Vec<(u64, u64)> {
    let chunks = CHUNKS.min(total).max(1);
    (0..chunks).map(|c| (total * c / chunks, total * (c + 1) / chunks)).collect()
}

pub(crate) fn gray_weights(field: &Field, basis: &[Vec<u32>], n: usize) -> Vec<u64> {
    let steps = Steps::new(field, basis);
    let total = steps.total();
    ranges(total)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut hist = vec![0u64; n + 1];
            if lo == hi {
                return hist;
            }
            let mut cw = steps.start(field, n, lo);
            let mut w = cw.iter().filter(|&&x| x != 0).count();
            hist[w] += 1;
            for idx in lo..hi - 1 {
                let j = steps.step_index(idx);
                let g = &steps.gens[j];
                for &c in &steps.supports[j] {
                    let old = cw[c];
                    let new = field.add(old, g[c]);
                    cw[c] = new;
                    w = w + (new != 0) as usize - (old != 0) as usize;
                }
                hist[w] += 1;
            }
            hist
        })
        .reduce(|| vec![0u64; n + 1], |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        })
}

pub(crate) fn gray_visit(field: &Field, basis: &[Vec<u32>], n: usize, mut visit: impl FnMut(&[u32])) {
    let steps = Steps::new(field, basis);
    let total = steps.total();
    let mut cw = vec![0u32; n];
    visit(&cw);
    for idx in 0..total - 1 {
        let j = steps.step_index(idx);
        let g = &steps.gens[j];
        for &c in &steps.supports[j] {
            cw[c] = field.add(cw[c], g[c]);
        }
        visit(&cw);
    }
}

pub(crate) fn reencode_weights(field: &Field, basis: &[Vec<u32>], n: usize) -> Vec<u64> {
    let s = field.size() as u64;
    let k = basis.len();
    let total = s.pow(k as u32);
    ranges(total)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut hist = vec![0u64; n + 1];
            let mut msg = vec![0u32; k];
            for idx in lo..hi {
                let mut t = idx;
                for u in msg.iter_mut() {
                    *u = (t % s) as u32;
                    t /= s;
                }
                let cw = encode_rows(field, basis, &msg, n);
                hist[cw.iter().filter(|&&x| x != 0).count()] += 1;
            }
            hist
        })
        .reduce(|| vec![0u64; n + 1], |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        })
}
