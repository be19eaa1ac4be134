use std::sync::Arc;

use fwc_core::galois::{conway_polynomial, Elt, Field, FieldTower, Level};
use fwc_core::Error;
use proptest::prelude::*;

// ---------- independent polynomial oracle over F_p ----------

fn pmul(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut r = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    for i in (n..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for j in 0..=n {
                r[i - n + j] = (r[i - n + j] + (p - c) * f[j] % p) % p;
            }
        }
    }
    r.truncate(n);
    r.resize(n, 0);
    r
}

fn ppow(mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut res = vec![0u64; n];
    res[0] = 1;
    let mut base = vec![0u64; n];
    if n > 1 {
        base[1] = 1;
    } else {
        base[0] = (p - f[0]) % p;
    }
    while e > 0 {
        if e & 1 == 1 {
            res = pmul(&res, &base, f, p);
        }
        base = pmul(&base, &base, f, p);
        e >>= 1;
    }
    res
}

fn is_one(v: &[u64]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&x| x == 0)
}

fn factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive(f: &[u64], p: u64) -> bool {
    let n = f.len() as u32 - 1;
    let order = p.pow(n) - 1;
    is_one(&ppow(order, f, p)) && factors(order).iter().all(|r| !is_one(&ppow(order / r, f, p)))
}

/// Brute-force Conway polynomial from the definition.
fn conway_oracle(p: u64, n: u32, lower: &dyn Fn(u32) -> Vec<u64>) -> Vec<u64> {
    let count = p.pow(n);
    for idx in 0..count {
        // alpha_{n-1} is the most significant digit
        let mut alphas = vec![0u64; n as usize];
        let mut t = idx;
        for k in (0..n as usize).rev() {
            alphas[k] = t % p;
            t /= p;
        }
        let mut f = vec![0u64; n as usize + 1];
        f[n as usize] = 1;
        for (k, &a) in alphas.iter().enumerate() {
            let i = n as usize - 1 - k;
            let sign_neg = (n as usize - i) % 2 == 1;
            f[i] = if sign_neg { (p - a) % p } else { a };
        }
        if f[0] == 0 || !primitive(&f, p) {
            continue;
        }
        let compatible = (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| {
            let e = (p.pow(n) - 1) / (p.pow(d) - 1);
            let y = ppow(e, &f, p);
            let c = lower(d);
            let mut acc = vec![0u64; n as usize];
            for &coef in c.iter().rev() {
                acc = pmul(&acc, &y, &f, p);
                acc[0] = (acc[0] + coef) % p;
            }
            acc.iter().all(|&x| x == 0)
        });
        if compatible {
            return f;
        }
    }
    panic!("no Conway polynomial found for ({p},{n})");
}

#[test]
fn conway_table_matches_definition() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut n = 1u32;
        while p.pow(n) <= 4096 {
            let lower = |d: u32| -> Vec<u64> {
                conway_polynomial(p as u32, d).unwrap().iter().map(|&c| c as u64).collect()
            };
            let expect = conway_oracle(p, n, &lower);
            let got: Vec<u64> = conway_polynomial(p as u32, n).unwrap().iter().map(|&c| c as u64).collect();
            assert_eq!(got, expect, "C({p},{n})");
            n += 1;
        }
    }
}

#[test]
fn conway_table_frozen_values() {
    assert_eq!(conway_polynomial(2, 2).unwrap(), vec![1, 1, 1]);
    assert_eq!(conway_polynomial(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
    assert_eq!(conway_polynomial(2, 8).unwrap(), vec![1, 0, 1, 1, 1, 0, 0, 0, 1]);
    assert_eq!(conway_polynomial(3, 2).unwrap(), vec![2, 2, 1]);
    assert_eq!(conway_polynomial(3, 3).unwrap(), vec![1, 2, 0, 1]);
    assert_eq!(conway_polynomial(5, 2).unwrap(), vec![2, 4, 1]);
    assert_eq!(conway_polynomial(7, 1).unwrap(), vec![4, 1]);
}

// ---------- naive arithmetic oracle through the modulus chain ----------

fn naive_mul(p: u32, chain: &[Vec<u32>], a: u32, b: u32) -> u32 {
    let Some((modulus, lower)) = chain.split_last() else {
        return (a as u64 * b as u64 % p as u64) as u32;
    };
    let s: u32 = lower.iter().fold(p, |acc, m| acc.pow(m.len() as u32 - 1));
    let deg = modulus.len() - 1;
    let dec = |mut x: u32| -> Vec<u32> {
        (0..deg)
            .map(|_| {
                let d = x % s;
                x /= s;
                d
            })
            .collect()
    };
    let add = |x: u32, y: u32| naive_add(p, x, y);
    let (da, db) = (dec(a), dec(b));
    let mut r = vec![0u32; 2 * deg];
    for i in 0..deg {
        for j in 0..deg {
            r[i + j] = add(r[i + j], naive_mul(p, lower, da[i], db[j]));
        }
    }
    for i in (deg..2 * deg).rev() {
        let c = r[i];
        if c != 0 {
            for j in 0..=deg {
                let t = naive_mul(p, lower, c, modulus[j]);
                r[i - deg + j] = naive_add(p, r[i - deg + j], naive_neg(p, t));
            }
        }
    }
    r[..deg].iter().rev().fold(0, |acc, &d| acc * s + d)
}

fn naive_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    let (mut r, mut w) = (0, 1);
    while a > 0 || b > 0 {
        r += ((a % p + b % p) % p) * w;
        a /= p;
        b /= p;
        w *= p;
    }
    r
}

fn naive_neg(p: u32, mut a: u32) -> u32 {
    let (mut r, mut w) = (0, 1);
    while a > 0 {
        r += ((p - a % p) % p) * w;
        a /= p;
        w *= p;
    }
    r
}

fn towers() -> Vec<FieldTower> {
    [(2, 1, 2), (2, 1, 3), (2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 1, 2), (3, 1, 3), (3, 2, 2), (5, 1, 2), (5, 2, 2), (7, 1, 2), (2, 1, 5), (2, 4, 2)]
        .iter()
        .map(|&(p, l, m)| FieldTower::new(p, l, m).unwrap())
        .collect()
}

#[test]
fn arithmetic_matches_naive_polynomials() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for t in towers() {
        for f in [t.mid(), t.top()] {
            let s = f.size();
            for _ in 0..1000 {
                let a = rng.gen_range(0..s);
                let b = rng.gen_range(0..s);
                assert_eq!(f.add(a, b), naive_add(t.p, a, b));
                assert_eq!(f.mul(a, b), naive_mul(t.p, f.chain(), a, b), "F_{s}: {a}*{b}");
            }
        }
    }
}

#[test]
fn f4_examples() {
    let t = FieldTower::new(2, 1, 2).unwrap();
    let w = t.elt(Level::Top, 2).unwrap();
    assert_eq!(w.mul(&w).unwrap().raw(), 3);
    assert_eq!(t.trace(&w).unwrap().raw(), 1);
    let all: Vec<u32> = t.enumerate(Level::Top).iter().map(|e| e.raw()).collect();
    assert_eq!(all, vec![0, 1, 2, 3]);
    let one = Elt::one(t.top());
    assert_eq!(t.trace(&one).unwrap().raw(), 0);
    for x in t.enumerate(Level::Top) {
        assert!(x.add(&x).unwrap().is_zero());
    }
}

#[test]
fn f9_norm_of_generator() {
    let t = FieldTower::new(3, 1, 2).unwrap();
    let g = t.elt(Level::Top, t.top().generator()).unwrap();
    let n = t.norm(&g).unwrap();
    assert_eq!(n.raw(), 2);
    assert_eq!(g.pow(4).unwrap().raw(), 2);
    assert_eq!(t.norm(&Elt::zero(t.top())).unwrap().raw(), 0);
    assert_eq!(t.norm(&Elt::one(t.top())).unwrap().raw(), 1);
    assert_eq!(g.mul(&g.inv().unwrap()).unwrap().raw(), 1);
}

#[test]
fn odd_degree_trace_of_one() {
    for m in [1u32, 3, 5, 7] {
        let t = FieldTower::new(2, 1, m).unwrap();
        assert_eq!(t.tr(1), m % 2);
    }
    let t = FieldTower::new(3, 1, 3).unwrap();
    assert_eq!(t.tr(1), 0);
}

#[test]
fn quadratic_character_values() {
    let t = FieldTower::new(3, 1, 1).unwrap();
    let f = t.mid();
    assert_eq!(f.eta(0).unwrap(), 0);
    assert_eq!(f.eta(1).unwrap(), 1);
    assert_eq!(f.eta(2).unwrap(), -1);
    let t2 = FieldTower::new(2, 2, 1).unwrap();
    assert!(matches!(t2.mid().eta(1), Err(Error::Domain(_))));
}

#[test]
fn errors_are_classified() {
    let a = FieldTower::new(2, 1, 2).unwrap();
    let b = FieldTower::new(2, 1, 3).unwrap();
    let x = Elt::one(a.top());
    let y = Elt::one(b.top());
    assert!(matches!(x.add(&y), Err(Error::Structural(_))));
    assert!(matches!(x.mul(&y), Err(Error::Structural(_))));
    assert!(matches!(Elt::zero(a.top()).inv(), Err(Error::Domain(_))));
    assert!(matches!(a.trace(&Elt::one(a.mid())), Err(Error::Structural(_))));
    // same size, different construction
    let c = FieldTower::new(2, 2, 2).unwrap();
    let d = FieldTower::new(2, 1, 4).unwrap();
    assert!(matches!(Elt::one(c.top()).add(&Elt::one(d.top())), Err(Error::Structural(_))));
    assert!(matches!(FieldTower::new(2, 1, 21), Err(Error::Resource(_))));
    assert!(matches!(FieldTower::new(4, 1, 1), Err(Error::Domain(_))));
}

#[test]
fn pow_edge_cases() {
    let t = FieldTower::new(5, 1, 2).unwrap();
    for x in t.enumerate(Level::Top) {
        assert_eq!(x.pow(0).unwrap().raw(), 1);
        if !x.is_zero() {
            assert_eq!(x.pow(-1).unwrap(), x.inv().unwrap());
            assert_eq!(x.pow(24).unwrap().raw(), 1);
        }
    }
}

#[test]
fn log_table_generator_is_primitive() {
    for t in towers() {
        for f in [t.mid(), t.top()] {
            let g = f.generator();
            let mut x = g;
            let mut k = 1u32;
            while x != 1 {
                x = f.mul(x, g);
                k += 1;
            }
            assert_eq!(k, f.size() - 1);
            for a in 1..f.size() {
                assert_eq!(f.exp(f.log(a).unwrap() as u64), a);
            }
        }
    }
}

#[test]
fn trace_and_norm_lie_in_subfield() {
    for t in towers() {
        let top = t.top();
        for x in 0..t.qm {
            let tr = t.tr(x);
            let nm = t.nm(x);
            assert_eq!(top.pow(tr, t.q as u64), tr);
            assert_eq!(top.pow(nm, t.q as u64), nm);
            let direct = (0..t.m).fold((0u32, x), |(acc, y), _| (top.add(acc, y), top.pow(y, t.q as u64))).0;
            assert_eq!(tr, direct);
        }
    }
}

#[test]
fn trace_transitivity() {
    for t in towers().into_iter().chain([FieldTower::new(2, 2, 6).unwrap(), FieldTower::new(2, 3, 4).unwrap()]) {
        if t.qm > 4096 {
            continue;
        }
        for x in 0..t.qm {
            assert_eq!(t.top().abs_trace(x), t.tr_mid(t.tr(x)), "tower {:?}", t.descriptor());
        }
    }
}

#[test]
fn norm_multiplicative() {
    for t in towers() {
        if t.qm > 256 {
            continue;
        }
        let f = t.top();
        for x in 0..t.qm {
            for y in 0..t.qm {
                assert_eq!(t.nm(f.mul(x, y)), t.mid().mul(t.nm(x), t.nm(y)));
            }
        }
    }
}

#[test]
fn eta_multiplicative_small_fields() {
    for q in [3u32, 5, 7, 9, 11, 13, 25, 27, 49, 81, 121, 125] {
        let f = FieldTower::for_q(q, 1).unwrap().mid().clone();
        for x in 1..q {
            for y in 1..q {
                assert_eq!(f.eta(f.mul(x, y)).unwrap(), f.eta(x).unwrap() * f.eta(y).unwrap());
            }
        }
        let squares = (1..q).filter(|&x| f.eta(x).unwrap() == 1).count();
        assert_eq!(squares as u32, (q - 1) / 2);
    }
}

#[test]
fn descriptor_round_trip() {
    let t = FieldTower::new(2, 2, 2).unwrap();
    let d = t.descriptor();
    let s = serde_json::to_string(&d).unwrap();
    assert!(s.starts_with("{\"p\":2,\"l\":2,\"m\":2,\"modulus_mid\":[1,1,1],\"modulus_top\":"));
    let back: fwc_core::galois::FieldDescriptor = serde_json::from_str(&s).unwrap();
    assert_eq!(back, d);
    let t1 = FieldTower::new(3, 1, 1).unwrap();
    assert!(Arc::ptr_eq(t1.mid(), t1.top()));
}

#[test]
fn extend_rejects_non_primitive() {
    let f2 = Field::prime(2).unwrap();
    // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
    assert!(matches!(Field::extend(&f2, &[1, 1, 1, 1, 1]), Err(Error::Domain(_))));
    assert!(Field::extend(&f2, &[1, 1, 0, 0, 1]).is_ok());
}

fn tower_strategy() -> impl Strategy<Value = (u32, u32, u32)> {
    prop_oneof![Just((2, 1, 4)), Just((2, 2, 3)), Just((3, 1, 3)), Just((3, 2, 2)), Just((5, 1, 2)), Just((2, 1, 9))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn field_axioms((p, l, m) in tower_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let t = FieldTower::new(p, l, m).unwrap();
        let f = t.top();
        let (a, b, c) = (a % f.size(), b % f.size(), c % f.size());
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        // trace is F_q-linear
        let s = a % t.q;
        prop_assert_eq!(t.tr(f.add(f.mul(s, b), c)), t.mid().add(t.mid().mul(s, t.tr(b)), t.tr(c)));
    }
}
