//! Finite fields and the tower F_p ⊂ F_q ⊂ F_{q^m}.
//!
//! A [`Field`] stores exp/log tables for one field together with the chain of
//! defining polynomials that produced it. Elements are `u32` encodings of the
//! little-endian coefficient vector over F_p, so the subfield F_q of a tower
//! occupies exactly the encodings `0..q` of the top field.
//!
//! [`FieldTower`] glues three levels together and adds the relative trace and
//! norm maps. [`Elt`] is the checked handle; the raw `u32` kernels on `Field`
//! are what the enumeration code uses.

mod conway;
mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use poly::{conway_polynomial, least_primitive_polynomial};

/// Largest field for which full tables are built.
pub const MAX_FIELD_SIZE: u32 = 1 << 20;

/// Fields up to this size get a precomputed addition table.
const ADD_TABLE_LIMIT: u32 = 256;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn fnv(words: impl IntoIterator<Item = u32>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// One finite field with complete arithmetic tables.
pub struct Field {
    p: u32,
    degree: u32,
    size: u32,
    base_size: u32,
    modulus: Vec<u32>,
    chain: Vec<Vec<u32>>,
    tag: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_tab: Option<Vec<u32>>,
    abs_trace: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("size", &self.size)
            .field("chain", &self.chain)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.p == other.p && self.chain == other.chain
    }
}
impl Eq for Field {}

impl Field {
    /// The prime field F_p, with generator the root of the degree-one Conway polynomial.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p > MAX_FIELD_SIZE {
            return Err(Error::Resource(format!("field size {p} exceeds {MAX_FIELD_SIZE}")));
        }
        let modulus = conway_polynomial(p, 1).unwrap_or_else(|| {
            let g = (1..p)
                .find(|&g| poly::order_mod_p(g, p) == (p - 1) as u64)
                .unwrap_or(1);
            vec![(p - g) % p, 1]
        });
        let g = (p - modulus[0]) % p;
        let n = (p - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for (k, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x as u32;
            log[x as usize] = k as u32;
            x = x * g as u64 % p as u64;
        }
        if p == 2 {
            exp[0] = 1;
            log[1] = 0;
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }
        let mut f = Field {
            p,
            degree: 1,
            size: p,
            base_size: p,
            modulus,
            chain: Vec::new(),
            tag: fnv([p]),
            exp,
            log,
            neg: Vec::new(),
            add_tab: None,
            abs_trace: Vec::new(),
        };
        f.finish_tables();
        Ok(f)
    }

    /// Extend `base` by a monic polynomial (constant term first, base encodings).
    /// The polynomial must be primitive: x must have order |base|^deg − 1.
    pub fn extend(base: &Field, modulus: &[u32]) -> Result<Field> {
        Self::try_extend(base, modulus)?.ok_or_else(|| {
            Error::Domain(format!("modulus {modulus:?} is not primitive over F_{}", base.size))
        })
    }

    pub(crate) fn try_extend(base: &Field, modulus: &[u32]) -> Result<Option<Field>> {
        let deg = modulus.len().saturating_sub(1);
        if deg == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::Domain(format!("modulus {modulus:?} is not monic of positive degree")));
        }
        if modulus.iter().any(|&c| c >= base.size) {
            return Err(Error::Structural(format!("modulus {modulus:?} has entries outside F_{}", base.size)));
        }
        if deg == 1 {
            return Err(Error::Domain("degree-one extensions are the base field itself".into()));
        }
        let size = (base.size as u64).pow(deg as u32);
        if size > MAX_FIELD_SIZE as u64 {
            return Err(Error::Resource(format!("field size {size} exceeds {MAX_FIELD_SIZE}")));
        }
        let size = size as u32;
        let n = (size - 1) as usize;
        let bs = base.size;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![u32::MAX; size as usize];
        let mut coeffs = vec![0u32; deg];
        coeffs[0] = 1;
        let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * bs + d);
        for k in 0..n {
            let e = encode(&coeffs);
            if k > 0 && e == 1 {
                return Ok(None);
            }
            exp[k] = e;
            log[e as usize] = k as u32;
            let top = coeffs[deg - 1];
            coeffs.copy_within(0..deg - 1, 1);
            coeffs[0] = 0;
            if top != 0 {
                for j in 0..deg {
                    let t = base.mul(top, modulus[j]);
                    coeffs[j] = base.sub(coeffs[j], t);
                }
            }
        }
        if encode(&coeffs) != 1 {
            return Ok(None);
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }
        let mut chain = base.chain.clone();
        chain.push(modulus.to_vec());
        let tag = fnv(std::iter::once(base.p).chain(chain.iter().flat_map(|c| {
            std::iter::once(u32::MAX).chain(c.iter().copied())
        })));
        let mut f = Field {
            p: base.p,
            degree: base.degree * deg as u32,
            size,
            base_size: bs,
            modulus: modulus.to_vec(),
            chain,
            tag,
            exp,
            log,
            neg: Vec::new(),
            add_tab: None,
            abs_trace: Vec::new(),
        };
        f.finish_tables();
        Ok(Some(f))
    }

    fn finish_tables(&mut self) {
        let p = self.p;
        self.neg = (0..self.size)
            .map(|a| {
                if p == 2 {
                    a
                } else {
                    self.digitwise(a, 0, |x, _| (p - x) % p)
                }
            })
            .collect();
        if self.size <= ADD_TABLE_LIMIT && p != 2 {
            let s = self.size;
            let mut t = vec![0u32; (s * s) as usize];
            for a in 0..s {
                for b in 0..s {
                    t[(a * s + b) as usize] = self.digitwise(a, b, |x, y| (x + y) % p);
                }
            }
            self.add_tab = Some(t);
        }
        let basis: Vec<u32> = (0..self.degree).map(|i| p.pow(i)).collect();
        let basis_tr: Vec<u32> = basis
            .iter()
            .map(|&e| {
                let mut acc = 0;
                let mut x = e;
                for _ in 0..self.degree {
                    acc = self.add(acc, x);
                    x = self.pow(x, p as u64);
                }
                debug_assert!(acc < p);
                acc
            })
            .collect();
        self.abs_trace = (0..self.size)
            .map(|a| {
                let mut acc = 0u32;
                let mut t = a;
                for tr in &basis_tr {
                    acc = (acc + (t % p) * tr) % p;
                    t /= p;
                }
                acc
            })
            .collect();
    }

    fn digitwise(&self, mut a: u32, mut b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let p = self.p;
        let mut r = 0u32;
        let mut w = 1u32;
        for _ in 0..self.degree {
            r += op(a % p, b % p) * w;
            a /= p;
            b /= p;
            w = w.wrapping_mul(p);
        }
        r
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Size of the field this one was built over (p for single-level fields).
    pub fn base_size(&self) -> u32 {
        self.base_size
    }
    /// Defining polynomial over the base, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Every non-trivial defining polynomial from F_p up to this field.
    pub fn chain(&self) -> &[Vec<u32>] {
        &self.chain
    }
    pub fn tag(&self) -> u64 {
        self.tag
    }
    pub fn is_square_order(&self) -> bool {
        self.degree.is_multiple_of(2)
    }

    /// Descriptor of this field viewed as the top of a tower: a single-step
    /// extension of F_p is reported with l = 1.
    pub fn descriptor(&self) -> FieldDescriptor {
        let prime_mod = |p: u32| {
            conway_polynomial(p, 1).unwrap_or_else(|| Field::prime(p).map(|f| f.modulus.clone()).unwrap_or_default())
        };
        match self.chain.as_slice() {
            [] => FieldDescriptor {
                p: self.p,
                l: 1,
                m: 1,
                modulus_mid: self.modulus.clone(),
                modulus_top: self.modulus.clone(),
            },
            [c] => FieldDescriptor {
                p: self.p,
                l: 1,
                m: c.len() as u32 - 1,
                modulus_mid: prime_mod(self.p),
                modulus_top: c.clone(),
            },
            [a, b, ..] => FieldDescriptor {
                p: self.p,
                l: a.len() as u32 - 1,
                m: b.len() as u32 - 1,
                modulus_mid: a.clone(),
                modulus_top: b.clone(),
            },
        }
    }

    /// Primitive element: the root of the defining polynomial.
    pub fn generator(&self) -> u32 {
        self.exp[if self.size == 2 { 0 } else { 1 }]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_tab {
            t[(a * self.size + b) as usize]
        } else {
            let p = self.p;
            self.digitwise(a, b, |x, y| (x + y) % p)
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            let n = self.size - 1;
            Some(self.exp[((n - self.log[a as usize]) % n) as usize])
        }
    }
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }
    /// Discrete log with respect to [`Field::generator`].
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.size as u64 - 1)) as usize]
    }
    /// Trace to the prime field, as an integer in `0..p`.
    #[inline]
    pub fn abs_trace(&self, a: u32) -> u32 {
        self.abs_trace[a as usize]
    }
    /// x ↦ x^{p^k}.
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(k % self.degree.max(1)))
    }
    /// Quadratic character with η(0) = 0; only defined in odd characteristic.
    pub fn eta(&self, a: u32) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::Domain("quadratic character requires odd characteristic".into()));
        }
        Ok(match self.log(a) {
            None => 0,
            Some(k) if k % 2 == 0 => 1,
            Some(_) => -1,
        })
    }
    /// Embedding of an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size
    }
    /// Coordinates over F_p, lowest digit first.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.degree)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }
}

/// Which level of a tower an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    Prime,
    Mid,
    Top,
}

/// Serializable descriptor pinning the exact field used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub l: u32,
    pub m: u32,
    pub modulus_mid: Vec<u32>,
    pub modulus_top: Vec<u32>,
}

/// F_p ⊂ F_q = F_{p^l} ⊂ F_{q^m}.
///
/// F_q is built from the Conway polynomial C_{p,l}. The top field uses C_{p,m}
/// when l = 1, and otherwise the least primitive polynomial of degree m over F_q
/// (ordering coefficient vectors by their encoding, leading coefficient first).
#[derive(Debug, Clone)]
pub struct FieldTower {
    pub p: u32,
    pub l: u32,
    pub m: u32,
    pub q: u32,
    pub qm: u32,
    prime: Arc<Field>,
    mid: Arc<Field>,
    top: Arc<Field>,
    tr_top_mid: Arc<Vec<u32>>,
    norm_top_mid: Arc<Vec<u32>>,
    tr_mid_prime: Arc<Vec<u32>>,
}

/// Builds F_{p^n} over F_p with the Conway polynomial, or the least primitive one.
pub fn prime_extension(prime: &Field, n: u32) -> Result<Field> {
    let p = prime.characteristic();
    match conway_polynomial(p, n) {
        Some(c) => Field::extend(prime, &c),
        None => {
            let c = least_primitive_polynomial(prime, n)?;
            Field::extend(prime, &c)
        }
    }
}

impl FieldTower {
    pub fn new(p: u32, l: u32, m: u32) -> Result<FieldTower> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if l == 0 || m == 0 {
            return Err(Error::Domain("extension degrees must be positive".into()));
        }
        let total = (p as u64).checked_pow(l * m).filter(|&s| s <= MAX_FIELD_SIZE as u64);
        if total.is_none() {
            return Err(Error::Resource(format!(
                "F_{{{p}^{}}} exceeds the {MAX_FIELD_SIZE}-element ceiling",
                l * m
            )));
        }
        let prime = Arc::new(Field::prime(p)?);
        let mid = if l == 1 { prime.clone() } else { Arc::new(prime_extension(&prime, l)?) };
        let top = if m == 1 {
            mid.clone()
        } else if l == 1 {
            Arc::new(prime_extension(&prime, m)?)
        } else {
            let c = least_primitive_polynomial(&mid, m)?;
            Arc::new(Field::extend(&mid, &c)?)
        };
        Self::assemble(p, l, m, prime, mid, top)
    }

    /// Rebuild a tower from explicit moduli (validated for primitivity).
    pub fn from_descriptor(d: &FieldDescriptor) -> Result<FieldTower> {
        let canonical = FieldTower::new(d.p, d.l, d.m)?;
        if canonical.descriptor() == *d {
            return Ok(canonical);
        }
        let prime = Arc::new(Field::prime(d.p)?);
        if d.l == 1 && d.modulus_mid != prime.modulus {
            return Err(Error::Domain("prime-field modulus must be the degree-one Conway polynomial".into()));
        }
        let check_deg = |c: &[u32], deg: u32, what: &str| -> Result<()> {
            if c.len() as u32 != deg + 1 {
                return Err(Error::Parse(format!("{what} modulus has degree {} but {deg} was declared", c.len() as i64 - 1)));
            }
            Ok(())
        };
        check_deg(&d.modulus_mid, d.l, "mid")?;
        check_deg(&d.modulus_top, d.m, "top")?;
        let mid = if d.l == 1 { prime.clone() } else { Arc::new(Field::extend(&prime, &d.modulus_mid)?) };
        let top = if d.m == 1 {
            if d.modulus_top != vec![mid.neg(mid.generator()), 1] {
                return Err(Error::Domain("degree-one top modulus must be x minus the generator".into()));
            }
            mid.clone()
        } else {
            Arc::new(Field::extend(&mid, &d.modulus_top)?)
        };
        Self::assemble(d.p, d.l, d.m, prime, mid, top)
    }

    fn assemble(p: u32, l: u32, m: u32, prime: Arc<Field>, mid: Arc<Field>, top: Arc<Field>) -> Result<FieldTower> {
        let (q, qm) = (mid.size(), top.size());
        let tr_top_mid: Vec<u32> = (0..qm)
            .map(|x| (0..m).fold((0u32, x), |(acc, y), _| (top.add(acc, y), top.pow(y, q as u64))).0)
            .collect();
        let e = ((qm as u64) - 1) / ((q as u64) - 1);
        let norm_top_mid: Vec<u32> = (0..qm).map(|x| top.pow(x, e)).collect();
        let tr_mid_prime: Vec<u32> = (0..q)
            .map(|x| (0..l).fold((0u32, x), |(acc, y), _| (mid.add(acc, y), mid.pow(y, p as u64))).0)
            .collect();
        if tr_top_mid.iter().chain(norm_top_mid.iter()).any(|&v| v >= q) {
            return Err(Error::Consistency("relative trace/norm left the subfield".into()));
        }
        Ok(FieldTower {
            p,
            l,
            m,
            q,
            qm,
            prime,
            mid,
            top,
            tr_top_mid: Arc::new(tr_top_mid),
            norm_top_mid: Arc::new(norm_top_mid),
            tr_mid_prime: Arc::new(tr_mid_prime),
        })
    }

    /// Tower for q = `q` (a prime power) and degree m.
    pub fn for_q(q: u32, m: u32) -> Result<FieldTower> {
        let (p, l) = prime_power(q).ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
        FieldTower::new(p, l, m)
    }

    pub fn prime_field(&self) -> &Arc<Field> {
        &self.prime
    }
    pub fn mid(&self) -> &Arc<Field> {
        &self.mid
    }
    pub fn top(&self) -> &Arc<Field> {
        &self.top
    }
    pub fn field(&self, level: Level) -> &Arc<Field> {
        match level {
            Level::Prime => &self.prime,
            Level::Mid => &self.mid,
            Level::Top => &self.top,
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        let deg1 = |f: &Field| vec![f.neg(f.generator()), 1];
        FieldDescriptor {
            p: self.p,
            l: self.l,
            m: self.m,
            modulus_mid: if self.l == 1 { self.prime.modulus().to_vec() } else { self.mid.modulus().to_vec() },
            modulus_top: if self.m == 1 { deg1(&self.mid) } else { self.top.modulus().to_vec() },
        }
    }

    /// Raw Tr_{q^m/q}.
    #[inline]
    pub fn tr(&self, x: u32) -> u32 {
        self.tr_top_mid[x as usize]
    }
    /// Raw Norm_{q^m/q}.
    #[inline]
    pub fn nm(&self, x: u32) -> u32 {
        self.norm_top_mid[x as usize]
    }
    /// Raw Tr_{q/p}.
    #[inline]
    pub fn tr_mid(&self, x: u32) -> u32 {
        self.tr_mid_prime[x as usize]
    }

    pub fn elt(&self, level: Level, raw: u32) -> Result<Elt> {
        Elt::new(self.field(level), raw)
    }

    fn expect_top(&self, x: &Elt) -> Result<()> {
        if *x.field != *self.top {
            return Err(Error::Structural(format!(
                "element of F_{} is not in the top field F_{}",
                x.field.size(),
                self.qm
            )));
        }
        Ok(())
    }

    /// Tr_{q^m/q}(x) = x + x^q + … + x^{q^{m−1}}, returned in F_q.
    pub fn trace(&self, x: &Elt) -> Result<Elt> {
        self.expect_top(x)?;
        Ok(Elt { field: self.mid.clone(), raw: self.tr(x.raw) })
    }

    /// Norm_{q^m/q}(x) = x^{(q^m−1)/(q−1)}, returned in F_q.
    pub fn norm(&self, x: &Elt) -> Result<Elt> {
        self.expect_top(x)?;
        Ok(Elt { field: self.mid.clone(), raw: self.nm(x.raw) })
    }

    /// Trace from F_q down to F_p.
    pub fn trace_mid(&self, x: &Elt) -> Result<Elt> {
        if *x.field != *self.mid {
            return Err(Error::Structural("element is not in F_q".into()));
        }
        Ok(Elt { field: self.prime.clone(), raw: self.tr_mid(x.raw) })
    }

    /// η on F_q.
    pub fn quadratic_character(&self, x: &Elt) -> Result<i8> {
        if *x.field != *self.mid {
            return Err(Error::Structural("quadratic character is taken on F_q".into()));
        }
        self.mid.eta(x.raw)
    }

    /// All elements of one level in ascending encoding order.
    pub fn enumerate(&self, level: Level) -> Vec<Elt> {
        let f = self.field(level);
        f.elements().map(|raw| Elt { field: f.clone(), raw }).collect()
    }

    /// Embed an F_q element into the top field.
    pub fn embed(&self, x: &Elt) -> Result<Elt> {
        if *x.field != *self.mid {
            return Err(Error::Structural("only F_q elements embed into the top field".into()));
        }
        Ok(Elt { field: self.top.clone(), raw: x.raw })
    }

    /// View a top-field element lying in F_q as an element of F_q.
    pub fn restrict(&self, x: &Elt) -> Result<Elt> {
        self.expect_top(x)?;
        if self.top.pow(x.raw, self.q as u64) != x.raw {
            return Err(Error::Domain("element does not lie in F_q".into()));
        }
        Ok(Elt { field: self.mid.clone(), raw: x.raw })
    }
}

/// (p, l) with q = p^l.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut l = 0;
    let mut t = q;
    while t.is_multiple_of(p) {
        t /= p;
        l += 1;
    }
    (t == 1).then_some((p, l))
}

/// Element handle tied to its field.
#[derive(Clone)]
pub struct Elt {
    field: Arc<Field>,
    raw: u32,
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elt({} in F_{})", self.raw, self.field.size())
    }
}

impl PartialEq for Elt {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw && *self.field == *other.field
    }
}
impl Eq for Elt {}

impl Elt {
    pub fn new(field: &Arc<Field>, raw: u32) -> Result<Elt> {
        if raw >= field.size() {
            return Err(Error::Structural(format!("encoding {raw} out of range for F_{}", field.size())));
        }
        Ok(Elt { field: field.clone(), raw })
    }
    pub fn zero(field: &Arc<Field>) -> Elt {
        Elt { field: field.clone(), raw: 0 }
    }
    pub fn one(field: &Arc<Field>) -> Elt {
        Elt { field: field.clone(), raw: 1 }
    }
    pub fn raw(&self) -> u32 {
        self.raw
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    fn same(&self, o: &Elt) -> Result<()> {
        if *self.field != *o.field {
            return Err(Error::Structural(format!(
                "operands from different fields (F_{} vs F_{})",
                self.field.size(),
                o.field.size()
            )));
        }
        Ok(())
    }
    fn wrap(&self, raw: u32) -> Elt {
        Elt { field: self.field.clone(), raw }
    }
    pub fn add(&self, o: &Elt) -> Result<Elt> {
        self.same(o)?;
        Ok(self.wrap(self.field.add(self.raw, o.raw)))
    }
    pub fn sub(&self, o: &Elt) -> Result<Elt> {
        self.same(o)?;
        Ok(self.wrap(self.field.sub(self.raw, o.raw)))
    }
    pub fn mul(&self, o: &Elt) -> Result<Elt> {
        self.same(o)?;
        Ok(self.wrap(self.field.mul(self.raw, o.raw)))
    }
    pub fn neg(&self) -> Elt {
        self.wrap(self.field.neg(self.raw))
    }
    pub fn inv(&self) -> Result<Elt> {
        self.field
            .inv(self.raw)
            .map(|r| self.wrap(r))
            .ok_or_else(|| Error::Domain("inverse of zero".into()))
    }
    /// Square-and-multiply power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Elt> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = 1u32;
        let mut b = base.raw;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.field.mul(acc, b);
            }
            b = self.field.mul(b, b);
            k >>= 1;
        }
        Ok(self.wrap(acc))
    }
    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }
}
