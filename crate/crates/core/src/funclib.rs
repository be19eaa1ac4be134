//! The functions f, g feeding the constructions, with exact Walsh spectra and
//! almost-bent / bent classification.
//!
//! Every [`FuncSpec`] evaluates to an element of F_q. Kinds built on a map
//! F_{2^m} → F_{2^m} (monomials, vectorial tables) are classified through that
//! vectorial map; the others through their Boolean values.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{prime_extension, Elt, Field, FieldTower};

/// Largest m for Boolean spectra.
pub const MAX_BOOLEAN_M: u32 = 20;
/// Largest m for vectorial spectra (2^{2m} pairs).
pub const MAX_VECTORIAL_M: u32 = 12;

fn one() -> u64 {
    1
}
fn one32() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FuncSpec {
    /// Tr_{q^m/q}(x).
    Trace,
    /// Tr_{q^m/q}(x²).
    TraceOfSquare,
    /// Norm_{q^m/q}(x).
    Norm,
    /// Tr_{2^m/2}(x^t); classified through A(x) = x^t.
    TraceOfMonomial { t: u64 },
    /// Tr_{2^s/2}(u·(v^pi_exp + shift)) + complement, where x ↦ (u, v) splits the
    /// m = 2s coordinates of x into its low and high halves.
    BentMaioranaMcFarland {
        #[serde(default = "one")]
        pi_exp: u64,
        #[serde(default)]
        shift: u32,
        #[serde(default)]
        complement: bool,
    },
    /// Tr_{2^m/2}(coeff·x^t).
    BentMonomial {
        t: u64,
        #[serde(default = "one32")]
        coeff: u32,
    },
    /// Values listed in encoding order of x. With `vectorial` the entries are
    /// elements of F_{2^m} and the function is Tr(values[x]); otherwise they are
    /// elements of F_q.
    ExplicitTable {
        values: Vec<u32>,
        #[serde(default)]
        vectorial: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
pub enum FuncClass {
    AlmostBent,
    Bent,
    Linear,
    Other,
}

impl FuncSpec {
    fn needs_binary(&self) -> bool {
        !matches!(self, FuncSpec::Trace | FuncSpec::TraceOfSquare | FuncSpec::Norm)
            && !matches!(self, FuncSpec::ExplicitTable { vectorial: false, .. })
    }

    /// True if the Walsh view of this function is a map F_{2^m} → F_{2^m}.
    pub fn is_vectorial(&self) -> bool {
        matches!(self, FuncSpec::TraceOfMonomial { .. } | FuncSpec::ExplicitTable { vectorial: true, .. })
    }

    fn check(&self, tower: &FieldTower) -> Result<()> {
        if self.needs_binary() && tower.q != 2 {
            return Err(Error::Spec(format!("{} requires q = 2, got q = {}", self.name(), tower.q)));
        }
        match self {
            FuncSpec::BentMaioranaMcFarland { pi_exp, shift, .. } => {
                if !tower.m.is_multiple_of(2) {
                    return Err(Error::Spec("Maiorana–McFarland bent functions need even m".into()));
                }
                let s = tower.m / 2;
                let order = (1u64 << s) - 1;
                if order > 1 && gcd(*pi_exp, order) != 1 {
                    return Err(Error::Spec(format!("v^{pi_exp} is not a permutation of F_{{2^{s}}}")));
                }
                if *shift >= 1 << s {
                    return Err(Error::Spec(format!("shift {shift} is not an element of F_{{2^{s}}}")));
                }
            }
            FuncSpec::BentMonomial { coeff, .. } if *coeff >= tower.qm => {
                return Err(Error::Spec(format!("coefficient {coeff} is not an element of F_{}", tower.qm)));
            }
            FuncSpec::ExplicitTable { values, vectorial } => {
                if values.len() != tower.qm as usize {
                    return Err(Error::Spec(format!("table has {} entries, expected {}", values.len(), tower.qm)));
                }
                let bound = if *vectorial { tower.qm } else { tower.q };
                if values.iter().any(|&v| v >= bound) {
                    return Err(Error::Spec(format!("table entry outside F_{bound}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            FuncSpec::Trace => "Tr(x)".into(),
            FuncSpec::TraceOfSquare => "Tr(x^2)".into(),
            FuncSpec::Norm => "Norm(x)".into(),
            FuncSpec::TraceOfMonomial { t } => format!("Tr(x^{t})"),
            FuncSpec::BentMaioranaMcFarland { pi_exp, shift, complement } => {
                format!("MM(pi=v^{pi_exp}, shift={shift}{})", if *complement { ", +1" } else { "" })
            }
            FuncSpec::BentMonomial { t, coeff } => format!("Tr({coeff}*x^{t})"),
            FuncSpec::ExplicitTable { vectorial, .. } => {
                if *vectorial { "Tr(A(x)) table".into() } else { "table".into() }
            }
        }
    }

    /// Values f(x) ∈ F_q for every x of the top field, in encoding order.
    pub fn table(&self, tower: &FieldTower) -> Result<Vec<u32>> {
        self.check(tower)?;
        let top = tower.top();
        let qm = tower.qm;
        Ok(match self {
            FuncSpec::Trace => (0..qm).map(|x| tower.tr(x)).collect(),
            FuncSpec::TraceOfSquare => (0..qm).map(|x| tower.tr(top.mul(x, x))).collect(),
            FuncSpec::Norm => (0..qm).map(|x| tower.nm(x)).collect(),
            FuncSpec::TraceOfMonomial { t } => (0..qm).map(|x| tower.tr(top.pow(x, *t))).collect(),
            FuncSpec::BentMonomial { t, coeff } => {
                (0..qm).map(|x| tower.tr(top.mul(*coeff, top.pow(x, *t)))).collect()
            }
            FuncSpec::BentMaioranaMcFarland { pi_exp, shift, complement } => {
                let s = tower.m / 2;
                let prime = tower.prime_field();
                let half: std::sync::Arc<Field> =
                    if s == 1 { prime.clone() } else { std::sync::Arc::new(prime_extension(prime, s)?) };
                let mask = (1u32 << s) - 1;
                (0..qm)
                    .map(|x| {
                        let (u, v) = (x & mask, x >> s);
                        let pv = half.add(half.pow(v, *pi_exp), *shift);
                        half.abs_trace(half.mul(u, pv)) ^ (*complement as u32)
                    })
                    .collect()
            }
            FuncSpec::ExplicitTable { values, vectorial } => {
                if *vectorial {
                    values.iter().map(|&a| tower.tr(a)).collect()
                } else {
                    values.clone()
                }
            }
        })
    }

    /// The map F_{2^m} → F_{2^m} behind a vectorial kind.
    pub fn vectorial_table(&self, tower: &FieldTower) -> Result<Vec<u32>> {
        self.check(tower)?;
        match self {
            FuncSpec::TraceOfMonomial { t } => Ok((0..tower.qm).map(|x| tower.top().pow(x, *t)).collect()),
            FuncSpec::ExplicitTable { values, vectorial: true } => Ok(values.clone()),
            _ => Err(Error::Domain(format!("{} has no vectorial form", self.name()))),
        }
    }

    /// f(x) as an element of F_q.
    pub fn eval(&self, tower: &FieldTower, x: &Elt) -> Result<Elt> {
        if **x.field() != **tower.top() {
            return Err(Error::Structural("argument is not in the top field".into()));
        }
        let v = self.table(tower)?[x.raw() as usize];
        tower.elt(crate::galois::Level::Mid, v)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact Walsh spectrum.
///
/// Boolean: `values[b]` = W_f(b). Vectorial: `values[(a − 1)·2^m + b]` =
/// W_F(a, b) for a ≠ 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalshSpectrum {
    pub m: u32,
    pub vectorial: bool,
    #[serde(skip)]
    pub values: Vec<i64>,
    pub histogram: BTreeMap<i64, u64>,
}

impl WalshSpectrum {
    fn new(m: u32, vectorial: bool, values: Vec<i64>) -> Self {
        let mut histogram = BTreeMap::new();
        for &v in &values {
            *histogram.entry(v).or_insert(0) += 1;
        }
        WalshSpectrum { m, vectorial, values, histogram }
    }

    /// Σ_b W(a, b)² = 2^{2m} for every a.
    pub fn parseval_holds(&self) -> bool {
        let n = 1usize << self.m;
        let target = 1i64 << (2 * self.m);
        self.values.chunks(n).all(|row| row.iter().map(|w| w * w).sum::<i64>() == target)
    }

    /// Boolean W_f(b), or vectorial W_F(a, b).
    pub fn at(&self, a: u32, b: u32) -> i64 {
        let n = 1usize << self.m;
        if self.vectorial {
            self.values[(a as usize - 1) * n + b as usize]
        } else {
            self.values[b as usize]
        }
    }
}

fn check_binary(tower: &FieldTower) -> Result<()> {
    if tower.q != 2 {
        return Err(Error::Domain(format!("Walsh spectra are defined here for q = 2, got q = {}", tower.q)));
    }
    Ok(())
}

fn fwht(v: &mut [i64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Map b ↦ the bit mask u with u_j = Tr(b·e_j), e_j the j-th coordinate basis element.
fn trace_dual_masks(field: &Field) -> Vec<usize> {
    let m = field.degree();
    (0..field.size())
        .map(|b| {
            (0..m).fold(0usize, |acc, j| acc | ((field.abs_trace(field.mul(b, 1 << j)) as usize) << j))
        })
        .collect()
}

fn boolean_fast(field: &Field, masks: &[usize], f: &[u32]) -> Vec<i64> {
    let mut v: Vec<i64> = f.iter().map(|&y| if y & 1 == 0 { 1 } else { -1 }).collect();
    fwht(&mut v);
    masks.iter().take(field.size() as usize).map(|&u| v[u]).collect()
}

/// W_f(b) = Σ_x (−1)^{f(x) + Tr(bx)} for a Boolean table over F_{2^m}.
pub fn boolean_walsh(tower: &FieldTower, f: &[u32]) -> Result<WalshSpectrum> {
    check_binary(tower)?;
    if tower.m > MAX_BOOLEAN_M {
        return Err(Error::Resource(format!("Boolean Walsh spectrum needs m <= {MAX_BOOLEAN_M}")));
    }
    let masks = trace_dual_masks(tower.top());
    Ok(WalshSpectrum::new(tower.m, false, boolean_fast(tower.top(), &masks, f)))
}

/// W_F(a, b) = Σ_x (−1)^{Tr(a·F(x) + bx)} for a ≠ 0.
pub fn vectorial_walsh(tower: &FieldTower, big_f: &[u32]) -> Result<WalshSpectrum> {
    check_binary(tower)?;
    if tower.m > MAX_VECTORIAL_M {
        return Err(Error::Resource(format!("vectorial Walsh spectrum needs m <= {MAX_VECTORIAL_M}")));
    }
    let top = tower.top();
    let masks = trace_dual_masks(top);
    let rows: Vec<Vec<i64>> = (1..tower.qm)
        .into_par_iter()
        .map(|a| {
            let comp: Vec<u32> = big_f.iter().map(|&y| top.abs_trace(top.mul(a, y))).collect();
            boolean_fast(top, &masks, &comp)
        })
        .collect();
    Ok(WalshSpectrum::new(tower.m, true, rows.concat()))
}

/// Same spectrum by direct summation over x.
pub fn walsh_spectrum_direct(f: &FuncSpec, tower: &FieldTower) -> Result<WalshSpectrum> {
    check_binary(tower)?;
    let top = tower.top();
    let qm = tower.qm;
    let sum = |comp: &dyn Fn(u32) -> u32, b: u32| -> i64 {
        (0..qm).map(|x| if (comp(x) ^ top.abs_trace(top.mul(b, x))) & 1 == 0 { 1 } else { -1 }).sum()
    };
    if f.is_vectorial() {
        if tower.m > MAX_VECTORIAL_M {
            return Err(Error::Resource(format!("vectorial Walsh spectrum needs m <= {MAX_VECTORIAL_M}")));
        }
        let big = f.vectorial_table(tower)?;
        let mut values = Vec::with_capacity(((qm - 1) * qm) as usize);
        for a in 1..qm {
            let comp = |x: u32| top.abs_trace(top.mul(a, big[x as usize]));
            for b in 0..qm {
                values.push(sum(&comp, b));
            }
        }
        Ok(WalshSpectrum::new(tower.m, true, values))
    } else {
        if tower.m > MAX_BOOLEAN_M {
            return Err(Error::Resource(format!("Boolean Walsh spectrum needs m <= {MAX_BOOLEAN_M}")));
        }
        let t = f.table(tower)?;
        let comp = |x: u32| t[x as usize];
        Ok(WalshSpectrum::new(tower.m, false, (0..qm).map(|b| sum(&comp, b)).collect()))
    }
}

/// Exact spectrum in the function's Walsh view (fast transform).
pub fn walsh_spectrum(f: &FuncSpec, tower: &FieldTower) -> Result<WalshSpectrum> {
    check_binary(tower)?;
    if f.is_vectorial() {
        vectorial_walsh(tower, &f.vectorial_table(tower)?)
    } else {
        boolean_walsh(tower, &f.table(tower)?)
    }
}

pub fn classify_spectrum(s: &WalshSpectrum) -> FuncClass {
    let m = s.m;
    let full = 1i64 << m;
    if s.vectorial {
        if m % 2 == 1 {
            let ab = 1i64 << m.div_ceil(2);
            if s.values.iter().all(|&w| w == 0 || w.abs() == ab) {
                return FuncClass::AlmostBent;
            }
        }
        let n = 1usize << m;
        if s.values.chunks(n).all(|row| row.iter().filter(|w| w.abs() == full).count() == 1) {
            return FuncClass::Linear;
        }
    } else {
        if m.is_multiple_of(2) {
            let b = 1i64 << (m / 2);
            if s.values.iter().all(|&w| w.abs() == b) {
                return FuncClass::Bent;
            }
        }
        if s.values.iter().filter(|w| w.abs() == full).count() == 1 {
            return FuncClass::Linear;
        }
    }
    FuncClass::Other
}

pub fn classify(f: &FuncSpec, tower: &FieldTower) -> Result<FuncClass> {
    Ok(classify_spectrum(&walsh_spectrum(f, tower)?))
}

/// A function whose class has been established by its Walsh spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct VerifiedFunc {
    pub spec: FuncSpec,
    pub class: FuncClass,
    pub spectrum: WalshSpectrum,
}

/// Classify and insist on `expected`.
pub fn verify_class(f: &FuncSpec, tower: &FieldTower, expected: FuncClass) -> Result<VerifiedFunc> {
    let spectrum = walsh_spectrum(f, tower)?;
    let class = classify_spectrum(&spectrum);
    if class != expected {
        return Err(Error::Spec(format!("{} is {class:?}, not {expected:?}", f.name())));
    }
    Ok(VerifiedFunc { spec: f.clone(), class, spectrum })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbFamily {
    Gold,
    Kasami,
    Welch,
    Niho,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub family: AbFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub t: u64,
}

/// Known almost bent monomial exponents for odd m ≥ 3.
pub fn ab_monomial_catalogue(m: u32) -> Result<Vec<CatalogueEntry>> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::Domain(format!("the catalogue needs odd m >= 3, got {m}")));
    }
    let mut out = Vec::new();
    let half = (m - 1) / 2;
    for r in 1..=half {
        if gcd(r as u64, m as u64) == 1 {
            out.push(CatalogueEntry { family: AbFamily::Gold, r: Some(r), t: (1u64 << r) + 1 });
        }
    }
    for r in 2..=half {
        if gcd(r as u64, m as u64) == 1 {
            out.push(CatalogueEntry { family: AbFamily::Kasami, r: Some(r), t: (1u64 << (2 * r)) - (1u64 << r) + 1 });
        }
    }
    out.push(CatalogueEntry { family: AbFamily::Welch, r: None, t: (1u64 << half) + 3 });
    let niho = if m % 4 == 1 {
        (1u64 << half) + (1u64 << ((m - 1) / 4)) - 1
    } else {
        (1u64 << half) + (1u64 << ((3 * m - 1) / 4)) - 1
    };
    out.push(CatalogueEntry { family: AbFamily::Niho, r: None, t: niho });
    Ok(out)
}

/// x ↦ x^t permutes F_{2^m} iff gcd(t, 2^m − 1) = 1.
pub fn monomial_is_permutation(t: u64, m: u32) -> bool {
    gcd(t, (1u64 << m) - 1) == 1
}

/// Distinct-pair policy: the two functions must differ somewhere. Vectorial
/// kinds are compared as maps F_{2^m} → F_{2^m}.
pub fn ensure_distinct(a: &FuncSpec, b: &FuncSpec, tower: &FieldTower) -> Result<()> {
    let same = if a.is_vectorial() && b.is_vectorial() {
        a.vectorial_table(tower)? == b.vectorial_table(tower)?
    } else {
        a.table(tower)? == b.table(tower)?
    };
    if same {
        return Err(Error::Spec(format!("{} and {} are the same function", a.name(), b.name())));
    }
    Ok(())
}
