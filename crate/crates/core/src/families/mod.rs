//! The six constructions C_{f,g}: defining set, generator matrix, subfield
//! code (basis expansion and trace form), punctured subfield code, and the
//! closed-form parameters each theorem predicts.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funclib::{ab_monomial_catalogue, ensure_distinct, verify_class, FuncClass, FuncSpec, VerifiedFunc};
use crate::galois::{prime_power, Field, FieldTower};
use crate::lincode::{rank_and_rref, LinearCode};

mod expected;
mod verify;

pub use expected::{expected_profile, Expectation, ExpectedCode, ExpectedProfile, Value};
pub use verify::{
    verify_family, verify_family_with, ClaimResult, ClaimStatus, CodeReport, CrossCheck, FamilyReport, VerifyOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<FamilyId> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "F1" => FamilyId::F1,
            "F2" => FamilyId::F2,
            "F3" => FamilyId::F3,
            "F4" => FamilyId::F4,
            "F5" => FamilyId::F5,
            "F6" => FamilyId::F6,
            other => return Err(Error::Spec(format!("unknown family {other:?} (expected F1..F6)"))),
        })
    }
}

/// Which of the three codes attached to a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    /// C_{f,g} over F_{q^m}.
    Base,
    /// C_{f,g}^{(q)}.
    Subfield,
    /// The subfield code punctured on coordinate 0.
    Punctured,
}

impl CodeKind {
    pub const ALL: [CodeKind; 3] = [CodeKind::Base, CodeKind::Subfield, CodeKind::Punctured];
    pub fn as_str(self) -> &'static str {
        match self {
            CodeKind::Base => "base",
            CodeKind::Subfield => "subfield",
            CodeKind::Punctured => "punctured",
        }
    }
}

/// `{"family":"F2","q":3,"m":3,"f":{...},"g":{...}}`. `m` defaults to 2 for F1;
/// `f` and `g` default to each family's standard pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FuncSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FuncSpec>,
}

impl FamilySpec {
    pub fn new(family: FamilyId, q: u32, m: u32) -> FamilySpec {
        FamilySpec { family, q, m: Some(m), f: None, g: None }
    }

    pub fn with_functions(mut self, f: FuncSpec, g: FuncSpec) -> FamilySpec {
        self.f = Some(f);
        self.g = Some(g);
        self
    }

    pub fn m(&self) -> Option<u32> {
        self.m.or(if self.family == FamilyId::F1 { Some(2) } else { None })
    }

    /// This `FamilySpec` with `m`, `f`, `g` filled in.
    pub fn resolved(&self) -> Result<FamilySpec> {
        let m = self.m().ok_or_else(|| Error::Spec(format!("{} needs m", self.family)))?;
        let (df, dg) = default_pair(self.family, m)?;
        Ok(FamilySpec {
            family: self.family,
            q: self.q,
            m: Some(m),
            f: Some(self.f.clone().unwrap_or(df)),
            g: Some(self.g.clone().unwrap_or(dg)),
        })
    }

    /// Short label such as `F2 q=3 m=3`.
    pub fn label(&self) -> String {
        match self.m() {
            Some(m) => format!("{} q={} m={m}", self.family, self.q),
            None => format!("{} q={}", self.family, self.q),
        }
    }
}

fn default_mm() -> FuncSpec {
    FuncSpec::BentMaioranaMcFarland { pi_exp: 1, shift: 0, complement: false }
}

fn default_pair(family: FamilyId, m: u32) -> Result<(FuncSpec, FuncSpec)> {
    Ok(match family {
        FamilyId::F1 => (FuncSpec::Trace, FuncSpec::Norm),
        FamilyId::F2 => (FuncSpec::Trace, FuncSpec::TraceOfSquare),
        FamilyId::F3 => (FuncSpec::Trace, FuncSpec::TraceOfMonomial { t: 3 }),
        FamilyId::F4 => {
            // Gold x^3 and the first catalogue monomial that is a different map.
            let cat = if m >= 3 && m % 2 == 1 { ab_monomial_catalogue(m)? } else { Vec::new() };
            let t2 = cat.iter().map(|e| e.t % ((1u64 << m) - 1)).find(|&t| t != 3).unwrap_or(5);
            (FuncSpec::TraceOfMonomial { t: 3 }, FuncSpec::TraceOfMonomial { t: t2 })
        }
        FamilyId::F5 => (FuncSpec::Trace, default_mm()),
        FamilyId::F6 => (default_mm(), FuncSpec::BentMaioranaMcFarland { pi_exp: 1, shift: 0, complement: true }),
    })
}

/// W = W_f(0)·W_g(0) and the Walsh values it came from (F4, F6).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshProvenance {
    /// Σ_x (−1)^{f(x)}.
    pub w_f_zero: i64,
    /// Σ_y (−1)^{g(y)}.
    pub w_g_zero: i64,
    pub w: i64,
    /// Histogram of W′ = W_f(b)·W_g(c) over (b, c) ≠ (0, 0).
    pub w_prime: std::collections::BTreeMap<i64, u64>,
}

/// A validated family instance with its tower and function tables.
#[derive(Debug, Clone)]
pub struct Family {
    spec: FamilySpec,
    tower: FieldTower,
    f: Vec<u32>,
    g: Vec<u32>,
    verified: Vec<VerifiedFunc>,
    walsh: Option<WalshProvenance>,
}

impl Family {
    pub fn new(spec: &FamilySpec) -> Result<Family> {
        let spec = spec.resolved()?;
        let m = spec.m.unwrap_or(0);
        let (p, l) = prime_power(spec.q).ok_or_else(|| Error::Spec(format!("q = {} is not a prime power", spec.q)))?;
        let fam = spec.family;
        let binary = |what: &str| -> Result<()> {
            if spec.q != 2 {
                return Err(Error::Spec(format!("{fam} requires q = 2, got q = {}", spec.q)));
            }
            let want_odd = matches!(fam, FamilyId::F3 | FamilyId::F4);
            if (m % 2 == 1) != want_odd {
                return Err(Error::Spec(format!("{fam} requires {what} m, got m = {m}")));
            }
            Ok(())
        };
        match fam {
            FamilyId::F1 if m != 2 => return Err(Error::Spec(format!("F1 fixes m = 2, got m = {m}"))),
            FamilyId::F2 if m == 0 => return Err(Error::Spec("m must be positive".into())),
            FamilyId::F3 | FamilyId::F4 => binary("odd")?,
            FamilyId::F5 | FamilyId::F6 => binary("even")?,
            _ => {}
        }
        let tower = FieldTower::new(p, l, m).map_err(|e| match e {
            Error::Domain(s) => Error::Spec(s),
            other => other,
        })?;
        let f_spec = spec.f.clone().expect("resolved");
        let g_spec = spec.g.clone().expect("resolved");
        let fixed = |want: &FuncSpec, got: &FuncSpec, role: &str| -> Result<()> {
            if want != got {
                return Err(Error::Spec(format!("{fam} fixes {role} = {}, got {}", want.name(), got.name())));
            }
            Ok(())
        };
        let mut verified = Vec::new();
        let ab = |s: &FuncSpec| -> Result<VerifiedFunc> {
            if !s.is_vectorial() {
                return Err(Error::Spec(format!("{} is not a map F_2^m -> F_2^m; {fam} needs an almost bent A", s.name())));
            }
            verify_class(s, &tower, FuncClass::AlmostBent)
        };
        let bent = |s: &FuncSpec| -> Result<VerifiedFunc> {
            if s.is_vectorial() {
                return Err(Error::Spec(format!("{} is vectorial; {fam} needs a Boolean bent function", s.name())));
            }
            verify_class(s, &tower, FuncClass::Bent)
        };
        match fam {
            FamilyId::F1 => {
                fixed(&FuncSpec::Trace, &f_spec, "f")?;
                fixed(&FuncSpec::Norm, &g_spec, "g")?;
            }
            FamilyId::F2 => {
                fixed(&FuncSpec::Trace, &f_spec, "f")?;
                fixed(&FuncSpec::TraceOfSquare, &g_spec, "g")?;
            }
            FamilyId::F3 => {
                fixed(&FuncSpec::Trace, &f_spec, "f")?;
                verified.push(ab(&g_spec)?);
            }
            FamilyId::F4 => {
                verified.push(ab(&f_spec)?);
                verified.push(ab(&g_spec)?);
                ensure_distinct(&f_spec, &g_spec, &tower)?;
            }
            FamilyId::F5 => {
                fixed(&FuncSpec::Trace, &f_spec, "f")?;
                verified.push(bent(&g_spec)?);
            }
            FamilyId::F6 => {
                verified.push(bent(&f_spec)?);
                verified.push(bent(&g_spec)?);
                ensure_distinct(&f_spec, &g_spec, &tower)?;
            }
        }
        let f = f_spec.table(&tower)?;
        let g = g_spec.table(&tower)?;
        let walsh = matches!(fam, FamilyId::F4 | FamilyId::F6).then(|| walsh_provenance(&f, &g));
        Ok(Family { spec, tower, f, g, verified, walsh })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }
    pub fn id(&self) -> FamilyId {
        self.spec.family
    }
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }
    pub fn q(&self) -> u32 {
        self.tower.q
    }
    pub fn m(&self) -> u32 {
        self.tower.m
    }
    /// f(x) ∈ F_q for every x, in encoding order.
    pub fn f_table(&self) -> &[u32] {
        &self.f
    }
    pub fn g_table(&self) -> &[u32] {
        &self.g
    }
    /// Classification evidence for the functions that need it.
    pub fn verified_functions(&self) -> &[VerifiedFunc] {
        &self.verified
    }
    pub fn walsh(&self) -> Option<&WalshProvenance> {
        self.walsh.as_ref()
    }

    /// D = {(x, y) : f(x) + g(y) = 0}, lexicographic in (x, y).
    pub fn defining_set(&self) -> Vec<(u32, u32)> {
        let mid = self.tower.mid();
        let qm = self.tower.qm;
        let mut out = Vec::new();
        for x in 0..qm {
            let want = mid.neg(self.f[x as usize]);
            for y in 0..qm {
                if self.g[y as usize] == want {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// G_{f,g}: column (0, 1, 0)ᵀ, then (1, x, y)ᵀ for (x, y) ∈ D.
    pub fn build_code(&self) -> LinearCode {
        let d = self.defining_set();
        let n = d.len() + 1;
        let mut rows = vec![Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        rows[0].push(0);
        rows[1].push(1);
        rows[2].push(0);
        for &(x, y) in &d {
            rows[0].push(1);
            rows[1].push(x);
            rows[2].push(y);
        }
        LinearCode::with_length(self.tower.top().clone(), n, rows).expect("entries lie in the top field")
    }

    /// The polynomial basis 1, α, …, α^{m−1} of F_{q^m} over F_q.
    pub fn polynomial_basis(&self) -> Vec<u32> {
        (0..self.tower.m).map(|j| self.tower.q.pow(j)).collect()
    }

    /// `count` random F_q-bases of F_{q^m}, reproducible from `seed`.
    pub fn random_bases(&self, count: usize, seed: u64) -> Vec<Vec<u32>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (q, m) = (self.tower.q, self.tower.m as usize);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let rows: Vec<Vec<u32>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(0..q)).collect()).collect();
            if rank_and_rref(self.tower.mid(), &rows).0 == m {
                out.push(rows.iter().map(|r| from_digits(r, q)).collect());
            }
        }
        out
    }

    pub fn subfield_code(&self, basis: &[u32]) -> Result<LinearCode> {
        subfield_code(&self.build_code(), &self.tower, basis)
    }

    /// {c_{a,b,c}} from the generators c_{1,0,0}, c_{0,β_i,0}, c_{0,0,β_i}.
    pub fn trace_code(&self) -> LinearCode {
        let t = &self.tower;
        let mid = t.mid();
        let top = t.top();
        let d = self.defining_set();
        let n = d.len() + 1;
        let mut rows = Vec::with_capacity(2 * t.m as usize + 1);
        let mut first = vec![1u32; n];
        first[0] = 0;
        rows.push(first);
        for beta in self.polynomial_basis() {
            let mut row = Vec::with_capacity(n);
            row.push(t.tr(beta));
            row.extend(d.iter().map(|&(x, _)| t.tr(top.mul(beta, x))));
            rows.push(row);
        }
        for beta in self.polynomial_basis() {
            let mut row = Vec::with_capacity(n);
            row.push(0);
            row.extend(d.iter().map(|&(_, y)| t.tr(top.mul(beta, y))));
            rows.push(row);
        }
        LinearCode::with_length(mid.clone(), n, rows).expect("traces lie in F_q")
    }

    pub fn punctured_subfield_code(&self) -> Result<LinearCode> {
        self.subfield_code(&self.polynomial_basis())?.puncture(0)
    }

    /// The code of the given kind, with the polynomial basis for subfield codes.
    pub fn code(&self, kind: CodeKind) -> Result<LinearCode> {
        match kind {
            CodeKind::Base => Ok(self.build_code()),
            CodeKind::Subfield => self.subfield_code(&self.polynomial_basis()),
            CodeKind::Punctured => self.punctured_subfield_code(),
        }
    }

    /// The codeword c_{a,b,c} = (Tr(b), (a + Tr(bx + cy))_{(x,y) ∈ D}).
    pub fn trace_codeword(&self, d: &[(u32, u32)], a: u32, b: u32, c: u32) -> Vec<u32> {
        let t = &self.tower;
        let (mid, top) = (t.mid(), t.top());
        let mut out = Vec::with_capacity(d.len() + 1);
        out.push(t.tr(b));
        out.extend(d.iter().map(|&(x, y)| mid.add(a, t.tr(top.add(top.mul(b, x), top.mul(c, y))))));
        out
    }
}

fn walsh_provenance(f: &[u32], g: &[u32]) -> WalshProvenance {
    // Transform over the F_2-coordinates of the encoding. b -> (Tr(b·2^j))_j is
    // a bijection, so W(0) and the multiset of values agree with the trace form.
    let tower_free_walsh = |t: &[u32]| -> Vec<i64> {
        let mut v: Vec<i64> = t.iter().map(|&s| if s == 0 { 1 } else { -1 }).collect();
        let mut h = 1;
        while h < v.len() {
            for i in (0..v.len()).step_by(2 * h) {
                for j in i..i + h {
                    let (a, b) = (v[j], v[j + h]);
                    v[j] = a + b;
                    v[j + h] = a - b;
                }
            }
            h *= 2;
        }
        v
    };
    let wf = tower_free_walsh(f);
    let wg = tower_free_walsh(g);
    let mut w_prime = std::collections::BTreeMap::new();
    for (b, &x) in wf.iter().enumerate() {
        for (c, &y) in wg.iter().enumerate() {
            if b == 0 && c == 0 {
                continue;
            }
            *w_prime.entry(x * y).or_insert(0u64) += 1;
        }
    }
    WalshProvenance { w_f_zero: wf[0], w_g_zero: wg[0], w: wf[0] * wg[0], w_prime }
}

fn from_digits(d: &[u32], q: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * q + x)
}

fn digits_base(mut x: u32, q: u32, m: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % q;
            x /= q;
            d
        })
        .collect()
}

/// Inverse of a square matrix over `f`, or `None` if singular.
fn invert(f: &Field, a: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = a.len();
    let mut m: Vec<Vec<u32>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = f.inv(m[col][col])?;
        for x in m[col].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                let pivot_row = m[col].clone();
                for (x, &p) in m[r].iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, p));
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Expand every entry of the generator of `code` (over F_{q^m}) into its
/// coordinates over `basis`; the result generates C^{(q)} over F_q.
pub fn subfield_code(code: &LinearCode, tower: &FieldTower, basis: &[u32]) -> Result<LinearCode> {
    if **code.field() != **tower.top() {
        return Err(Error::Structural("code is not over the top field of the tower".into()));
    }
    let m = tower.m as usize;
    let q = tower.q;
    let mid: &Arc<Field> = tower.mid();
    if basis.len() != m || basis.iter().any(|&b| b >= tower.qm) {
        return Err(Error::Domain(format!("a basis of F_{} over F_{q} has {m} elements of the top field", tower.qm)));
    }
    let b: Vec<Vec<u32>> = basis.iter().map(|&x| digits_base(x, q, m)).collect();
    let binv = invert(mid, &b).ok_or_else(|| Error::Domain("basis elements are linearly dependent over F_q".into()))?;
    // coords(x) = digits(x) · B^{-1}
    let coords = |x: u32| -> Vec<u32> {
        let d = digits_base(x, q, m);
        (0..m)
            .map(|i| d.iter().enumerate().fold(0, |acc, (j, &dj)| mid.add(acc, mid.mul(dj, binv[j][i]))))
            .collect()
    };
    let n = code.n();
    let mut rows = Vec::with_capacity(code.generator().len() * m);
    for row in code.generator() {
        let expanded: Vec<Vec<u32>> = row.iter().map(|&x| coords(x)).collect();
        for i in 0..m {
            rows.push(expanded.iter().map(|c| c[i]).collect());
        }
    }
    LinearCode::with_length(mid.clone(), n, rows)
}

/// Free-function form of [`Family::build_code`].
pub fn build_code(spec: &FamilySpec) -> Result<LinearCode> {
    Ok(Family::new(spec)?.build_code())
}

pub fn trace_code(spec: &FamilySpec) -> Result<LinearCode> {
    Ok(Family::new(spec)?.trace_code())
}

pub fn punctured_subfield_code(spec: &FamilySpec) -> Result<LinearCode> {
    Family::new(spec)?.punctured_subfield_code()
}
