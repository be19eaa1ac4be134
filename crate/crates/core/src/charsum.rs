//! Brute-force oracles for the character sums and root counts that the
//! weight computations rely on, each compared with its closed form.
//!
//! Sums are evaluated in double precision; every comparison uses
//! [`TOLERANCE`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{prime_power, Field, FieldTower};

pub const TOLERANCE: f64 = 1e-6;

/// Largest q for the single-field grids.
pub const MAX_GRID_Q: u32 = 125;

pub type ComplexVal = Complex64;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < TOLERANCE
}

fn zeta(p: u32, k: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64)
}

/// χ_a(x) = ζ_p^{Tr_{q/p}(ax)}.
pub fn additive_char(f: &Field, a: u32, x: u32) -> Complex64 {
    zeta(f.characteristic(), f.abs_trace(f.mul(a, x)))
}

/// Canonical additive character χ_1.
pub fn chi(f: &Field, x: u32) -> Complex64 {
    zeta(f.characteristic(), f.abs_trace(x))
}

/// ψ_j(g^k) = ζ_{q−1}^{jk} with g the field generator.
pub fn multiplicative_char(f: &Field, j: u32, x: u32) -> Result<Complex64> {
    let k = f.log(x).ok_or_else(|| Error::Domain("multiplicative character at 0".into()))?;
    let n = (f.size() - 1) as u64;
    Ok(Complex64::from_polar(1.0, 2.0 * PI * ((j as u64 * k as u64) % n) as f64 / n as f64))
}

fn eta(f: &Field, x: u32) -> i64 {
    f.eta(x).map(i64::from).unwrap_or(0)
}

/// G(η, χ) by direct summation.
pub fn gauss_sum(f: &Field) -> Complex64 {
    f.elements().skip(1).map(|x| chi(f, x) * eta(f, x) as f64).sum()
}

/// (−1)^{l−1} (√−1)^{((p−1)/2)² l} √q.
pub fn gauss_sum_closed(p: u32, l: u32) -> Complex64 {
    let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
    let e = (((p - 1) / 2).pow(2) * l) % 4;
    let i_pow = [Complex64::new(1.0, 0.0), Complex64::i(), Complex64::new(-1.0, 0.0), -Complex64::i()][e as usize];
    i_pow * sign * (p.pow(l) as f64).sqrt()
}

pub fn weil_sum(f: &Field, b: u32, a2: u32, a1: u32, a0: u32) -> Complex64 {
    f.elements()
        .map(|c| {
            let v = f.add(f.add(f.mul(a2, f.mul(c, c)), f.mul(a1, c)), a0);
            additive_char(f, b, v)
        })
        .sum()
}

/// Closed form of Σ_c χ_b(a2 c² + a1 c + a0): the Gauss-sum form for odd q
/// (a2 ≠ 0), the a2 = b·a1² dichotomy for even q.
pub fn weil_sum_closed(f: &Field, b: u32, a2: u32, a1: u32, a0: u32) -> Result<Complex64> {
    if f.characteristic() == 2 {
        return Ok(if a2 == f.mul(b, f.mul(a1, a1)) {
            additive_char(f, b, a0) * f.size() as f64
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    if a2 == 0 {
        return Err(Error::Domain("the odd-q Weil sum needs a2 != 0".into()));
    }
    // χ_b = χ_1(b·) and G(η, χ_b) = η(b) G(η, χ_1).
    let four_a2 = f.mul(f.from_int(4), a2);
    let arg = f.sub(a0, f.mul(f.mul(a1, a1), f.inv(four_a2).expect("nonzero")));
    let g = gauss_sum_closed(f.characteristic(), f.degree()) * eta(f, b) as f64;
    Ok(additive_char(f, b, arg) * eta(f, a2) as f64 * g)
}

pub fn eta_sum(f: &Field, a2: u32, a1: u32, a0: u32) -> i64 {
    f.elements().map(|c| eta(f, f.add(f.add(f.mul(a2, f.mul(c, c)), f.mul(a1, c)), a0))).sum()
}

pub fn eta_sum_closed(f: &Field, a2: u32, a1: u32, a0: u32) -> Result<i64> {
    if f.characteristic() == 2 || a2 == 0 {
        return Err(Error::Domain("eta sums need q odd and a2 != 0".into()));
    }
    let d = f.sub(f.mul(a1, a1), f.mul(f.from_int(4), f.mul(a0, a2)));
    let e = eta(f, a2);
    Ok(if d != 0 { -e } else { (f.size() as i64 - 1) * e })
}

/// #{x : x² + a1 x + a0 = 0} by scanning.
pub fn quadratic_root_count(f: &Field, a0: u32, a1: u32) -> u32 {
    f.elements().filter(|&x| f.add(f.add(f.mul(x, x), f.mul(a1, x)), a0) == 0).count() as u32
}

pub fn quadratic_root_count_closed(f: &Field, a0: u32, a1: u32) -> u32 {
    if f.characteristic() == 2 {
        if a1 == 0 {
            return 1;
        }
        let t = f.abs_trace(f.div(a0, f.mul(a1, a1)).expect("a1 != 0"));
        return if t == 0 { 2 } else { 0 };
    }
    let disc = f.sub(f.mul(a1, a1), f.mul(f.from_int(4), a0));
    (1 + eta(f, disc)) as u32
}

/// N¹_{α,β} = #{x ∈ F_{q²} : Tr(x) = α, Norm(x) = β}.
pub fn n1(t: &FieldTower, alpha: u32, beta: u32) -> u32 {
    (0..t.qm).filter(|&x| t.tr(x) == alpha && t.nm(x) == beta).count() as u32
}

pub fn n1_closed(t: &FieldTower, alpha: u32, beta: u32) -> u32 {
    let f = t.mid();
    if f.characteristic() == 2 {
        if alpha == 0 {
            return 1;
        }
        let tr = f.abs_trace(f.div(beta, f.mul(alpha, alpha)).expect("alpha != 0"));
        return if tr == 0 { 0 } else { 2 };
    }
    let d = f.sub(f.mul(alpha, alpha), f.mul(f.from_int(4), beta));
    (1 - eta(f, d)) as u32
}

/// N²_{a,b} = #{x ∈ F_{q²} : a + Tr(x) + b·Norm(x) = 0}.
pub fn n2(t: &FieldTower, a: u32, b: u32) -> u32 {
    let f = t.mid();
    (0..t.qm).filter(|&x| f.add(f.add(a, t.tr(x)), f.mul(b, t.nm(x))) == 0).count() as u32
}

pub fn n2_closed(t: &FieldTower, a: u32, b: u32) -> u32 {
    if t.mid().mul(a, b) == 1 {
        1
    } else {
        t.q + 1
    }
}

/// (−1)^{e/4} for an exponent the caller has checked is divisible by 4.
fn sign_quarter(e: u64) -> i64 {
    assert_eq!(e % 4, 0);
    if (e / 4).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// N³_{u,v} = #{y ∈ F_{q^m} : Tr(y² + uy + v) = 0}.
pub fn n3(t: &FieldTower, u: u32, v: u32) -> u64 {
    let top = t.top();
    (0..t.qm).filter(|&y| t.tr(top.add(top.add(top.mul(y, y), top.mul(u, y)), v)) == 0).count() as u64
}

/// Closed form of N³ (odd q, odd m, η = −1 case read as q^{m−1} + …).
pub fn n3_closed(t: &FieldTower, u: u32, v: u32) -> i64 {
    let (p, l, m, q) = (t.p as u64, t.l as u64, t.m as u64, t.q as i64);
    let top = t.top();
    let mid = t.mid();
    let qm1 = q.pow(m as u32 - 1);
    if p == 2 {
        let in_fq_star = u != 0 && u < t.q;
        if !in_fq_star {
            return qm1;
        }
        let tr2 = top.abs_trace(top.div(v, top.mul(u, u)).expect("u != 0"));
        return if tr2 == 0 { 2 * qm1 } else { 0 };
    }
    let four = top.from_int(4);
    let s = t.tr(top.sub(v, top.div(top.mul(u, u), four).expect("4 != 0")));
    if m % 2 == 1 {
        if s == 0 {
            return qm1;
        }
        let h = q.pow(((m - 1) / 2) as u32);
        let e = l * (p - 1) * (m + 1);
        if mid.eta(s).expect("nonzero") == 1 {
            qm1 + h * sign_quarter(e)
        } else {
            qm1 + h * sign_quarter(e + 4)
        }
    } else {
        let h = q.pow(((m - 2) / 2) as u32);
        let e = l * m * (p - 1);
        if s == 0 {
            qm1 + (q - 1) * h * sign_quarter(e + 4)
        } else {
            qm1 + h * sign_quarter(e)
        }
    }
}

/// Ω(a,b,c) = Σ_{z ∈ F_q*} χ(za) Σ_y χ′(−zby² + zcy).
pub fn omega(t: &FieldTower, a: u32, b: u32, c: u32) -> Complex64 {
    let (mid, top) = (t.mid(), t.top());
    (1..t.q)
        .map(|z| {
            let zb = top.neg(top.mul(z, b));
            let zc = top.mul(z, c);
            let inner: Complex64 = (0..t.qm).map(|y| chi(top, top.add(top.mul(zb, top.mul(y, y)), top.mul(zc, y)))).sum();
            chi(mid, mid.mul(z, a)) * inner
        })
        .sum()
}

/// Closed form of Ω for a ∈ F_q, b ∈ F_q*, c ∈ F_{q^m}.
pub fn omega_closed(t: &FieldTower, a: u32, b: u32, c: u32) -> Result<i64> {
    if b == 0 || b >= t.q {
        return Err(Error::Domain("Ω closed form needs b in F_q*".into()));
    }
    let (p, l, m, q) = (t.p as u64, t.l as u64, t.m as u64, t.q as i64);
    let (mid, top) = (t.mid(), t.top());
    let qm = q.pow(m as u32);
    if p == 2 {
        if c == 0 || c >= t.q {
            return Ok(0);
        }
        let tr = mid.abs_trace(mid.div(mid.mul(a, b), mid.mul(c, c)).expect("c != 0"));
        return Ok(if tr == 0 { qm } else { -qm });
    }
    let four_b = top.mul(top.from_int(4), b);
    let s = mid.add(a, t.tr(top.div(top.mul(c, c), four_b).expect("nonzero")));
    if m % 2 == 1 {
        if s == 0 {
            return Ok(0);
        }
        let h = q.pow(m.div_ceil(2) as u32);
        let e = l * (p - 1) * (m + 1);
        let prod = top.eta(top.neg(b)).expect("b != 0") * mid.eta(s).expect("s != 0");
        Ok(if prod == 1 { h * sign_quarter(e) } else { h * sign_quarter(e + 4) })
    } else {
        let h = q.pow((m / 2) as u32);
        let e = l * m * (p - 1);
        Ok(if s == 0 { (q - 1) * h * sign_quarter(e + 4) } else { h * sign_quarter(e) })
    }
}

/// Σ_x χ(w f(x)) χ′(u x) for every w ∈ F_q* (row w−1) and u ∈ F_{q^m}.
fn mixed_transform(t: &FieldTower, f: &[u32]) -> Vec<Vec<Complex64>> {
    let (mid, top) = (t.mid(), t.top());
    (1..t.q)
        .map(|w| {
            (0..t.qm)
                .into_par_iter()
                .map(|u| (0..t.qm).map(|x| chi(mid, mid.mul(w, f[x as usize])) * chi(top, top.mul(u, x))).sum())
                .collect()
        })
        .collect()
}

/// Υ_{a,b,c} for all (a, b, c), indexed `[a][b][c]`, by separating the
/// (x, y) sum into the two single-variable transforms.
pub fn upsilon_table(t: &FieldTower, f: &[u32], g: &[u32]) -> Vec<Vec<Vec<Complex64>>> {
    let (mid, top) = (t.mid(), t.top());
    let tf = mixed_transform(t, f);
    let tg = mixed_transform(t, g);
    (0..t.q)
        .map(|a| {
            (0..t.qm)
                .into_par_iter()
                .map(|b| {
                    (0..t.qm)
                        .map(|c| {
                            (1..t.q)
                                .map(|z| {
                                    let (zb, zc) = (top.mul(z, b) as usize, top.mul(z, c) as usize);
                                    let s: Complex64 = (0..(t.q - 1) as usize).map(|w| tf[w][zb] * tg[w][zc]).sum();
                                    chi(mid, mid.mul(z, a)) * s
                                })
                                .sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Υ_{a,b,c} by the full quadruple sum, for small fields.
pub fn upsilon_direct(t: &FieldTower, f: &[u32], g: &[u32], a: u32, b: u32, c: u32) -> Complex64 {
    let (mid, top) = (t.mid(), t.top());
    let mut acc = Complex64::new(0.0, 0.0);
    for z in 1..t.q {
        for w in 1..t.q {
            for x in 0..t.qm {
                for y in 0..t.qm {
                    let inner = mid.add(mid.mul(w, f[x as usize]), mid.mul(w, g[y as usize]));
                    let lin = top.add(top.mul(top.mul(z, b), x), top.mul(top.mul(z, c), y));
                    acc += chi(mid, mid.mul(z, a)) * chi(mid, inner) * chi(top, lin);
                }
            }
        }
    }
    acc
}

/// 1 + q^{2m−1} + (1/q) Σ_{z ∈ F_q*} Σ_x χ(z f(x)) Σ_y χ(z g(y)).
pub fn length_formula(t: &FieldTower, f: &[u32], g: &[u32]) -> Complex64 {
    let mid = t.mid();
    let q = t.q as f64;
    let s: Complex64 = (1..t.q)
        .map(|z| {
            let sf: Complex64 = f.iter().map(|&v| chi(mid, mid.mul(z, v))).sum();
            let sg: Complex64 = g.iter().map(|&v| chi(mid, mid.mul(z, v))).sum();
            sf * sg
        })
        .sum();
    Complex64::new(1.0 + (t.qm as f64).powi(2) / q, 0.0) + s / q
}

/// One grid point where brute force and closed form disagree.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaFailure {
    pub params: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub grid: String,
    pub points: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<LemmaFailure>,
}

impl LemmaReport {
    pub fn into_result(self) -> Result<LemmaReport> {
        if self.passed {
            Ok(self)
        } else {
            let f = &self.failures[0];
            Err(Error::LemmaViolation(format!(
                "{} at {}: closed form {}, brute force {}",
                self.lemma, f.params, f.expected, f.actual
            )))
        }
    }
}

struct Tally {
    lemma: String,
    grid: String,
    points: u64,
    failures: Vec<LemmaFailure>,
}

impl Tally {
    fn new(lemma: &str, grid: &str) -> Tally {
        Tally { lemma: lemma.into(), grid: grid.into(), points: 0, failures: Vec::new() }
    }
    fn check(&mut self, ok: bool, params: impl FnOnce() -> String, expected: impl ToString, actual: impl ToString) {
        self.points += 1;
        if !ok && self.failures.len() < 16 {
            self.failures.push(LemmaFailure { params: params(), expected: expected.to_string(), actual: actual.to_string() });
        }
    }
    fn done(self) -> LemmaReport {
        LemmaReport { passed: self.failures.is_empty(), lemma: self.lemma, grid: self.grid, points: self.points, failures: self.failures }
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// The prime powers up to `max`.
pub fn prime_powers(max: u32) -> Vec<u32> {
    (2..=max).filter(|&q| prime_power(q).is_some()).collect()
}

fn tower_for(q: u32, m: u32) -> Result<FieldTower> {
    FieldTower::for_q(q, m)
}

pub fn check_additive_orthogonality(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("additive orthogonality", &format!("q in {qs:?}"));
    for &q in qs {
        let f = tower_for(q, 1)?.mid().clone();
        for a in f.elements() {
            let s: Complex64 = f.elements().map(|x| chi(&f, f.mul(a, x))).sum();
            let want = if a == 0 { q as f64 } else { 0.0 };
            t.check(close(s, want.into()), || format!("q={q} a={a}"), want, fmt_c(s));
            let triv = f.elements().all(|x| close(additive_char(&f, 0, x), 1.0.into()));
            t.check(triv, || format!("q={q} chi_0"), "1", "not 1");
        }
    }
    Ok(t.done())
}

pub fn check_multiplicative_orthogonality(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("multiplicative orthogonality", &format!("q in {qs:?}"));
    for &q in qs {
        let f = tower_for(q, 1)?.mid().clone();
        for j in 0..q - 1 {
            let s: Complex64 = f.elements().skip(1).map(|x| multiplicative_char(&f, j, x).expect("x != 0")).sum();
            let want = if j == 0 { (q - 1) as f64 } else { 0.0 };
            t.check(close(s, want.into()), || format!("q={q} j={j}"), want, fmt_c(s));
        }
        if q % 2 == 1 {
            // η is ψ_{(q−1)/2}.
            let ok = f.elements().skip(1).all(|x| {
                close(multiplicative_char(&f, (q - 1) / 2, x).expect("x != 0"), (eta(&f, x) as f64).into())
            });
            t.check(ok, || format!("q={q} eta"), "psi_(q-1)/2", "differs");
        }
    }
    Ok(t.done())
}

pub fn check_gauss_sums(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("quadratic Gauss sum", &format!("odd q in {qs:?}"));
    for &q in qs.iter().filter(|&&q| q % 2 == 1) {
        let (p, l) = prime_power(q).expect("prime power");
        let f = tower_for(q, 1)?.mid().clone();
        let (s, c) = (gauss_sum(&f), gauss_sum_closed(p, l));
        t.check(close(s, c), || format!("q={q}"), fmt_c(c), fmt_c(s));
    }
    Ok(t.done())
}

pub fn check_weil_sums(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("quadratic Weil sum", &format!("q in {qs:?}, all a2, a1, a0 and characters chi_b"));
    for &q in qs {
        let f = tower_for(q, 1)?.mid().clone();
        for b in 1..q {
            for a2 in f.elements() {
                if q % 2 == 1 && a2 == 0 {
                    continue;
                }
                for a1 in f.elements() {
                    for a0 in f.elements() {
                        let s = weil_sum(&f, b, a2, a1, a0);
                        let c = weil_sum_closed(&f, b, a2, a1, a0)?;
                        t.check(close(s, c), || format!("q={q} b={b} a2={a2} a1={a1} a0={a0}"), fmt_c(c), fmt_c(s));
                        if q % 2 == 0 {
                            t.check(
                                s.im.abs() < 1e-9 && (s.re - s.re.round()).abs() < 1e-9,
                                || format!("q={q} integrality"),
                                "integer",
                                fmt_c(s),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(t.done())
}

pub fn check_eta_sums(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("quadratic character sum", &format!("odd q in {qs:?}"));
    for &q in qs.iter().filter(|&&q| q % 2 == 1) {
        let f = tower_for(q, 1)?.mid().clone();
        for a2 in f.elements().skip(1) {
            for a1 in f.elements() {
                for a0 in f.elements() {
                    let (s, c) = (eta_sum(&f, a2, a1, a0), eta_sum_closed(&f, a2, a1, a0)?);
                    t.check(s == c, || format!("q={q} a2={a2} a1={a1} a0={a0}"), c, s);
                }
            }
        }
    }
    Ok(t.done())
}

pub fn check_root_counts(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("quadratic root count", &format!("q in {qs:?}"));
    for &q in qs {
        let f = tower_for(q, 1)?.mid().clone();
        for a1 in f.elements() {
            for a0 in f.elements() {
                let (s, c) = (quadratic_root_count(&f, a0, a1), quadratic_root_count_closed(&f, a0, a1));
                t.check(s == c, || format!("q={q} a0={a0} a1={a1}"), c, s);
            }
        }
    }
    Ok(t.done())
}

pub fn check_n1(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("trace-norm count N1", &format!("q in {qs:?}, m = 2"));
    for &q in qs {
        let tw = tower_for(q, 2)?;
        for alpha in 0..q {
            for beta in 0..q {
                let (s, c) = (n1(&tw, alpha, beta), n1_closed(&tw, alpha, beta));
                t.check(s == c, || format!("q={q} alpha={alpha} beta={beta}"), c, s);
            }
        }
    }
    Ok(t.done())
}

pub fn check_n2(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("trace-norm count N2", &format!("q in {qs:?}, m = 2"));
    for &q in qs {
        let tw = tower_for(q, 2)?;
        for a in 0..q {
            for b in 1..q {
                let (s, c) = (n2(&tw, a, b), n2_closed(&tw, a, b));
                t.check(s == c, || format!("q={q} a={a} b={b}"), c, s);
            }
        }
    }
    Ok(t.done())
}

pub fn check_n3(qs: &[u32], ms: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("trace-of-quadratic count N3", &format!("q in {qs:?}, m in {ms:?}"));
    for &q in qs {
        for &m in ms {
            let tw = tower_for(q, m)?;
            let pts: Vec<(u32, u32, u64, i64)> = (0..tw.qm)
                .into_par_iter()
                .flat_map_iter(|u| {
                    let tw = &tw;
                    (0..tw.qm).map(move |v| (u, v, n3(tw, u, v), n3_closed(tw, u, v)))
                })
                .collect();
            for (u, v, s, c) in pts {
                t.check(s as i64 == c, || format!("q={q} m={m} u={u} v={v}"), c, s);
            }
        }
    }
    Ok(t.done())
}

pub fn check_omega(qs: &[u32], ms: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("exponential sum Omega", &format!("q in {qs:?}, m in {ms:?}"));
    for &q in qs {
        for &m in ms {
            let tw = tower_for(q, m)?;
            let pts: Vec<(u32, u32, u32, Complex64, i64)> = (0..q)
                .flat_map(|a| (1..q).flat_map(move |b| (0..tw.qm).map(move |c| (a, b, c))))
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|(a, b, c)| (a, b, c, omega(&tw, a, b, c), omega_closed(&tw, a, b, c).expect("b in F_q*")))
                .collect();
            for (a, b, c, s, v) in pts {
                t.check(close(s, (v as f64).into()), || format!("q={q} m={m} a={a} b={b} c={c}"), v, fmt_c(s));
                if q % 2 == 0 {
                    t.check(s.im.abs() < 1e-9, || format!("q={q} m={m} integrality"), "real", fmt_c(s));
                }
            }
        }
    }
    Ok(t.done())
}

/// Closed form of Υ for the trace/norm pair (m = 2).
pub fn upsilon_closed_trace_norm(t: &FieldTower, a: u32, b: u32, c: u32) -> i64 {
    let q = t.q as i64;
    if b == 0 || b >= t.q {
        return 0;
    }
    let mid = t.mid();
    let ny = if c == 0 {
        if a == 0 {
            1
        } else {
            q + 1
        }
    } else if t.nm(c) == mid.neg(mid.mul(a, b)) {
        1
    } else {
        q + 1
    };
    q.pow(3) * ny - q.pow(4)
}

/// Closed form of Υ for the Tr(x) / Tr(y²) pair: q^m Ω(a,b,c) if b ∈ F_q*, else 0.
pub fn upsilon_closed_trace_square(t: &FieldTower, a: u32, b: u32, c: u32) -> i64 {
    if b == 0 || b >= t.q {
        return 0;
    }
    (t.q as i64).pow(t.m) * omega_closed(t, a, b, c).expect("b in F_q*")
}

pub fn check_upsilon_trace_norm(qs: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("Upsilon, trace/norm pair", &format!("q in {qs:?}, m = 2"));
    for &q in qs {
        let tw = tower_for(q, 2)?;
        let f: Vec<u32> = (0..tw.qm).map(|x| tw.tr(x)).collect();
        let g: Vec<u32> = (0..tw.qm).map(|y| tw.nm(y)).collect();
        let table = upsilon_table(&tw, &f, &g);
        for a in 0..q {
            for b in 0..tw.qm {
                for c in 0..tw.qm {
                    if b == 0 && c == 0 {
                        continue;
                    }
                    let s = table[a as usize][b as usize][c as usize];
                    let v = upsilon_closed_trace_norm(&tw, a, b, c);
                    t.check(close(s, (v as f64).into()), || format!("q={q} a={a} b={b} c={c}"), v, fmt_c(s));
                }
            }
        }
    }
    Ok(t.done())
}

pub fn check_upsilon_trace_square(qs: &[u32], ms: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("Upsilon, trace/trace-of-square pair", &format!("q in {qs:?}, m in {ms:?}"));
    for &q in qs {
        for &m in ms {
            let tw = tower_for(q, m)?;
            let top = tw.top();
            let f: Vec<u32> = (0..tw.qm).map(|x| tw.tr(x)).collect();
            let g: Vec<u32> = (0..tw.qm).map(|y| tw.tr(top.mul(y, y))).collect();
            let table = upsilon_table(&tw, &f, &g);
            for a in 0..q {
                for b in 0..tw.qm {
                    for c in 0..tw.qm {
                        if b == 0 && c == 0 {
                            continue;
                        }
                        let s = table[a as usize][b as usize][c as usize];
                        let v = upsilon_closed_trace_square(&tw, a, b, c);
                        t.check(close(s, (v as f64).into()), || format!("q={q} m={m} a={a} b={b} c={c}"), v, fmt_c(s));
                    }
                }
            }
        }
    }
    Ok(t.done())
}

/// The separated evaluation of Υ against the full quadruple sum.
pub fn check_upsilon_separation(cases: &[(u32, u32)]) -> Result<LemmaReport> {
    let mut t = Tally::new("Upsilon separation", &format!("(q, m) in {cases:?}, f = Tr, g = Norm or Tr(y^2)"));
    for &(q, m) in cases {
        let tw = tower_for(q, m)?;
        let top = tw.top();
        let f: Vec<u32> = (0..tw.qm).map(|x| tw.tr(x)).collect();
        let g: Vec<u32> = (0..tw.qm).map(|y| if m == 2 { tw.nm(y) } else { tw.tr(top.mul(y, y)) }).collect();
        let table = upsilon_table(&tw, &f, &g);
        for a in 0..q {
            for b in 0..tw.qm {
                for c in 0..tw.qm {
                    let d = upsilon_direct(&tw, &f, &g, a, b, c);
                    let s = table[a as usize][b as usize][c as usize];
                    t.check(close(s, d), || format!("q={q} m={m} a={a} b={b} c={c}"), fmt_c(d), fmt_c(s));
                }
            }
        }
    }
    Ok(t.done())
}

/// The length formula against direct counting of D for the trace/norm and
/// trace/trace-of-square pairs.
pub fn check_length_formula(qs: &[u32], ms: &[u32]) -> Result<LemmaReport> {
    let mut t = Tally::new("length formula", &format!("q in {qs:?}, m in {ms:?}"));
    for &q in qs {
        for &m in ms {
            let tw = tower_for(q, m)?;
            let (mid, top) = (tw.mid(), tw.top());
            let f: Vec<u32> = (0..tw.qm).map(|x| tw.tr(x)).collect();
            let mut gs = vec![(0..tw.qm).map(|y| tw.tr(top.mul(y, y))).collect::<Vec<u32>>()];
            if m == 2 {
                gs.push((0..tw.qm).map(|y| tw.nm(y)).collect());
            }
            for g in gs {
                let count = f.iter().map(|&fx| g.iter().filter(|&&gy| mid.add(fx, gy) == 0).count()).sum::<usize>();
                let n = length_formula(&tw, &f, &g);
                t.check(close(n, ((count + 1) as f64).into()), || format!("q={q} m={m}"), count + 1, fmt_c(n));
            }
        }
    }
    Ok(t.done())
}

/// Grid bounds for [`verify_lemmas`].
#[derive(Debug, Clone)]
pub struct LemmaGrid {
    /// Single-field lemmas run over every prime power up to this.
    pub max_q_single: u32,
    /// Tower lemmas run over q ≤ this ...
    pub max_q_tower: u32,
    /// ... and m in 1..=this.
    pub max_m: u32,
}

impl Default for LemmaGrid {
    fn default() -> Self {
        LemmaGrid { max_q_single: MAX_GRID_Q, max_q_tower: 5, max_m: 3 }
    }
}

/// Every oracle on its grid.
pub fn verify_lemmas(grid: &LemmaGrid) -> Result<Vec<LemmaReport>> {
    let single = prime_powers(grid.max_q_single);
    let small: Vec<u32> = prime_powers(grid.max_q_tower);
    let small_single: Vec<u32> = single.iter().copied().filter(|&q| q <= 16).collect();
    let ms: Vec<u32> = (1..=grid.max_m).collect();
    let ms2: Vec<u32> = ms.iter().copied().filter(|&m| m >= 2).collect();
    Ok(vec![
        check_additive_orthogonality(&single)?,
        check_multiplicative_orthogonality(&single)?,
        check_gauss_sums(&single)?,
        check_weil_sums(&small_single)?,
        check_eta_sums(&small_single)?,
        check_root_counts(&single)?,
        check_n1(&small)?,
        check_n2(&small)?,
        check_n3(&small, &ms)?,
        check_omega(&small, &ms)?,
        check_upsilon_separation(&[(2, 2), (3, 2), (2, 3)])?,
        check_upsilon_trace_norm(&small)?,
        check_upsilon_trace_square(&small, &ms2)?,
        check_length_formula(&small, &ms2)?,
    ])
}

/// Build-order gate: all lemma oracles pass, or the first violation.
pub fn lemma_gate(grid: &LemmaGrid) -> Result<Vec<LemmaReport>> {
    verify_lemmas(grid)?.into_iter().map(LemmaReport::into_result).collect()
}
