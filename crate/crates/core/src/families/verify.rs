//! Brute-force verification of a family instance against its profile.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expected::{expected_profile, Expectation, ExpectedProfile, Value};
use super::{CodeKind, Family, FamilyId, FamilySpec, WalshProvenance};
use crate::charsum;
use crate::error::{Error, Result};
use crate::funclib::FuncClass;
use crate::galois::FieldDescriptor;
use crate::lincode::{
    bound_verdicts, macwilliams_transform, optimality_certificate, pless_check, BoundKind, BoundVerdict, LinearCode,
    WeightDistribution, DEFAULT_BUDGET,
};

/// Brute-force dual enumeration limits.
const BRUTE_DUAL_MAX_N: usize = 64;
const BRUTE_DUAL_MAX_CODIM: usize = 16;
const BRUTE_DUAL_MAX_SIZE: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub budget: u64,
    pub random_bases: usize,
    pub hyperplane_trials: usize,
    pub seed: u64,
    /// Run the cross-validation checks in addition to the claims.
    pub cross_checks: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: DEFAULT_BUDGET, random_bases: 3, hyperplane_trials: 100, seed: 0x00C0_FFEE, cross_checks: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    /// Computed value equals the printed one.
    Pass,
    /// Computed value differs from the printed one and equals the pinned correction.
    Erratum,
    /// Printed value is not evaluable; the computed value is reported.
    Reported,
    /// Not computed (budget or hypothesis).
    Skipped,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightDiff {
    pub weight: u64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub source: String,
    pub status: ClaimStatus,
    pub printed: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diff: Vec<WeightDiff>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub distribution: WeightDistribution,
    /// "macwilliams" or "macwilliams+enumeration".
    pub method: String,
    pub pless: bool,
}

/// Everything computed for one code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeReport {
    pub kind: CodeKind,
    pub field_size: u32,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<WeightDistribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dual_bounds: Vec<BoundVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hermitian_self_orthogonal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionSummary {
    pub role: String,
    pub spec: crate::funclib::FuncSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<FuncClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walsh_histogram: Option<BTreeMap<i64, u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub spec: FamilySpec,
    pub field: FieldDescriptor,
    pub functions: Vec<FunctionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walsh: Option<WalshProvenance>,
    pub lengths: BTreeMap<String, usize>,
    pub dims: BTreeMap<String, usize>,
    pub distributions: BTreeMap<String, WeightDistribution>,
    pub duals: BTreeMap<String, DualReport>,
    pub bounds: BTreeMap<String, Vec<BoundVerdict>>,
    pub hermitian: BTreeMap<String, bool>,
    pub profile: ExpectedProfile,
    pub claims: Vec<ClaimResult>,
    /// The failing claims only.
    pub diffs: Vec<ClaimResult>,
    pub cross_checks: Vec<CrossCheck>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl FamilyReport {
    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }
    pub fn cross_check(&self, name: &str) -> Option<&CrossCheck> {
        self.cross_checks.iter().find(|c| c.name == name)
    }
    pub fn count(&self, status: ClaimStatus) -> usize {
        self.claims.iter().filter(|c| c.status == status).count()
    }
}

pub fn verify_family(spec: &FamilySpec) -> Result<FamilyReport> {
    verify_family_with(spec, &VerifyOptions { budget: crate::lincode::budget_from_env(), ..VerifyOptions::default() })
}

fn dist_value(w: &WeightDistribution) -> Value {
    Value::Dist(w.support().into_iter().map(|(i, c)| (i as u64, c.to_string())).collect())
}

fn dist_diff(expected: &Value, actual: &Value) -> Vec<WeightDiff> {
    let (Value::Dist(e), Value::Dist(a)) = (expected, actual) else { return Vec::new() };
    let mut weights: Vec<u64> = e.keys().chain(a.keys()).copied().collect();
    weights.sort_unstable();
    weights.dedup();
    let zero = "0".to_string();
    weights
        .into_iter()
        .filter_map(|w| {
            let ev = e.get(&w).unwrap_or(&zero);
            let av = a.get(&w).unwrap_or(&zero);
            (ev != av).then(|| WeightDiff { weight: w, expected: ev.clone(), actual: av.clone() })
        })
        .collect()
}

fn judge(exp: &Expectation, actual: Option<Value>, skip_reason: Option<String>) -> ClaimResult {
    let mut r = ClaimResult {
        id: exp.id.clone(),
        source: exp.source.clone(),
        status: ClaimStatus::Skipped,
        printed: exp.printed.clone(),
        corrected: exp.corrected.clone(),
        actual: actual.clone(),
        diff: Vec::new(),
        note: exp.note.clone().or(skip_reason),
    };
    let Some(actual) = actual else { return r };
    r.status = if matches!(exp.printed, Value::Text(_)) {
        ClaimStatus::Reported
    } else if actual == exp.printed {
        ClaimStatus::Pass
    } else if exp.corrected.as_ref() == Some(&actual) {
        ClaimStatus::Erratum
    } else {
        ClaimStatus::Fail
    };
    if r.status == ClaimStatus::Fail {
        r.diff = dist_diff(exp.corrected.as_ref().unwrap_or(&exp.printed), &actual);
    }
    r
}

struct Computed {
    code: LinearCode,
    report: CodeReport,
}

fn analyze_code(kind: CodeKind, code: LinearCode, opts: &VerifyOptions, checks: &mut Vec<CrossCheck>) -> Computed {
    let n = code.n();
    let k = code.k();
    let fs = code.field().size();
    let mut report = CodeReport {
        kind,
        field_size: fs,
        n,
        k,
        d: None,
        distribution: None,
        dual: None,
        bounds: Vec::new(),
        dual_bounds: Vec::new(),
        hermitian_self_orthogonal: code.hermitian_self_orthogonal().ok(),
        skipped: None,
    };
    let w = match code.weight_distribution(opts.budget) {
        Ok(w) => w,
        Err(e) => {
            report.skipped = Some(e.to_string());
            return Computed { code, report };
        }
    };
    report.d = w.min_distance();
    if let Some(d) = report.d {
        report.bounds = bound_verdicts(n as u64, k as u64, d as u64, fs as u64);
    }
    match macwilliams_transform(&w, k) {
        Ok(dw) => {
            let mut method = "macwilliams".to_string();
            let codim = n - k;
            let brute_ok = n <= BRUTE_DUAL_MAX_N
                && codim <= BRUTE_DUAL_MAX_CODIM
                && (fs as u64).checked_pow(codim as u32).is_some_and(|s| s <= BRUTE_DUAL_MAX_SIZE.min(opts.budget));
            if brute_ok {
                let brute = code.dual().weight_distribution(opts.budget).expect("within limits");
                checks.push(CrossCheck {
                    name: format!("{}.dual.macwilliams_vs_enumeration", kind.as_str()),
                    passed: brute == dw,
                    detail: format!("enumerated {}", brute.enumerator()),
                });
                method.push_str("+enumeration");
            }
            let prefix: Vec<u64> = (0..4).map(|i| dw.count(i).try_into().unwrap_or(u64::MAX)).collect();
            let pless = pless_check(&w, k, [prefix[0], prefix[1], prefix[2], prefix[3]]).passed;
            let dd = dw.min_distance();
            if let Some(d) = dd {
                report.dual_bounds = bound_verdicts(n as u64, codim as u64, d as u64, fs as u64);
            }
            report.dual = Some(DualReport { n, k: codim, d: dd, distribution: dw, method, pless });
        }
        Err(e) => report.skipped = Some(format!("MacWilliams transform failed: {e}")),
    }
    report.distribution = Some(w);
    Computed { code, report }
}

fn actual_value(id: &str, codes: &BTreeMap<CodeKind, Computed>, defining: usize) -> (Option<Value>, Option<String>) {
    if id == "defining_set.size" {
        return (Some(Value::Int(defining as u64)), None);
    }
    let (kind, rest) = id.split_once('.').expect("claim ids are kind.field");
    let kind = match kind {
        "base" => CodeKind::Base,
        "subfield" => CodeKind::Subfield,
        "punctured" => CodeKind::Punctured,
        other => return (None, Some(format!("unknown claim scope {other}"))),
    };
    let Some(c) = codes.get(&kind) else { return (None, Some(format!("{} code not computed", kind.as_str()))) };
    let r = &c.report;
    let skipped = || (None, Some(r.skipped.clone().unwrap_or_else(|| "not computed".into())));
    let int = |v: Option<usize>| v.map(|x| Value::Int(x as u64));
    let v = match rest {
        "n" => Some(Value::Int(r.n as u64)),
        "k" => Some(Value::Int(r.k as u64)),
        "d" => int(r.d),
        "distribution" => r.distribution.as_ref().map(dist_value),
        "dual.n" => Some(Value::Int(r.n as u64)),
        "dual.k" => Some(Value::Int((r.n - r.k) as u64)),
        "dual.d" => r.dual.as_ref().and_then(|d| int(d.d)),
        "griesmer_equality" => r
            .bounds
            .iter()
            .find(|b| b.bound == BoundKind::Griesmer)
            .map(|b| Value::Bool(b.meets_with_equality)),
        "dual.almost_mds" => r
            .dual_bounds
            .iter()
            .find(|b| b.bound == BoundKind::Singleton)
            .map(|b| Value::Bool(b.label.as_deref() == Some("almost MDS"))),
        "dual.sphere_packing_optimal" => r.dual.as_ref().and_then(|d| d.d).map(|d| {
            let cert = optimality_certificate(r.n as u64, (r.n - r.k) as u64, d as u64, r.field_size as u64);
            Value::Bool(
                cert.distance_optimal_by(BoundKind::SpherePacking) || cert.dimension_optimal_by(BoundKind::SpherePacking),
            )
        }),
        "hermitian_self_orthogonal" => Some(Value::Bool(c.code.hermitian_self_orthogonal().unwrap_or(false))),
        other => return (None, Some(format!("unknown claim {other}"))),
    };
    match v {
        Some(v) => (Some(v), None),
        None => skipped(),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize, size: u32) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(0..size)).collect()
}

/// Build, enumerate and compare everything the profile claims about `spec`.
pub fn verify_family_with(spec: &FamilySpec, opts: &VerifyOptions) -> Result<FamilyReport> {
    let fam = Family::new(spec)?;
    let profile = expected_profile(&fam)?;
    let tower = fam.tower();
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let defining = fam.defining_set();
    let base = fam.build_code();
    let subfield = fam.subfield_code(&fam.polynomial_basis())?;
    let punctured = subfield.puncture(0)?;

    // Codes with a closed form must fit the budget; the base code of F3..F6 is
    // computed when it fits (it feeds the dual-distance comparison).
    for (kind, code) in [(CodeKind::Subfield, &subfield), (CodeKind::Punctured, &punctured)] {
        if profile.code(kind).is_some_and(|c| c.distribution.is_some())
            && code.size().is_none_or(|s| s > opts.budget) {
                return Err(Error::Resource(format!(
                    "{} code has {}^{} codewords, over the budget of {}",
                    kind.as_str(),
                    code.field().size(),
                    code.k(),
                    opts.budget
                )));
            }
    }
    let mut codes = BTreeMap::new();
    for (kind, code) in [(CodeKind::Base, base), (CodeKind::Subfield, subfield), (CodeKind::Punctured, punctured)] {
        codes.insert(kind, analyze_code(kind, code, opts, &mut checks));
    }

    let claims: Vec<ClaimResult> = profile
        .claims
        .iter()
        .map(|e| {
            let (actual, why) = actual_value(&e.id, &codes, defining.len());
            judge(e, actual, why)
        })
        .collect();

    for c in codes.values() {
        if let Some(d) = &c.report.dual {
            checks.push(CrossCheck {
                name: format!("{}.pless", c.report.kind.as_str()),
                passed: d.pless,
                detail: "first four power moments with the MacWilliams dual prefix".into(),
            });
        }
        if let Some(w) = &c.report.distribution {
            checks.push(CrossCheck {
                name: format!("{}.distribution_total", c.report.kind.as_str()),
                passed: w.is_well_formed() && w.dimension() == Some(c.report.k),
                detail: format!("A_0 = 1 and total = {}^{}", c.report.field_size, c.report.k),
            });
        }
    }

    // Length formula from character sums.
    let lf = charsum::length_formula(tower, fam.f_table(), fam.g_table());
    checks.push(CrossCheck {
        name: "length_formula".into(),
        passed: (lf.re - (defining.len() + 1) as f64).abs() < charsum::TOLERANCE && lf.im.abs() < charsum::TOLERANCE,
        detail: format!("character-sum length {:.6} vs 1 + #D = {}", lf.re, defining.len() + 1),
    });

    if opts.cross_checks {
        cross_validate(&fam, &codes, &defining, opts, &mut checks)?;
    }

    // Parent dual distance bounds the subfield dual distance from below.
    if let (Some(bd), Some(sd)) = (
        codes[&CodeKind::Base].report.dual.as_ref().and_then(|d| d.d),
        codes[&CodeKind::Subfield].report.dual.as_ref().and_then(|d| d.d),
    ) {
        checks.push(CrossCheck {
            name: "subfield.dual_distance_monotone".into(),
            passed: sd >= bd,
            detail: format!("d(subfield dual) = {sd} >= d(base dual) = {bd}"),
        });
    }

    if fam.id() == FamilyId::F2 && fam.q() == 4 {
        notes.push(
            "the punctured code over F_4 is checked for Hermitian self-orthogonality; it is not self-dual \
             (dimension 2m+1 is not half the length)"
                .into(),
        );
    }
    if fam.id() == FamilyId::F4 && fam.f_table() == fam.g_table() {
        notes.push(
            "the two almost bent maps are distinct but their traces coincide as Boolean functions \
             (exponents in one cyclotomic coset), so f = g"
                .into(),
        );
    }
    for c in &claims {
        if c.status == ClaimStatus::Erratum {
            notes.push(format!("{}: printed {} differs; pinned correction confirmed", c.id, c.printed));
        }
        if c.status == ClaimStatus::Reported {
            notes.push(format!("{}: printed {} is not well formed; computed {}", c.id, c.printed, c.actual.as_ref().map_or("-".into(), |v| v.to_string())));
        }
    }

    let functions = function_summaries(&fam);
    let mut lengths = BTreeMap::new();
    let mut dims = BTreeMap::new();
    let mut distributions = BTreeMap::new();
    let mut duals = BTreeMap::new();
    let mut bounds = BTreeMap::new();
    let mut hermitian = BTreeMap::new();
    for c in codes.values() {
        let r = &c.report;
        let key = r.kind.as_str().to_string();
        lengths.insert(key.clone(), r.n);
        dims.insert(key.clone(), r.k);
        if let Some(w) = &r.distribution {
            distributions.insert(key.clone(), w.clone());
        }
        if let Some(d) = &r.dual {
            duals.insert(key.clone(), d.clone());
        }
        if !r.bounds.is_empty() {
            bounds.insert(key.clone(), r.bounds.clone());
        }
        if !r.dual_bounds.is_empty() {
            bounds.insert(format!("{key}.dual"), r.dual_bounds.clone());
        }
        if let Some(h) = r.hermitian_self_orthogonal {
            hermitian.insert(key, h);
        }
    }
    let diffs: Vec<ClaimResult> = claims.iter().filter(|c| c.status == ClaimStatus::Fail).cloned().collect();
    let passed = diffs.is_empty() && checks.iter().all(|c| c.passed);
    Ok(FamilyReport {
        spec: fam.spec().clone(),
        field: tower.descriptor(),
        functions,
        walsh: fam.walsh().cloned(),
        lengths,
        dims,
        distributions,
        duals,
        bounds,
        hermitian,
        profile,
        claims,
        diffs,
        cross_checks: checks,
        notes,
        passed,
    })
}

fn function_summaries(fam: &Family) -> Vec<FunctionSummary> {
    let spec = fam.spec();
    let find = |s: &crate::funclib::FuncSpec| fam.verified_functions().iter().find(|v| v.spec == *s);
    [("f", spec.f.as_ref()), ("g", spec.g.as_ref())]
        .into_iter()
        .filter_map(|(role, s)| s.map(|s| (role, s)))
        .map(|(role, s)| {
            let v = find(s);
            FunctionSummary {
                role: role.into(),
                spec: s.clone(),
                class: v.map(|v| v.class),
                walsh_histogram: v.map(|v| v.spectrum.histogram.clone()),
            }
        })
        .collect()
}

fn cross_validate(
    fam: &Family,
    codes: &BTreeMap<CodeKind, Computed>,
    defining: &[(u32, u32)],
    opts: &VerifyOptions,
    checks: &mut Vec<CrossCheck>,
) -> Result<()> {
    let tower = fam.tower();
    let subfield = &codes[&CodeKind::Subfield].code;
    let trace = fam.trace_code();
    checks.push(CrossCheck {
        name: "subfield_vs_trace_row_space".into(),
        passed: trace.same_row_space(subfield),
        detail: format!("trace code k = {}, subfield code k = {}", trace.k(), subfield.k()),
    });

    let sub_dist = codes[&CodeKind::Subfield].report.distribution.as_ref();
    let bases = fam.random_bases(opts.random_bases, opts.seed);
    for (i, basis) in bases.iter().enumerate() {
        let other = fam.subfield_code(basis)?;
        let mut passed = other.same_row_space(subfield);
        let mut detail = format!("basis {basis:?}");
        if let Some(w) = sub_dist {
            if let Ok(ow) = other.weight_distribution(opts.budget) {
                passed &= &ow == w;
                detail.push_str(", distributions equal");
            }
        }
        checks.push(CrossCheck { name: format!("basis_invariance.{i}"), passed, detail });
    }

    let base = &codes[&CodeKind::Base].code;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9E37_79B9);
    let top = base.field().size();
    let mut bad = 0;
    for _ in 0..opts.hyperplane_trials {
        let u = random_vector(&mut rng, base.generator().len(), top);
        if !base.hyperplane_weight_check(&u)? {
            bad += 1;
        }
    }
    checks.push(CrossCheck {
        name: "hyperplane_weight_identity".into(),
        passed: bad == 0,
        detail: format!("{} random messages, {bad} failures", opts.hyperplane_trials),
    });

    // Parameter-space enumeration of c_{a,b,c}: every codeword appears
    // q^{2m+1-k} times, and the +1 offset over the punctured word happens
    // exactly when Tr(b) != 0.
    if matches!(fam.id(), FamilyId::F1 | FamilyId::F2) {
        let q = tower.q as u64;
        let qm = tower.qm as u64;
        let space = q * qm * qm;
        if let (Some(w), true) = (sub_dist, space <= opts.budget) {
            let mut hist = vec![0u64; defining.len() + 2];
            let mut offset_ok = true;
            for a in 0..tower.q {
                for b in 0..tower.qm {
                    let tb = tower.tr(b);
                    for c in 0..tower.qm {
                        let word = fam.trace_codeword(defining, a, b, c);
                        let full = word.iter().filter(|&&x| x != 0).count();
                        let tail = word[1..].iter().filter(|&&x| x != 0).count();
                        offset_ok &= full - tail == usize::from(tb != 0);
                        hist[full] += 1;
                    }
                }
            }
            let reps = space / (q.pow(subfield.k() as u32));
            let ok = w.counts.iter().enumerate().all(|(i, c)| *c == num_bigint::BigUint::from(hist[i]) / reps
                && num_bigint::BigUint::from(hist[i]) % reps == num_bigint::BigUint::from(0u32));
            checks.push(CrossCheck {
                name: "delta_offset".into(),
                passed: ok && offset_ok,
                detail: format!("{space} parameter triples, each codeword {reps} times"),
            });
        }
    }
    Ok(())
}
