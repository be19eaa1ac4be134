use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::*;
use crate::families::{expected_profile, ClaimStatus, CodeKind, Family, FamilyId, FamilySpec, Value};
use crate::funclib::FuncSpec;
use crate::lincode::{macwilliams_transform, DEFAULT_BUDGET};

/// Duals with more codewords than this are never enumerated.
const DUAL_ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct DesignOptions {
    /// q for the trace/norm family (m = 2).
    pub f1_qs: Vec<u32>,
    /// m for the binary trace/trace-of-square punctured code.
    pub f2_ms: Vec<u32>,
    /// m for the binary bent-pair punctured code; both signs of W are run.
    pub f6_ms: Vec<u32>,
    pub budget: u64,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions { f1_qs: vec![2, 3], f2_ms: vec![2, 3], f6_ms: vec![2, 4], budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMethod {
    Enumeration,
    DualEnumeration,
    SupportSearch,
    Complement,
    NotRun,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignClaim {
    pub id: String,
    pub source: String,
    pub family: FamilyId,
    pub q: u32,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<i64>,
    pub side: Side,
    pub n: usize,
    pub t: usize,
    /// `None` for an aggregated skip over several weights.
    pub kappa: Option<usize>,
    pub status: ClaimStatus,
    pub method: DesignMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codewords: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_identity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assmus_mattson: Option<AmAudit>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub problems: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub design: Option<VerifiedDesign>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub claims: Vec<DesignClaim>,
    pub passed: bool,
}

impl DesignReport {
    pub fn count(&self, status: ClaimStatus) -> usize {
        self.claims.iter().filter(|c| c.status == status).count()
    }
    pub fn claim(&self, id: &str) -> Option<&DesignClaim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// One code under study with its actual and printed weight data.
struct Subject {
    family: FamilyId,
    q: u32,
    m: u32,
    w: Option<i64>,
    code: LinearCode,
    dist: WeightDistribution,
    dual: WeightDistribution,
    printed: WeightDistribution,
    printed_dual: WeightDistribution,
    tag: String,
}

fn value_to_distribution(v: &Value, n: usize, s: u32) -> Result<WeightDistribution> {
    let Value::Dist(d) = v else { return Err(Error::Consistency(format!("not a distribution: {v}"))) };
    let pairs: Vec<(u64, BigUint)> = d
        .iter()
        .map(|(w, c)| c.parse::<BigUint>().map(|c| (*w, c)).map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<_>>()?;
    WeightDistribution::from_pairs(n, s, &pairs)
}

fn subject(spec: &FamilySpec, kind: CodeKind, budget: u64) -> Result<Subject> {
    let fam = Family::new(spec)?;
    let code = fam.code(kind)?;
    let profile = expected_profile(&fam)?;
    let exp = profile
        .code(kind)
        .and_then(|c| c.effective_distribution())
        .ok_or_else(|| Error::NoClosedForm(format!("{} {} code", spec.label(), kind.as_str())))?;
    let s = code.field().size();
    let printed = value_to_distribution(exp, code.n(), s)?;
    let printed_dual = macwilliams_transform(&printed, code.k())?;
    let dist = code.weight_distribution(budget)?;
    let dual = macwilliams_transform(&dist, code.k())?;
    let w = fam.walsh().map(|p| p.w);
    let tag = match w {
        Some(w) => format!("{}.q{}.m{}.w{}", fam.id(), fam.q(), fam.m(), w),
        None => format!("{}.q{}.m{}", fam.id(), fam.q(), fam.m()),
    }
    .to_lowercase();
    Ok(Subject { family: fam.id(), q: fam.q(), m: fam.m(), w, code, dist, dual, printed, printed_dual, tag })
}

fn count_u128(w: &WeightDistribution, i: usize) -> u128 {
    w.count(i).to_u128().unwrap_or(u128::MAX)
}

struct Claim<'a> {
    id: String,
    source: String,
    side: Side,
    t: usize,
    kappa: usize,
    expected_lambda: Option<u64>,
    sub: &'a Subject,
}

impl<'a> Claim<'a> {
    fn blank(&self, status: ClaimStatus, method: DesignMethod) -> DesignClaim {
        DesignClaim {
            id: self.id.clone(),
            source: self.source.clone(),
            family: self.sub.family,
            q: self.sub.q,
            m: self.sub.m,
            w: self.sub.w,
            side: self.side,
            n: self.sub.code.n(),
            t: self.t,
            kappa: Some(self.kappa),
            status,
            method,
            expected_lambda: self.expected_lambda,
            lambda: None,
            blocks: None,
            codewords: None,
            count_identity: None,
            assmus_mattson: None,
            problems: Vec::new(),
            note: None,
            design: None,
        }
    }

    /// Extracts, verifies and audits the design. The extracted word count must
    /// match the code's (or MacWilliams dual's) multiplicity of weight κ.
    fn run(&self, budget: u64) -> DesignClaim {
        let sub = self.sub;
        let code = &sub.code;
        let s = code.field().size() as u64;
        let dual_size = s.checked_pow((code.n() - code.k()) as u32);
        let dual_d = sub.dual.min_distance();
        let extracted = match self.side {
            Side::Code => supports_of_weight(code, self.kappa, budget).map(|d| (d, DesignMethod::Enumeration)),
            Side::Dual => {
                if dual_size.is_some_and(|z| z <= DUAL_ENUMERATION_LIMIT.min(budget)) {
                    supports_of_weight(&code.dual(), self.kappa, budget).map(|d| (d, DesignMethod::DualEnumeration))
                } else if dual_d == Some(self.kappa) {
                    dual_min_weight_supports(code, self.kappa).map(|d| (d, DesignMethod::SupportSearch))
                } else {
                    Err(Error::Resource(format!(
                        "the dual has {}^{} codewords and weight {} is not its minimum weight",
                        s,
                        code.n() - code.k(),
                        self.kappa
                    )))
                }
            }
        };
        let (design, method) = match extracted {
            Ok(x) => x,
            Err(Error::Resource(msg)) => {
                let mut c = self.blank(ClaimStatus::Skipped, DesignMethod::NotRun);
                c.note = Some(format!("not desk-verifiable: {msg}"));
                return c;
            }
            Err(e) => {
                let mut c = self.blank(ClaimStatus::Fail, DesignMethod::NotRun);
                c.problems.push(e.to_string());
                return c;
            }
        };
        let mut c = self.blank(ClaimStatus::Pass, method);
        let actual_words = match self.side {
            Side::Code => count_u128(&sub.dist, self.kappa),
            Side::Dual => count_u128(&sub.dual, self.kappa),
        };
        c.codewords = Some(design.codewords);
        c.blocks = Some(design.block_count());
        if design.codewords as u128 != actual_words {
            c.problems.push(format!("found {} weight-{} codewords, the distribution has {actual_words}", design.codewords, self.kappa));
        }
        let ratio_ok = design.codewords % design.block_count() as u64 == 0
            && (s - 1).is_multiple_of(design.codewords / design.block_count() as u64);
        if !ratio_ok {
            c.problems.push(format!("{} codewords on {} supports over F_{s}", design.codewords, design.block_count()));
        }
        let (dw, ddw) = (&sub.dist, &sub.dual);
        let am = assmus_mattson_audit(dw, ddw, self.t, self.side, self.kappa);
        if !am.holds {
            c.problems.push(format!("Assmus-Mattson hypothesis not met: {am:?}"));
        }
        c.assmus_mattson = Some(am);
        self.finish(c, &design)
    }

    fn finish(&self, mut c: DesignClaim, design: &DesignInstance) -> DesignClaim {
        match check_t_design(design, self.t) {
            Ok(DesignVerdict::Design { lambda }) => {
                c.lambda = Some(lambda);
                let id = design_count_identity(design.block_count() as u64, design.n, design.kappa, self.t, lambda);
                c.count_identity = Some(id);
                if !id {
                    c.problems.push("block-count identity fails".into());
                }
                if let Some(e) = self.expected_lambda {
                    if e != lambda {
                        c.problems.push(format!("lambda {lambda}, expected {e}"));
                    }
                }
                c.design = Some(VerifiedDesign { n: design.n, t: self.t, kappa: design.kappa, lambda, blocks: design.blocks.clone() });
            }
            Ok(DesignVerdict::NotADesign { first, first_count, other, other_count }) => {
                c.problems.push(format!("not a design: {first:?} in {first_count} blocks, {other:?} in {other_count}"));
            }
            Err(e) => c.problems.push(e.to_string()),
        }
        if self.expected_lambda.is_none() {
            c.problems.push("no predicted lambda".into());
        }
        if !c.problems.is_empty() {
            c.status = ClaimStatus::Fail;
        }
        c
    }
}

/// λ predicted from the printed multiplicity of weight κ on `side`.
fn predicted_lambda(sub: &Subject, side: Side, kappa: usize, t: usize) -> Option<u64> {
    let words = match side {
        Side::Code => count_u128(&sub.printed, kappa),
        Side::Dual => count_u128(&sub.printed_dual, kappa),
    };
    let s = sub.code.field().size() as u128;
    // Scalar multiples share a support; over F_2 there is one word per block.
    let per_block = if s == 2 { 1 } else { s - 1 };
    if words % per_block != 0 {
        return None;
    }
    lambda_from_blocks(words / per_block, sub.code.n(), kappa, t)
}

fn f1_claims(q: u32, opts: &DesignOptions, out: &mut Vec<DesignClaim>) -> Result<()> {
    let sub = subject(&FamilySpec::new(FamilyId::F1, q, 2), CodeKind::Base, opts.budget)?;
    let q64 = q as u64;
    let n = sub.code.n();
    let kappa = (q64.pow(3) - q64) as usize;
    let primal = Claim {
        id: format!("{}.base.weight_{kappa}", sub.tag),
        source: "F1 base code, weight q^3-q supports: 2-(q^3+1, q^3-q, (q-1)(q^3-q-1))".into(),
        side: Side::Code,
        t: 2,
        kappa,
        expected_lambda: Some((q64 - 1) * (q64.pow(3) - q64 - 1)),
        sub: &sub,
    };
    let pc = primal.run(opts.budget);
    let base_design = pc.design.clone();
    out.push(pc);

    let comp = Claim {
        id: format!("{}.base.weight_{kappa}.complement", sub.tag),
        source: "complement of the F1 weight q^3-q design: Steiner system S(2, q+1, q^3+1)".into(),
        side: Side::Code,
        t: 2,
        kappa: n - kappa,
        expected_lambda: Some(1),
        sub: &sub,
    };
    match base_design {
        Some(d) => {
            let inst = DesignInstance { n: d.n, kappa: d.kappa, blocks: d.blocks, codewords: 0 };
            let cd = complement_design(&inst);
            let mut c = comp.blank(ClaimStatus::Pass, DesignMethod::Complement);
            c.blocks = Some(cd.block_count());
            let mut c = comp.finish(c, &cd);
            if c.design.as_ref().is_some_and(|d| !d.is_steiner()) {
                c.problems.push("complement is not a Steiner system".into());
                c.status = ClaimStatus::Fail;
            }
            out.push(c);
        }
        None => {
            let mut c = comp.blank(ClaimStatus::Fail, DesignMethod::NotRun);
            c.problems.push("base design failed".into());
            out.push(c);
        }
    }

    // λ = 6 A₃⊥ / (q³(q²−1)(q³+1)), with A₃⊥ from the transform of the printed enumerator.
    let a3 = count_u128(&sub.printed_dual, 3);
    let den = (q64.pow(3) * (q64 * q64 - 1) * (q64.pow(3) + 1)) as u128;
    let lambda = (6 * a3).is_multiple_of(den).then(|| (6 * a3 / den) as u64);
    let dual = Claim {
        id: format!("{}.base.dual.weight_3", sub.tag),
        source: "F1 dual minimum-weight supports: 2-(q^3+1, 3, 6A3/(q^3(q^2-1)(q^3+1)))".into(),
        side: Side::Dual,
        t: 2,
        kappa: 3,
        expected_lambda: lambda,
        sub: &sub,
    };
    let mut c = dual.run(opts.budget);
    if sub.dual.min_distance() != Some(3) {
        c.problems.push(format!("dual minimum distance {:?}, expected 3", sub.dual.min_distance()));
        c.status = ClaimStatus::Fail;
    }
    let prefix = format!("A3 = {a3} from the MacWilliams transform");
    c.note = Some(match c.note.take() {
        Some(n) => format!("{prefix}; {n}"),
        None => prefix,
    });
    out.push(c);
    Ok(())
}

fn dual_class_claims(sub: &Subject, t: usize, kappas: Vec<usize>, source: &str, opts: &DesignOptions, out: &mut Vec<DesignClaim>) {
    let mut skipped = Vec::new();
    let mut skip_note = None;
    for kappa in kappas {
        let claim = Claim {
            id: format!("{}.punctured.dual.weight_{kappa}", sub.tag),
            source: source.into(),
            side: Side::Dual,
            t,
            kappa,
            expected_lambda: predicted_lambda(sub, Side::Dual, kappa, t),
            sub,
        };
        let c = claim.run(opts.budget);
        if c.status == ClaimStatus::Skipped {
            skipped.push(kappa);
            skip_note.get_or_insert(c.note.clone().unwrap_or_default());
        } else {
            out.push(c);
        }
    }
    if skipped.is_empty() {
        return;
    }
    let list: Vec<String> = skipped.iter().map(|k| k.to_string()).collect();
    let dual_log = (sub.code.n() - sub.code.k()) as u32;
    out.push(DesignClaim {
        id: format!("{}.punctured.dual.other_weights", sub.tag),
        source: source.into(),
        family: sub.family,
        q: sub.q,
        m: sub.m,
        w: sub.w,
        side: Side::Dual,
        n: sub.code.n(),
        t,
        kappa: None,
        status: ClaimStatus::Skipped,
        method: DesignMethod::NotRun,
        expected_lambda: None,
        lambda: None,
        blocks: None,
        codewords: None,
        count_identity: None,
        assmus_mattson: None,
        problems: Vec::new(),
        note: Some(format!(
            "weights {} of a dual with 2^{dual_log} codewords; weight {}: {}",
            list.join(", "),
            skipped[0],
            skip_note.unwrap_or_default()
        )),
        design: None,
    });
}

fn f2_claims(m: u32, opts: &DesignOptions, out: &mut Vec<DesignClaim>) -> Result<()> {
    let sub = subject(&FamilySpec::new(FamilyId::F2, 2, m), CodeKind::Punctured, opts.budget)?;
    let n = sub.code.n();
    let kappa = 1usize << (2 * m - 2);
    let primal = Claim {
        id: format!("{}.punctured.weight_{kappa}", sub.tag),
        source: "binary F2 punctured code, weight 2^(2m-2) supports: 3-(2^(2m-1), 2^(2m-2), 2^(2m-3)-1)".into(),
        side: Side::Code,
        t: 3,
        kappa,
        expected_lambda: Some((1u64 << (2 * m - 3)) - 1),
        sub: &sub,
    };
    out.push(primal.run(opts.budget));
    let kappas: Vec<usize> = (4..=n.saturating_sub(4)).step_by(2).filter(|&k| count_u128(&sub.printed_dual, k) > 0).collect();
    dual_class_claims(&sub, 3, kappas, "binary F2 punctured dual, even weights 4..2^(2m-1)-4: 3-designs", opts, out);
    Ok(())
}

fn f6_claims(m: u32, positive: bool, opts: &DesignOptions, out: &mut Vec<DesignClaim>) -> Result<()> {
    let mut spec = FamilySpec::new(FamilyId::F6, 2, m);
    if positive {
        let mm = |shift| FuncSpec::BentMaioranaMcFarland { pi_exp: 1, shift, complement: false };
        spec = spec.with_functions(mm(0), mm(1));
    }
    let sub = subject(&spec, CodeKind::Punctured, opts.budget)?;
    let w = sub.w.expect("bent pair has W");
    let n = sub.code.n();
    let base = (1i64 << (2 * m - 2)) + w / 4;
    let h = 1i64 << (m - 2);
    for kappa in [base - h, base + h] {
        let kappa = kappa as usize;
        let claim = Claim {
            id: format!("{}.punctured.weight_{kappa}", sub.tag),
            source: "binary F6 punctured code, weights 2^(2m-2)+W/4-+2^(m-2): 2-designs".into(),
            side: Side::Code,
            t: 2,
            kappa,
            expected_lambda: predicted_lambda(&sub, Side::Code, kappa, 2),
            sub: &sub,
        };
        out.push(claim.run(opts.budget));
    }
    let kappas: Vec<usize> = (4..=n).filter(|&k| count_u128(&sub.printed_dual, k) > 0).collect();
    dual_class_claims(&sub, 2, kappas, "binary F6 punctured dual, weights 4..2^(2m-1)+W/2: 2-designs", opts, out);
    Ok(())
}

/// Runs every design claim on the configured parameters.
pub fn verify_design_theorems(opts: &DesignOptions) -> Result<DesignReport> {
    let mut claims = Vec::new();
    for &q in &opts.f1_qs {
        f1_claims(q, opts, &mut claims)?;
    }
    for &m in &opts.f2_ms {
        f2_claims(m, opts, &mut claims)?;
    }
    for &m in &opts.f6_ms {
        for positive in [false, true] {
            f6_claims(m, positive, opts, &mut claims)?;
        }
    }
    let passed = claims.iter().all(|c| c.status != ClaimStatus::Fail);
    Ok(DesignReport { claims, passed })
}
