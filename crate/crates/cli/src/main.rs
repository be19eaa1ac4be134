mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use config::{AnalyzeArgs, BuildArgs, Cli, Command, ConfigFile, DesignArgs, FamilyArgs, LemmaArgs, VerifyArgs};
use fwc_core::charsum::{verify_lemmas, LemmaGrid};
use fwc_core::designs::{
    complement_design, dual_min_weight_supports, supports_of_weight, verified, verify_design_theorems, DesignOptions,
};
use fwc_core::families::{subfield_code, CodeKind, Family, FamilyId, FamilySpec};
use fwc_core::funclib::FuncSpec;
use fwc_core::galois::{FieldDescriptor, FieldTower};
use fwc_core::ledger::{run_ledger, Ledger, LedgerOptions};
use fwc_core::lincode::{
    bound_verdicts, budget_from_env, distribution_csv, macwilliams_transform, optimality_certificate, read_matrix,
    write_matrix, BoundVerdict, LinearCode, Optimality, WeightDistribution, DEFAULT_BUDGET,
};
use fwc_core::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
    /// Verification ran and found a discrepancy.
    Diff(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Diff(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::Resource(_) => 3,
                Error::Spec(_) | Error::Parse(_) | Error::Domain(_) | Error::Structural(_) | Error::NoClosedForm(_) => 2,
                Error::EmptyDesign(_) => 2,
                Error::Consistency(_) | Error::LemmaViolation(_) | Error::NotADesign(_) => 1,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
            CliError::Diff(s) => write!(f, "verification failed: {s}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fwc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

struct Globals {
    budget: u64,
}

fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    // Flag, then FWC_BUDGET, then the config file, then the default.
    let budget = cli
        .budget
        .or_else(|| std::env::var("FWC_BUDGET").ok().map(|_| budget_from_env()))
        .or(cfg.budget)
        .unwrap_or(DEFAULT_BUDGET);
    if let Some(n) = cli.threads.or(cfg.threads) {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let g = Globals { budget };
    match cli.command {
        Command::Build(mut a) => {
            a.merge(std::mem::take(&mut cfg.build));
            cmd_build(&a)
        }
        Command::Analyze(mut a) => {
            a.merge(std::mem::take(&mut cfg.analyze));
            cmd_analyze(&a, &g)
        }
        Command::Verify(mut a) => {
            a.merge(std::mem::take(&mut cfg.verify));
            cmd_verify(&a, &g)
        }
        Command::Lemmas(mut a) => {
            a.merge(std::mem::take(&mut cfg.lemmas));
            cmd_lemmas(&a)
        }
        Command::Designs(mut a) => {
            a.merge(std::mem::take(&mut cfg.designs));
            cmd_designs(&a, &g)
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn parse_func(s: &str, role: &str) -> CliResult<FuncSpec> {
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("--{role}: {e}")))
}

fn family_spec(a: &FamilyArgs) -> CliResult<FamilySpec> {
    if let Some(path) = &a.spec {
        let text = read_file(path)?;
        let is_toml = path.extension().is_some_and(|e| e == "toml");
        let spec: FamilySpec = if is_toml {
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        } else {
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        };
        return Ok(spec);
    }
    let family: FamilyId = a.family.as_deref().ok_or_else(|| CliError::Usage("--family is required".into()))?.parse()?;
    let q = a.q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
    let f = a.f.as_deref().map(|s| parse_func(s, "f")).transpose()?;
    let g = a.g.as_deref().map(|s| parse_func(s, "g")).transpose()?;
    if f.is_some() != g.is_some() {
        return Err(CliError::Usage("--f and --g go together".into()));
    }
    Ok(FamilySpec { family, q, m: a.m, f, g })
}

fn code_kind(s: Option<&str>) -> CliResult<CodeKind> {
    match s.unwrap_or("base") {
        "base" => Ok(CodeKind::Base),
        "subfield" => Ok(CodeKind::Subfield),
        "punctured" => Ok(CodeKind::Punctured),
        other => Err(CliError::Usage(format!("unknown code kind {other:?} (base, subfield, punctured)"))),
    }
}

#[derive(Serialize)]
struct BuildSidecar {
    tool: &'static str,
    version: &'static str,
    spec: FamilySpec,
    kind: CodeKind,
    field: FieldDescriptor,
    n: usize,
    k: usize,
    rows: usize,
    matrix: Option<String>,
}

/// `matrix.txt` → `matrix.txt.json`.
fn sidecar_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn cmd_build(a: &BuildArgs) -> CliResult<()> {
    let spec = family_spec(&a.family)?;
    let kind = code_kind(a.kind.as_deref())?;
    let fam = Family::new(&spec)?;
    let code = fam.code(kind)?;
    let text = write_matrix(&code);
    let Some(out) = &a.out else {
        print!("{text}");
        return Ok(());
    };
    let side = BuildSidecar {
        tool: "fwc",
        version: env!("CARGO_PKG_VERSION"),
        spec: fam.spec().clone(),
        kind,
        field: code.field().descriptor(),
        n: code.n(),
        k: code.k(),
        rows: code.generator().len(),
        matrix: out.file_name().map(|s| s.to_string_lossy().into_owned()),
    };
    write_file(out, &text)?;
    write_file(&sidecar_path(out), &to_json(&side))?;
    Ok(())
}

#[derive(Serialize)]
struct CodeSummary {
    n: usize,
    k: usize,
    d: Option<usize>,
    field_size: u32,
    enumerator: String,
    distribution: WeightDistribution,
    bounds: Vec<BoundVerdict>,
    optimality: Optimality,
}

fn summarize(w: &WeightDistribution, k: usize, field_size: u32) -> CodeSummary {
    let n = w.n();
    let d = w.min_distance();
    let q = u64::from(field_size);
    let (bounds, optimality) = match d {
        Some(d) if k > 0 => (
            bound_verdicts(n as u64, k as u64, d as u64, q),
            optimality_certificate(n as u64, k as u64, d as u64, q),
        ),
        _ => (Vec::new(), Optimality::default()),
    };
    CodeSummary { n, k, d, field_size, enumerator: w.enumerator(), distribution: w.clone(), bounds, optimality }
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
}

#[derive(Serialize)]
struct AnalyzeReport {
    tool: &'static str,
    version: &'static str,
    input: serde_json::Value,
    steps: Vec<String>,
    field: FieldDescriptor,
    code: CodeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<CodeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hermitian_self_orthogonal: Option<bool>,
    checks: Vec<Check>,
}

fn cmd_analyze(a: &AnalyzeArgs, g: &Globals) -> CliResult<()> {
    let (mut code, input) = match (&a.matrix, a.family.is_set()) {
        (Some(p), false) => {
            let code = read_matrix(&read_file(p)?)?;
            let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (code, serde_json::json!({ "matrix": name }))
        }
        (None, true) => {
            let spec = family_spec(&a.family)?;
            let kind = code_kind(a.kind.as_deref())?;
            let fam = Family::new(&spec)?;
            let input = serde_json::json!({ "spec": fam.spec(), "kind": kind });
            (fam.code(kind)?, input)
        }
        (Some(_), true) => return Err(CliError::Usage("give a matrix file or family flags, not both".into())),
        (None, false) => return Err(CliError::Usage("give a matrix file or family flags".into())),
    };
    let mut steps = Vec::new();
    if a.subfield {
        let tower = FieldTower::from_descriptor(&code.field().descriptor())?;
        if tower.m == 1 {
            return Err(CliError::Usage("--subfield needs a matrix over a proper extension".into()));
        }
        let basis: Vec<u32> = (0..tower.m).map(|j| tower.q.pow(j)).collect();
        code = subfield_code(&code, &tower, &basis)?;
        steps.push(format!("subfield over F_{}", tower.q));
    }
    if let Some(i) = a.puncture {
        code = code.puncture(i)?;
        steps.push(format!("puncture coordinate {i}"));
    }
    let w = code.weight_distribution(g.budget)?;
    let field_size = code.field().size();
    let mut checks = Vec::new();
    let summary = summarize(&w, code.k(), field_size);
    for b in &summary.bounds {
        checks.push(Check { name: format!("{:?} bound satisfied", b.bound), passed: b.satisfied });
    }
    let dual = if a.dual_via_macwilliams {
        let dw = macwilliams_transform(&w, code.k())?;
        checks.push(Check { name: "MacWilliams transform is a distribution".into(), passed: dw.is_well_formed() });
        Some(summarize(&dw, code.n() - code.k(), field_size))
    } else {
        None
    };
    let hermitian = if a.hermitian { Some(code.hermitian_self_orthogonal()?) } else { None };
    let report = AnalyzeReport {
        tool: "fwc",
        version: env!("CARGO_PKG_VERSION"),
        input,
        steps,
        field: code.field().descriptor(),
        code: summary,
        dual,
        hermitian_self_orthogonal: hermitian,
        checks,
    };
    let json = to_json(&report);
    match &a.out {
        Some(prefix) => {
            write_file(&prefix.with_extension("json"), &json)?;
            write_file(&prefix.with_extension("csv"), &distribution_csv(&w))?;
        }
        None => print!("{json}"),
    }
    if report.checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(CliError::Diff("a bound or consistency check failed".into()))
    }
}

fn cmd_verify(a: &VerifyArgs, g: &Globals) -> CliResult<()> {
    let mut opts = if a.all { LedgerOptions::all(g.budget) } else { LedgerOptions::none(g.budget) };
    if a.family.is_set() {
        opts.families.push(family_spec(&a.family)?);
        // Family verification is gated on the character-sum oracles.
        opts.lemmas.get_or_insert_with(LemmaGrid::default);
    }
    if a.lemmas {
        opts.lemmas.get_or_insert_with(LemmaGrid::default);
    }
    if a.families {
        opts.lemmas.get_or_insert_with(LemmaGrid::default);
        for s in fwc_core::ledger::default_family_grid() {
            if !opts.families.contains(&s) {
                opts.families.push(s);
            }
        }
    }
    if a.examples {
        opts.examples = true;
    }
    if a.designs {
        opts.designs.get_or_insert(DesignOptions { budget: g.budget, ..DesignOptions::default() });
    }
    if opts.lemmas.is_none() && opts.families.is_empty() && !opts.examples && opts.designs.is_none() {
        return Err(CliError::Usage(
            "nothing to verify: give --family, --lemmas, --families, --examples, --designs or --all".into(),
        ));
    }
    let ledger = run_ledger(&opts)?;
    let path = a.ledger.clone().unwrap_or_else(|| PathBuf::from("fwc-ledger.json"));
    write_file(&path, &ledger.to_json())?;
    print!("{}", ledger_summary(&ledger));
    println!("ledger: {}", path.display());
    if ledger.passed {
        Ok(())
    } else {
        Err(CliError::Diff(format!("see {}", path.display())))
    }
}

fn ledger_summary(l: &Ledger) -> String {
    let mut out = String::new();
    if let Some(gate) = l.lemma_gate {
        let ok = l.lemmas.iter().filter(|r| r.passed).count();
        out += &format!("lemmas: {ok}/{} oracles pass; gate {}\n", l.lemmas.len(), if gate { "open" } else { "closed" });
    }
    for r in &l.families {
        let w = r.walsh.as_ref().map(|w| format!(" W={}", w.w)).unwrap_or_default();
        out += &format!(
            "{}{w}: {} ({} claims, {} diffs)\n",
            r.spec.label(),
            if r.passed { "pass" } else { "FAIL" },
            r.claims.len(),
            r.diffs.len()
        );
    }
    if !l.examples.is_empty() {
        let ok = l.examples.iter().filter(|e| e.passed()).count();
        out += &format!("examples: {ok}/{} pass\n", l.examples.len());
    }
    if let Some(d) = &l.designs {
        out += &format!("designs: {} ({} claims)\n", if d.passed { "pass" } else { "FAIL" }, d.claims.len());
    }
    for b in &l.blocked {
        out += &format!("{b}: blocked by the lemma gate\n");
    }
    let s = &l.summary;
    out += &format!(
        "summary: {} pass, {} erratum, {} reported, {} skipped, {} fail\n",
        s.pass, s.erratum, s.reported, s.skipped, s.fail
    );
    out
}

fn cmd_lemmas(a: &LemmaArgs) -> CliResult<()> {
    let d = LemmaGrid::default();
    let grid = LemmaGrid {
        max_q_single: a.max_q.unwrap_or(d.max_q_single),
        max_q_tower: a.max_q_tower.unwrap_or(d.max_q_tower),
        max_m: a.max_m.unwrap_or(d.max_m),
    };
    let reports = verify_lemmas(&grid)?;
    emit(a.out.as_deref(), &to_json(&reports))?;
    match reports.iter().filter(|r| !r.passed).map(|r| r.lemma.as_str()).collect::<Vec<_>>() {
        bad if bad.is_empty() => Ok(()),
        bad => Err(CliError::Diff(format!("lemma oracles failed: {}", bad.join(", ")))),
    }
}

fn cmd_designs(a: &DesignArgs, g: &Globals) -> CliResult<()> {
    if a.theorems {
        let report = verify_design_theorems(&DesignOptions { budget: g.budget, ..DesignOptions::default() })?;
        emit(a.out.as_deref(), &to_json(&report))?;
        return if report.passed { Ok(()) } else { Err(CliError::Diff("a design claim failed".into())) };
    }
    let spec = family_spec(&a.family)?;
    let kappa = a.weight.ok_or_else(|| CliError::Usage("--weight is required (or --theorems)".into()))?;
    let t = a.t.ok_or_else(|| CliError::Usage("--t is required".into()))?;
    let code = Family::new(&spec)?.code(code_kind(a.kind.as_deref())?)?;
    let mut d = if a.dual { dual_supports(&code, kappa, g.budget)? } else { supports_of_weight(&code, kappa, g.budget)? };
    if a.complement {
        d = complement_design(&d);
    }
    let v = verified(&d, t)?;
    let text = match a.format.as_deref().unwrap_or("json") {
        "json" => v.to_json() + "\n",
        "text" => v.to_text(),
        other => return Err(CliError::Usage(format!("unknown format {other:?} (json, text)"))),
    };
    emit(a.out.as_deref(), &text)
}

/// Dual weight class: enumerate the dual when it fits the budget, otherwise
/// search coordinate subsets (minimum dual weight only).
fn dual_supports(code: &LinearCode, kappa: usize, budget: u64) -> CliResult<fwc_core::designs::DesignInstance> {
    let dual = code.dual();
    match dual.size() {
        Some(s) if s <= budget => Ok(supports_of_weight(&dual, kappa, budget)?),
        _ => Ok(dual_min_weight_supports(code, kappa)?),
    }
}
