use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fwc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwc")).args(args).current_dir(dir).env_remove("FWC_BUDGET").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn build_f1_q2_is_three_by_nine_over_f4() {
    let d = tmp();
    let o = fwc(&["build", "--family", "F1", "--q", "2"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("9 3 "), "{header}");
    let desc: Value = serde_json::from_str(header.splitn(3, ' ').nth(2).unwrap()).unwrap();
    assert_eq!((desc["p"].as_u64(), desc["m"].as_u64()), (Some(2), Some(2)));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(' ').count() == 9 && r.split(' ').all(|x| x.parse::<u32>().unwrap() < 4)));
}

#[test]
fn build_f2_q3_m3_writes_matrix_and_sidecar() {
    let d = tmp();
    let o = fwc(&["build", "--family", "F2", "--q", "3", "--m", "3", "-o", "f2.txt"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(d.path().join("f2.txt")).unwrap();
    assert!(text.starts_with("244 3 "));
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|r| r.split(' ').count() == 244));
    let side = json_file(&d.path().join("f2.txt.json"));
    assert_eq!((side["n"].as_u64(), side["k"].as_u64()), (Some(244), Some(3)));
    assert_eq!(side["spec"]["family"], "F2");
    assert_eq!(side["matrix"], "f2.txt");
}

#[test]
fn invalid_specs_exit_two() {
    let d = tmp();
    let o = fwc(&["build", "--family", "F1", "--q", "2", "--m", "3"], d.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("F1 fixes m = 2"), "{}", stderr(&o));
    assert_eq!(code(&fwc(&["build", "--family", "F9", "--q", "2"], d.path())), 2);
    assert_eq!(code(&fwc(&["build", "--family", "F2", "--q", "6", "--m", "2"], d.path())), 2);
    assert_eq!(code(&fwc(&["build", "--family", "F2"], d.path())), 2);
    assert_eq!(code(&fwc(&["build", "--family", "F3", "--q", "2", "--m", "4"], d.path())), 2);
    assert_eq!(code(&fwc(&["frobnicate"], d.path())), 2);
}

#[test]
fn spec_file_matches_flags() {
    let d = tmp();
    std::fs::write(d.path().join("s.json"), r#"{"family":"F2","q":2,"m":3}"#).unwrap();
    std::fs::write(d.path().join("s.toml"), "family = \"F2\"\nq = 2\nm = 3\n").unwrap();
    let a = stdout(&fwc(&["build", "--spec", "s.json"], d.path()));
    let b = stdout(&fwc(&["build", "--spec", "s.toml"], d.path()));
    let c = stdout(&fwc(&["build", "--family", "F2", "--q", "2", "--m", "3"], d.path()));
    assert_eq!(a, c);
    assert_eq!(b, c);
}

#[test]
fn analyze_f1_q2_meets_griesmer_and_is_hermitian_self_orthogonal() {
    let d = tmp();
    assert_eq!(code(&fwc(&["build", "--family", "F1", "--q", "2", "-o", "f1.txt"], d.path())), 0);
    let o = fwc(&["analyze", "f1.txt", "--hermitian", "-o", "rep"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_file(&d.path().join("rep.json"));
    assert_eq!((r["code"]["n"].as_u64(), r["code"]["k"].as_u64(), r["code"]["d"].as_u64()), (Some(9), Some(3), Some(6)));
    assert_eq!(r["code"]["enumerator"], "1 + 36z^6 + 27z^8");
    let griesmer = r["code"]["bounds"].as_array().unwrap().iter().find(|b| b["bound"] == "Griesmer").unwrap();
    assert_eq!(griesmer["meets_with_equality"], true);
    assert_eq!(r["hermitian_self_orthogonal"], true);
    let csv = std::fs::read_to_string(d.path().join("rep.csv")).unwrap();
    assert_eq!(csv, "weight,count\n0,1\n6,36\n8,27\n");
}

#[test]
fn analyze_f2_punctured_subfield_is_32_6_16() {
    let d = tmp();
    assert_eq!(code(&fwc(&["build", "--family", "F2", "--q", "2", "--m", "3", "-o", "b.txt"], d.path())), 0);
    let o = fwc(&["analyze", "b.txt", "--subfield", "--puncture", "--dual-via-macwilliams"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let nkd = |c: &Value| (c["n"].as_u64(), c["k"].as_u64(), c["d"].as_u64());
    assert_eq!(nkd(&r["code"]), (Some(32), Some(6), Some(16)));
    assert_eq!(nkd(&r["dual"]), (Some(32), Some(26), Some(4)));
    assert_eq!(r["steps"].as_array().unwrap().len(), 2);
    // Same code straight from the family flags.
    let o = fwc(&["analyze", "--family", "F2", "--q", "2", "--m", "3", "--kind", "punctured"], d.path());
    let r2: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r2["code"]["distribution"], r["code"]["distribution"]);
}

#[test]
fn analyze_over_budget_exits_three() {
    let d = tmp();
    assert_eq!(code(&fwc(&["build", "--family", "F1", "--q", "3", "-o", "f.txt"], d.path())), 0);
    let o = fwc(&["--budget", "10", "analyze", "f.txt"], d.path());
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_fwc"))
        .args(["analyze", "f.txt"])
        .current_dir(d.path())
        .env("FWC_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    // The flag beats the environment.
    let o = Command::new(env!("CARGO_BIN_EXE_fwc"))
        .args(["--budget", "100000", "analyze", "f.txt"])
        .current_dir(d.path())
        .env("FWC_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn analyze_hermitian_on_odd_degree_field_is_usage_error() {
    let d = tmp();
    let o = fwc(&["analyze", "--family", "F2", "--q", "2", "--m", "3", "--hermitian"], d.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_family_writes_empty_diff() {
    let d = tmp();
    let o = fwc(&["verify", "--family", "F2", "--q", "2", "--m", "3", "--ledger", "l.json"], d.path());
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let l = json_file(&d.path().join("l.json"));
    assert_eq!(l["passed"], true);
    assert_eq!(l["lemma_gate"], true);
    let fam = &l["families"][0];
    assert_eq!(fam["passed"], true);
    assert_eq!(fam["diffs"].as_array().unwrap().len(), 0);
    assert!(stdout(&o).contains("F2 q=2 m=3: pass"));
}

#[test]
fn verify_lemmas_all_pass() {
    let d = tmp();
    let o = fwc(&["verify", "--lemmas", "--ledger", "l.json"], d.path());
    assert_eq!(code(&o), 0);
    let l = json_file(&d.path().join("l.json"));
    let lemmas = l["lemmas"].as_array().unwrap();
    assert!(lemmas.len() >= 14);
    assert!(lemmas.iter().all(|r| r["passed"] == true));
    assert_eq!(code(&fwc(&["verify"], d.path())), 2);
}

#[test]
fn lemmas_subcommand_and_alias() {
    let d = tmp();
    let a = fwc(&["lemmas"], d.path());
    let b = fwc(&["verify-lemmas", "--max-q", "25"], d.path());
    assert_eq!((code(&a), code(&b)), (0, 0));
    let ra: Value = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert!(ra.as_array().unwrap().iter().all(|r| r["passed"] == true && r["points"].as_u64().unwrap() > 0));
    assert_eq!(ra.as_array().unwrap().len(), rb.as_array().unwrap().len());
    assert_ne!(ra, rb);
}

#[test]
fn verify_all_passes_reproducibly_with_explicit_skips() {
    let d = tmp();
    let o = fwc(&["verify", "--all", "--ledger", "a.json"], d.path());
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let o = fwc(&["--threads", "2", "verify", "--all", "--ledger", "b.json"], d.path());
    assert_eq!(code(&o), 0);
    let a = std::fs::read(d.path().join("a.json")).unwrap();
    let b = std::fs::read(d.path().join("b.json")).unwrap();
    assert!(a == b, "ledgers differ across runs / thread counts");
    let l: Value = serde_json::from_slice(&a).unwrap();
    let skips = l["skips"].as_array().unwrap();
    let has = |id: &str| skips.iter().any(|s| s["id"] == id);
    assert!(has("best_known_comparison"));
    assert!(has("f6.q2.m4.w-16.punctured.dual.other_weights"));
    assert!(has("f2.q2.m3.punctured.dual.other_weights"));
    assert!(skips.iter().all(|s| s["reason"].as_str().is_some_and(|r| !r.is_empty())));
    assert_eq!(l["summary"]["fail"], 0);
    assert!(l["summary"]["skipped"].as_u64().unwrap() as usize >= skips.len());
}

#[test]
fn designs_export() {
    let d = tmp();
    let base = ["designs", "--family", "F1", "--q", "2", "--weight", "6", "--t", "2"];
    let o = fwc(&base, d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["n"].as_u64(), v["kappa"].as_u64(), v["lambda"].as_u64()), (Some(9), Some(6), Some(5)));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 12);

    let mut args = base.to_vec();
    args.extend(["--complement", "--format", "text"]);
    let o = fwc(&args, d.path());
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().all(|l| l.split(' ').count() == 3));

    let o = fwc(&["designs", "--family", "F1", "--q", "2", "--dual", "--weight", "3", "--t", "2"], d.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda"], 1);
    let o = fwc(&["designs", "--family", "F1", "--q", "3", "--dual", "--weight", "3", "--t", "2"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda"], 2);

    assert_eq!(code(&fwc(&["designs", "--family", "F1", "--q", "2", "--weight", "7", "--t", "2"], d.path())), 2);
    let o = fwc(&["designs", "--family", "F1", "--q", "2", "--weight", "6", "--t", "3"], d.path());
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("not a design"));
}

#[test]
fn designs_theorem_report() {
    let d = tmp();
    let o = fwc(&["designs", "--theorems", "-o", "d.json"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_file(&d.path().join("d.json"));
    assert_eq!(r["passed"], true);
    let claims = r["claims"].as_array().unwrap();
    let lam = |id: &str| claims.iter().find(|c| c["id"] == id).map(|c| c["lambda"].clone());
    assert_eq!(lam("f1.q2.m2.base.weight_6"), Some(Value::from(5)));
    assert_eq!(lam("f1.q3.m2.base.weight_24.complement"), Some(Value::from(1)));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let d = tmp();
    std::fs::write(d.path().join("c.toml"), "budget = 10\n[build]\nfamily = \"F1\"\nq = 3\n[analyze]\nhermitian = true\n")
        .unwrap();
    let o = fwc(&["--config", "c.toml", "build"], d.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("28 3 "));
    let o = fwc(&["--config", "c.toml", "build", "--q", "2"], d.path());
    assert!(stdout(&o).starts_with("9 3 "));
    // The config budget applies unless overridden.
    let o = fwc(&["--config", "c.toml", "analyze", "--family", "F1", "--q", "2"], d.path());
    assert_eq!(code(&o), 3);
    let o = fwc(&["--config", "c.toml", "--budget", "1000", "analyze", "--family", "F1", "--q", "2"], d.path());
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["hermitian_self_orthogonal"], true);
    std::fs::write(d.path().join("bad.toml"), "colour = 3\n").unwrap();
    assert_eq!(code(&fwc(&["--config", "bad.toml", "build", "--family", "F1", "--q", "2"], d.path())), 2);
}
