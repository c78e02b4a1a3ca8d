use std::path::PathBuf;
use std::process::Command;

use dgkit::Verdict;
use dgkit_cli::report::Report;
use dgkit_cli::{run, RunOutput, Workspace, INPUT_ERROR};

fn corpus(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file).display().to_string()
}

fn dgkit(args: &[&str]) -> RunOutput {
    run(std::iter::once("dgkit").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Report) {
    let mut argv = vec!["--format", "json"];
    argv.extend_from_slice(args);
    let out = dgkit(&argv);
    assert_ne!(out.code, INPUT_ERROR, "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn validate_delta1_passes() {
    let out = dgkit(&["validate", &corpus("delta1.json")]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("PASS"));
}

#[test]
fn subcategory_inclusion_is_not_essentially_surjective() {
    let (code, r) = json(&["dk-check", &corpus("inclusion.json")]);
    assert_eq!(code, 1);
    let f = r.findings.iter().find(|f| f.verdict == Verdict::Fail).unwrap();
    assert!(f.case.starts_with("essential surjectivity"), "{}", f.case);
    assert_eq!(r.verdict, Verdict::Fail);
}

#[test]
fn zero_hom_has_zero_cohomology() {
    let (code, r) = json(&["cohomology", &corpus("empty.json"), "--at", "x", "--deg", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r.findings.len(), 1);
    assert_eq!(r.findings[0].detail, "dimension 0");
}

#[test]
fn cohomology_of_delta1_homs() {
    // hom(0,1) = k in degree 0, hom(1,0) = 0
    let (_, r) = json(&["cohomology", &corpus("delta1.json"), "--from", "0", "--to", "1"]);
    assert_eq!(r.findings[0].case, "H^0(0, 1)");
    assert_eq!(r.findings[0].detail, "dimension 1");
    let (_, r) = json(&["cohomology", &corpus("delta1.json"), "--from", "1", "--to", "0"]);
    assert_eq!(r.findings[0].detail, "zero in every degree");
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "bad.json", "{\n  \"categories\": {\n    \"x\": [1,\n  }\n}\n");
    let out = dgkit(&["validate", &p]);
    assert_eq!(out.code, INPUT_ERROR);
    assert!(out.stderr.contains("bad.json:3:11:"), "{}", out.stderr);
}

#[test]
fn unknown_fields_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "u.json", r#"{"categories": {"c": {"objects": [], "units": {}, "colour": 1}}}"#);
    let out = dgkit(&["validate", &p]);
    assert_eq!(out.code, INPUT_ERROR);
    assert!(out.stderr.contains("colour"), "{}", out.stderr);
}

#[test]
fn non_cycle_unit_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"categories": {"c": {
        "objects": ["x"],
        "homs": {"x|x": {"dims": {"0": 1, "1": 1}, "d": {"0": [["1"]]}}},
        "comp": {"x|x|x": {"0,0": [[0, 0, 0, "1"]]}},
        "units": {"x": ["1"]}}}}"#;
    let p = write_temp(&dir, "c.json", text);
    let out = dgkit(&["validate", &p]);
    assert_eq!(out.code, INPUT_ERROR);
    assert!(out.stderr.contains("unit not closed"), "{}", out.stderr);
    assert!(out.stderr.contains("categories.c.units.x"), "{}", out.stderr);
}

#[test]
fn unresolved_references_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"functors": {"F": {"source": "a", "target": "b", "objects": {}}}}"#;
    let p = write_temp(&dir, "f.json", text);
    let out = dgkit(&["dk-check", &p]);
    assert_eq!(out.code, INPUT_ERROR);
    assert!(out.stderr.contains("functors.F.source: unresolved category \"a\""), "{}", out.stderr);
}

#[test]
fn duplicate_names_across_files_are_rejected() {
    let out = dgkit(&["validate", &corpus("delta1.json"), &corpus("inclusion.json")]);
    assert_eq!(out.code, INPUT_ERROR);
    assert!(out.stderr.contains("\"delta1\" is defined more than once"), "{}", out.stderr);
}

#[test]
fn ambiguous_and_unknown_selections() {
    let out = dgkit(&["h0", &corpus("categories.json")]);
    assert_eq!(out.code, INPUT_ERROR);
    assert!(out.stderr.contains("choose one by name"));
    let out = dgkit(&["h0", &corpus("categories.json"), "--category", "nope"]);
    assert_eq!(out.code, INPUT_ERROR);
    let out = dgkit(&["cohomology", &corpus("empty.json"), "--at", "y"]);
    assert!(out.stderr.contains("unresolved object \"y\""), "{}", out.stderr);
}

#[test]
fn bad_budgets_and_usage_are_input_errors() {
    assert_eq!(dgkit(&["--budget", "colour=3", "validate", &corpus("empty.json")]).code, INPUT_ERROR);
    assert_eq!(dgkit(&["--budget", "height", "validate", &corpus("empty.json")]).code, INPUT_ERROR);
    assert_eq!(dgkit(&["frobnicate"]).code, INPUT_ERROR);
    assert_eq!(dgkit(&["validate", "/nonexistent/x.json"]).code, INPUT_ERROR);
    let help = dgkit(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("morita-verify"));
}

#[test]
fn budget_overrides_are_reported() {
    let (_, r) =
        json(&["--budget", "shift_range=1", "--budget", "height=3", "--seed", "9", "validate", &corpus("empty.json")]);
    assert_eq!(r.budget.shift_range, 1);
    assert_eq!(r.budget.height, 3);
    assert_eq!(r.seed, 9);
}

#[test]
fn constructions_write_reloadable_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("cone.json").display().to_string();
    let out = dgkit(&["--out", &out_path, "cone", &corpus("delta1.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    // the output names the input category, so it loads alongside it
    let ws = Workspace::load(&[corpus("categories.json"), out_path]).unwrap();
    let k = &ws.twisted["cone(f)"];
    assert_eq!(k.len(), 2);
    assert!(k.maurer_cartan_defect().is_none());
}

#[test]
fn shift_and_alpha_outputs() {
    let (_, r) = json(&["shift", &corpus("delta1.json"), "--twisted", "x1", "--by", "-3"]);
    let t = &r.output.unwrap().twisted["x1[-3]"];
    assert_eq!(t.summands, vec![("1".to_string(), -3)]);
    let (_, r) = json(&["alpha", &corpus("delta1.json"), "--twisted", "x0", "--name", "a"]);
    let m = &r.output.unwrap().modules["a"];
    // α of the embedded object 0 is hom(-, 0): k at 0, zero at 1
    assert_eq!(m.values.keys().collect::<Vec<_>>(), vec!["0"]);
}

#[test]
fn closure_check_reports_its_category() {
    let (code, r) = json(&["--budget", "shift_range=1", "pretr-check", &corpus("delta1.json"), "--closure"]);
    assert_eq!(code, 0);
    assert!(r.output.unwrap().categories.contains_key("pretr(delta1)"));
    let (code, _) = json(&["pretr-check", &corpus("delta1.json")]);
    assert_eq!(code, 1);
}

#[test]
fn representability_and_certificates() {
    let (code, r) = json(&["module-validate", &corpus("delta1.json"), "--module", "h1", "--representable"]);
    assert_eq!(code, 0);
    assert!(r.findings[1].witness.is_some());
    let (code, _) = json(&["module-validate", &corpus("delta1.json"), "--module", "simple", "--representable"]);
    assert_eq!(code, 1);
    assert_eq!(json(&["retract-verify", &corpus("delta1.json")]).0, 0);
    let (code, r) = json(&["morita-verify", &corpus("morita-flipped.json")]);
    assert_eq!(code, 1);
    assert!(r.findings.iter().any(|f| f.case == "flipped: object cone(id)" && f.detail == "map r is not closed"));
}

#[test]
fn graded_and_plain_dk_checks_agree_on_inflations() {
    let f = corpus("functors.json");
    for name in ["delta1->delta1⊗ext(0,3)", "delta1->delta1⊗ext(0)", "{1}->delta1"] {
        let (a, _) = json(&["dk-check", &f, "--functor", name]);
        let (b, _) = json(&["dk-check", &f, "--functor", name, "--graded"]);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn binary_exit_codes_and_seed_variable() {
    let bin = env!("CARGO_BIN_EXE_dgkit");
    let out = Command::new(bin).args(["morita-verify", &corpus("morita.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin).args(["dk-check", &corpus("morita.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin)
        .env("DGKIT_SEED", "41")
        .args(["--format", "json", "validate", &corpus("empty.json")])
        .output()
        .unwrap();
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.seed, 41);
    let out = Command::new(bin).args(["validate", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corpus_run_matches_expectations() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").display().to_string();
    let (code, r) = json(&["corpus-run", "--dir", &dir]);
    assert_eq!(code, 0, "{:?}", r.findings.iter().filter(|f| f.verdict != Verdict::Pass).collect::<Vec<_>>());
    assert!(r.findings.len() > 100);
}
