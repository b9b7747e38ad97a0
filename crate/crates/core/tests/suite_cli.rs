use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

use twisted_orlicz::orlicz::{parse_function_file, SupportedFunction};
use twisted_orlicz::suite::{
    canonical_json, emit_report, preset, preset_names, registry, run_suite, CheckResult, CheckSpec, Environment,
    Format, Report, Tolerances,
};
use twisted_orlicz::{elem, Error, Group};

fn tworlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tworlicz")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// Public checker entry points, scraped from the module sources so that a new
/// checker cannot be added without wiring it into a suite.
fn exposed_checkers() -> BTreeSet<String> {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("src");
    let mut names = BTreeSet::new();
    for module in ["weights", "cocycles", "orlicz", "twisted"] {
        let text = std::fs::read_to_string(src.join(format!("{module}.rs"))).unwrap();
        for line in text.lines() {
            let Some(rest) = line.strip_prefix("pub fn ") else { continue };
            let name = rest.split(['(', '<']).next().unwrap();
            let is_checker = name.starts_with("check_")
                || name.starts_with("verify_")
                || name.starts_with("analyze_")
                || name.ends_with("_bound")
                || name.ends_with("_series")
                || name.ends_with("_estimate")
                || name == "finite_symmetry_check";
            if is_checker {
                names.insert(name.trim_end_matches("_with").to_string());
            }
        }
    }
    names
}

#[test]
fn every_checker_is_reachable_from_a_preset() {
    let mut reachable = BTreeSet::new();
    for name in preset_names() {
        for check in preset(name).unwrap().checks {
            let info = registry().iter().find(|c| c.name == check).unwrap();
            reachable.extend(info.covers.iter().map(|s| s.to_string()));
        }
    }
    let exposed = exposed_checkers();
    assert!(exposed.len() >= 15, "scraper found too few checkers: {exposed:?}");
    let missing: Vec<_> = exposed.difference(&reachable).collect();
    assert!(missing.is_empty(), "not reachable from any preset suite: {missing:?}");
    // constructors and maps the suites rely on
    for extra in ["make_block_weight", "polar", "central_extension_embed", "lambda_map", "involution", "delta_action"] {
        assert!(reachable.contains(extra), "{extra}");
    }
}

#[test]
fn empty_suite_passes() {
    let r = run_suite(&CheckSpec::default()).unwrap();
    assert!(r.pass);
    assert!(r.results.is_empty());
}

#[test]
fn divergent_series_fails_the_suite() {
    // l = 2, d = 1: β = 0.4 < d/l
    let spec = CheckSpec {
        name: "below-threshold".into(),
        checks: vec!["psi-series".into(), "weak-subadditive".into()],
        weight: Some("poly:0.4".into()),
        ..CheckSpec::default()
    };
    let r = run_suite(&spec).unwrap();
    assert!(!r.pass);
    let series = r.results.iter().find(|c| c.check == "psi-series").unwrap();
    assert!(!series.pass);
    assert!(r.results.iter().find(|c| c.check == "weak-subadditive").unwrap().pass);

    let above = CheckSpec { weight: Some("poly:1".into()), ..spec };
    assert!(run_suite(&above).unwrap().pass);
}

#[test]
fn corollary_alias_matches_its_preset() {
    let spec = preset("paper-corollary").unwrap();
    assert_eq!(spec, preset("cor-poly-weight").unwrap());
    assert!(run_suite(&spec).unwrap().pass);
}

#[test]
fn checks_run_in_dependency_order_and_stop_on_hard_failures() {
    let spec = CheckSpec {
        checks: vec!["algebra".into(), "domination".into(), "cocycle".into()],
        weight: Some("poly:2".into()),
        cocycle: "cobound:poly:2".into(),
        radius: 10,
        trials: 10,
        // far too small: |Ω(s,t)| ≤ u(s) + u(t) fails near the identity
        params: [("C".to_string(), 0.1)].into_iter().collect(),
        ..CheckSpec::default()
    };
    let r = run_suite(&spec).unwrap();
    let order: Vec<&str> = r.results.iter().map(|c| c.check.as_str()).collect();
    assert_eq!(order, ["cocycle", "domination", "algebra"]);
    assert!(r.results[0].pass);
    assert!(!r.results[1].pass && !r.results[1].witness.is_null());
    assert!(r.results[2].skipped && !r.results[2].pass);
    assert!(!r.pass);
}

#[test]
fn budget_errors_name_the_stage() {
    let spec = CheckSpec { checks: vec!["cocycle".into()], group: "H3".into(), radius: 500, ..CheckSpec::default() };
    let err = run_suite(&spec).unwrap_err();
    assert!(err.is_budget(), "{err}");

    let missing = CheckSpec { checks: vec!["lss-domination".into()], weight: Some("poly:1".into()), ..CheckSpec::default() };
    let msg = run_suite(&missing).unwrap_err().to_string();
    assert!(msg.contains("lss-domination") && msg.contains("aux_weight"), "{msg}");
}

#[test]
fn unknown_names_are_rejected() {
    assert!(preset("thm-nothing").is_err());
    let spec = CheckSpec { checks: vec!["nonsense".into()], ..CheckSpec::default() };
    assert!(matches!(run_suite(&spec), Err(Error::Spec { .. })));
    let bad: Result<CheckSpec, _> = serde_json::from_str(r#"{"checks": [], "radious": 3}"#);
    assert!(bad.is_err());
}

#[test]
fn reports_are_reproducible_and_seed_sensitive() {
    let spec = preset("thm-orlicz-alg").unwrap();
    let a = run_suite(&spec).unwrap();
    let b = run_suite(&spec).unwrap();
    assert_eq!(canonical_json(&a), canonical_json(&b));
    let c = run_suite(&CheckSpec { seed: 99, ..spec }).unwrap();
    assert_ne!(canonical_json(&a), canonical_json(&c));
}

#[test]
fn json_round_trips() {
    let r = run_suite(&preset("sym-finite").unwrap()).unwrap();
    let back: Report = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
    assert_eq!(back, r);
}

#[test]
fn csv_has_header_and_one_row_per_check() {
    let r = run_suite(&preset("central-ext").unwrap()).unwrap();
    let csv = emit_report(&r, Format::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + r.results.len());
    assert!(lines[0].starts_with("suite,check,pass"));
    assert!(lines[1].starts_with("central-ext,cocycle,true"));
}

fn golden_report() -> Report {
    let result = |check: &str, pass: bool| CheckResult {
        check: check.into(),
        pass,
        skipped: false,
        radius: Some(4),
        trials: None,
        constant: None,
        residual: None,
        worst_margin: None,
        witness: Value::Null,
        details: Value::Null,
    };
    Report {
        spec: CheckSpec {
            name: "golden".into(),
            checks: vec!["cocycle".into(), "domination".into(), "algebra".into()],
            group: "Z^d:1".into(),
            seed: 7,
            tolerances: Tolerances::default(),
            ..CheckSpec::default()
        },
        results: vec![
            CheckResult { constant: Some(1.0), residual: Some(2.5e-16), ..result("cocycle", true) },
            CheckResult {
                witness: json!({"s": [0], "t": [0], "lhs": 1.0, "rhs": 0.2}),
                ..result("domination", false)
            },
            CheckResult { skipped: true, ..result("algebra", false) },
        ],
        environment: Environment { version: "0.1.0".into(), timestamp: 0 },
        pass: false,
    }
}

#[test]
fn text_report_matches_golden_output() {
    let expected = "\
suite golden (group Z^d:1, pair Lp:2, seed 7)
  [PASS] cocycle constant=1.000000e0 residual=2.500e-16
  [FAIL] domination
      witness: {\"lhs\":1.0,\"rhs\":0.2,\"s\":[0],\"t\":[0]}
  [SKIP] algebra
FAIL
";
    assert_eq!(emit_report(&golden_report(), Format::Text), expected);
}

#[test]
fn cli_suite_exit_codes() {
    assert_eq!(tworlicz(&["suite", "sym-finite"]).status.code(), Some(0));
    assert_eq!(tworlicz(&["suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(tworlicz(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("divergent.json");
    std::fs::write(&path, r#"{"name": "div", "checks": ["psi-series"], "weight": "poly:0.25"}"#).unwrap();
    let out = tworlicz(&["suite", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("div,psi-series,false"));
}

#[test]
fn cli_report_reemits_saved_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = tworlicz(&["suite", "central-ext", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = tworlicz(&["report", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("[PASS] central-ext"));
}

#[test]
fn cli_check_emits_summary_json() {
    let out = tworlicz(&[
        "check", "algebra", "--weight", "poly:2", "--cocycle", "cobound:poly:2", "--trials", "25", "--radius", "12", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    for key in ["check", "trials", "worst_margin", "witness", "pass"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["check"], "algebra");
    assert_eq!(v["trials"], 25);
    assert_eq!(v["pass"], true);

    let sym = tworlicz(&["check", "symmetry", "--group", "Zn:4", "--cocycle", "bichar:1.5707963267948966", "--trials", "10"]);
    assert_eq!(sym.status.code(), Some(0));
    let inf = tworlicz(&["check", "symmetry", "--group", "Z^d:1", "--trials", "2"]);
    assert_eq!(inf.status.code(), Some(2));
}

#[test]
fn cli_conv_and_norm() {
    let dir = tempfile::tempdir().unwrap();
    let (f, g, h) = (dir.path().join("f.json"), dir.path().join("g.json"), dir.path().join("h.json"));
    std::fs::write(&f, r#"{"group":"Z^d:1","support":[{"elt":[1],"re":1,"im":0},{"elt":[2],"re":0,"im":2}]}"#).unwrap();
    std::fs::write(&g, r#"{"group":"Z^d:1","support":[{"elt":[3],"re":1,"im":0}]}"#).unwrap();
    let out = tworlicz(&["conv", "--cocycle", "bichar:3.14", "--in", f.to_str().unwrap(), g.to_str().unwrap(), "--out", h.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let conv = parse_function_file(&h, None).unwrap();
    let z = conv.group().clone();
    // δ₁ ⋆ δ₃ = e^{3.14·3 i} δ₄, 2i δ₂ ⋆ δ₃ = 2i e^{3.14·6 i} δ₅
    let c4 = conv.get(&elem(&[4]));
    let c5 = conv.get(&elem(&[5]));
    assert!((c4 - num_complex::Complex64::from_polar(1.0, 3.14 * 3.0)).norm() < 1e-12);
    assert!((c5 - num_complex::Complex64::new(0.0, 2.0) * num_complex::Complex64::from_polar(1.0, 3.14 * 6.0)).norm() < 1e-12);
    assert_eq!(conv.len(), 2);
    assert_eq!(z.spec(), "Z^d:1");

    let norm = tworlicz(&["norm", "--pair", "Lp:2", "--weight", "poly:1", "--in", f.to_str().unwrap()]);
    assert_eq!(norm.status.code(), Some(0));
    let v = stdout_json(&norm);
    let l2 = 5f64.sqrt();
    assert!((v["luxemburg"].as_f64().unwrap() - l2 / 2f64.sqrt()).abs() < 1e-9);
    assert!((v["orlicz"].as_f64().unwrap() - l2 * 2f64.sqrt()).abs() < 1e-6);
    // weights 2 and 3 at τ = 1, 2
    let weighted = (4.0f64 + 36.0).sqrt() * 2f64.sqrt();
    assert!((v["weighted_orlicz"].as_f64().unwrap() - weighted).abs() < 1e-6);

    let mismatch = dir.path().join("m.json");
    std::fs::write(&mismatch, r#"{"group":"Zn:5","support":[]}"#).unwrap();
    let out = tworlicz(&["conv", "--cocycle", "one", "--in", f.to_str().unwrap(), mismatch.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_growth_and_plemma() {
    let out = tworlicz(&["growth", "--group", "Z^d:2", "--n-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["ball_sizes"], json!([9, 25, 49, 81, 121]));
    let out = tworlicz(&["plemma", "--beta", "2", "--gamma", "2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["pass"], true);
}

#[test]
fn function_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let z2 = Group::parse("Z^d:2").unwrap();

    let delta = parse_function_file(&write("d.json", r#"{"group":"Z^d:2","support":[{"elt":[0,0],"re":1,"im":0}]}"#), None).unwrap();
    assert_eq!(delta, SupportedFunction::delta(&z2, z2.identity()).unwrap());

    let zero = parse_function_file(&write("z.json", r#"{"group":"Z^d:2","support":[]}"#), Some(&z2)).unwrap();
    assert!(zero.is_zero());

    let dup = write("dup.json", "{\"group\":\"Z^d:1\",\"support\":[\n{\"elt\":[1],\"re\":1,\"im\":0},\n{\"elt\":[2],\"re\":1,\"im\":0},\n{\"elt\":[1],\"re\":2,\"im\":0}]}");
    let msg = parse_function_file(&dup, None).unwrap_err().to_string();
    assert!(msg.contains("entries 0 and 2"), "{msg}");

    let zero_entry = write("ze.json", r#"{"group":"Z^d:1","support":[{"elt":[1],"re":0,"im":0}]}"#);
    assert!(parse_function_file(&zero_entry, None).unwrap_err().to_string().contains("zero"));

    let broken = write("b.json", "{\"group\":\"Z^d:1\",\n\"support\":[{\"elt\":[1],\"re\":1,}]}");
    let msg = parse_function_file(&broken, None).unwrap_err().to_string();
    assert!(msg.contains("line 2"), "{msg}");

    let other = parse_function_file(&write("o.json", r#"{"group":"Zn:3","support":[]}"#), Some(&z2));
    assert!(matches!(other, Err(Error::GroupMismatch { .. })));

    let bad_elt = write("e.json", r#"{"group":"Zn:3","support":[{"elt":[7],"re":1,"im":0}]}"#);
    assert!(parse_function_file(&bad_elt, None).is_err());
}
