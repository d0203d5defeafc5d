use std::path::Path;
use std::process::{Command, Output};

use symnet::{emit, parse_results, replay, run, CampaignConfig, CliError, Format, SuiteName};
use symnet_core::formats::MatrixDto;
use symnet_core::{word_product, IndexSet, ModRing, TransvectionSpec};
use tempfile::TempDir;

fn symnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symnet")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const MUTATED: &str = r#"{"m": 8, "n": 4, "nu": [[1, 2, -1, -2], [3, 4, -3, -4]],
  "trials": 50, "seed": 3, "suites": ["sandwich"], "mutate": true}"#;

#[test]
fn steinberg_campaign_passes() {
    let out = symnet(&["run", "--m", "4", "--n", "4", "--trials", "100", "--seed", "1", "--suite", "steinberg"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let results = parse_results(&stdout(&out), "stdout").unwrap();
    assert_eq!(results.len(), 1);
    assert!(results[0].passed);
    assert_eq!(results[0].cases, 100);
}

#[test]
fn every_suite_passes_on_a_block_net() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"m": 8, "n": 4, "nu": [[1, 2, -1, -2], [3, 4, -3, -4]], "trials": 40, "seed": 11,
            "extra": {"sigma": [{"i": 1, "j": 3, "d": 4}], "gamma": [{"i": 3, "d": 2}]}}"#,
    );
    let out = symnet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
    let results = parse_results(&stdout(&out), "stdout").unwrap();
    assert_eq!(results.iter().map(|r| r.suite).collect::<Vec<_>>(), SuiteName::ALL.to_vec());
}

#[test]
fn mutated_sandwich_fails_and_replays() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", MUTATED);
    let out = symnet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let results = parse_results(&text, "stdout").unwrap();
    let ce = results[0].counterexample.as_ref().expect("a witness");
    assert!(!ce.word.is_empty());
    assert!(ce.detail["failure"]["assertion"].is_string());
    assert!(ce.detail["mutation"].is_object());

    let campaign = CampaignConfig::parse(MUTATED, "inline").unwrap().validate().unwrap();
    assert!(replay(&campaign, SuiteName::Sandwich, ce).unwrap());

    let recorded = write(&dir, "r.json", &text);
    let again = symnet(&["replay", "--config", &cfg, "--results", &recorded]);
    assert_eq!(again.status.code(), Some(1));
    assert!(stdout(&again).contains("reproduced"), "{}", stdout(&again));

    // without the mutation the same trial passes
    let unmutated = MUTATED.replace("true", "false");
    let clean = CampaignConfig::parse(&unmutated, "inline").unwrap().validate().unwrap();
    assert!(!replay(&clean, SuiteName::Sandwich, ce).unwrap());
}

#[test]
fn empty_suite_list() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"m": 4, "n": 2, "suites": []}"#);
    let out = symnet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "[]");
    assert_eq!(symnet(&["run", "--m", "4", "--n", "2", "--no-suites", "--format", "text"]).stdout, b"");
}

#[test]
fn runs_are_byte_identical() {
    let args = ["run", "--m", "9", "--n", "3", "--trials", "60", "--seed", "77"];
    let a = symnet(&args);
    let b = symnet(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let other = symnet(&["run", "--m", "9", "--n", "3", "--trials", "60", "--seed", "78"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn flags_override_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"m": 4, "n": 2, "trials": 5, "suites": ["crt"]}"#);
    let out = symnet(&["run", "--config", &cfg, "--trials", "7", "--suite", "steinberg"]);
    let results = parse_results(&stdout(&out), "stdout").unwrap();
    assert_eq!((results[0].suite, results[0].cases), (SuiteName::Steinberg, 7));
}

#[test]
fn non_unitary_relation_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"m": 4, "n": 2, "nu": [[1, 2, -1], [-2]]}"#);
    let out = symnet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`nu`"), "{}", stderr(&out));

    let nu = write(&dir, "nu.json", r#"{"n": 2, "classes": [[1, 2, -1], [-2]]}"#);
    let out = symnet(&["net-closure", "--nu", &nu, "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not unitary"), "{}", stderr(&out));
}

#[test]
fn non_symplectic_matrix_is_rejected() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"m": 4, "n": 1, "rows": [[1, 1], [1, 1]]}"#);
    let net = write(&dir, "net.json", r#"{"m": 4, "n": 1, "sigma": [[1, 1], [1, 1]], "gamma": [1, 1]}"#);
    for args in [vec!["decompose", "--matrix", &a, "--p", "1"], vec!["crt-check", "--matrix", &a, "--net", &net]] {
        let out = symnet(&args);
        assert_eq!(out.status.code(), Some(2));
        assert!(stderr(&out).contains("mirror"), "{}", stderr(&out));
    }
}

#[test]
fn parse_errors_carry_locations() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", "{\"m\": 4,\n \"n\": 2,\n \"trails\": 5}");
    let out = symnet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3, column"), "{}", stderr(&out));
    match CampaignConfig::parse("{\"m\": 4, \"n\": 2, \"suites\": [\"bogus\"]}", "x") {
        Err(CliError::Json { line: 1, .. }) => {}
        other => panic!("{other:?}"),
    }
    let zero = CampaignConfig::parse(r#"{"m": 4, "n": 2, "trials": 0}"#, "x").unwrap();
    assert!(matches!(zero.validate(), Err(CliError::Config { field: "trials", .. })));
    assert!(matches!(CampaignConfig::new(1, 2).validate(), Err(CliError::Config { field: "m", .. })));
}

#[test]
fn hypothesis_failure_exits_two() {
    let out = symnet(&["run", "--m", "6", "--n", "2", "--suite", "jacobson"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not local"));
}

#[test]
fn results_round_trip() {
    let campaign = CampaignConfig::parse(MUTATED, "inline").unwrap().validate().unwrap();
    let mut results = run(&campaign, false).unwrap();
    let mut more = CampaignConfig::new(4, 3);
    more.trials = 20;
    results.extend(run(&more.validate().unwrap(), false).unwrap());
    let json = emit(&results, Format::Json);
    let back = parse_results(&json, "emitted").unwrap();
    assert_eq!(back, results);
    assert_eq!(emit(&back, Format::Json), json);

    let cfg = CampaignConfig::parse(MUTATED, "inline").unwrap();
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(CampaignConfig::parse(&text, "again").unwrap(), cfg);
}

#[test]
fn text_format_names_the_witness() {
    let campaign = CampaignConfig::parse(MUTATED, "inline").unwrap().validate().unwrap();
    let text = emit(&run(&campaign, false).unwrap(), Format::Text);
    assert!(text.starts_with("sandwich FAIL"));
    assert!(text.contains("  seed ") && text.contains("  word T("));
}

#[test]
fn decompose_and_closure_outputs() {
    let dir = TempDir::new().unwrap();
    let (r, s) = (ModRing::new(4).unwrap(), IndexSet::new(2).unwrap());
    let word = [
        TransvectionSpec::short(-1, 2, r.elem(3)).unwrap(),
        TransvectionSpec::short(-1, -2, r.elem(1)).unwrap(),
        TransvectionSpec::long(-1, r.elem(2)).unwrap(),
    ];
    let product = word_product(&word, r, s).unwrap();
    let a = write(&dir, "a.json", &serde_json::to_string(&MatrixDto::from(product.matrix())).unwrap());
    let out = symnet(&["decompose", "--matrix", &a, "--p", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["round_trip"], true);
    assert!(v["factors"].as_array().unwrap().iter().all(|f| f["i"] == -1));

    let nu = write(&dir, "nu.json", r#"{"n": 2, "classes": [[1, -1], [2, -2]]}"#);
    let seed = write(&dir, "s.json", r#"{"m": 4, "sigma": [{"i": 1, "j": 2, "d": 2}]}"#);
    let out = symnet(&["net-closure", "--nu", &nu, "--seed-levels", &seed]);
    let net: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(net["sigma"][0][1], 2);
    assert_eq!(net["sigma"][1][0], 2);
}

#[test]
fn golden_reports() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, format, code) in [("block_z4", "json", 0), ("sandwich_mutated", "text", 1)] {
        let cfg = golden.join(format!("{name}.config.json"));
        let out = symnet(&["run", "--config", cfg.to_str().unwrap(), "--format", format]);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", stderr(&out));
        let ext = if format == "json" { "json" } else { "txt" };
        let expected = std::fs::read_to_string(golden.join(format!("{name}.{ext}"))).unwrap();
        assert_eq!(stdout(&out), expected, "{name} drifted from its golden report");
    }
}
