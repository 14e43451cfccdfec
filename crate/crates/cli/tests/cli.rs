use std::fs;
use std::process::Command;

use serde::de::DeserializeOwned;
use serde::Serialize;

use dimerkit_cli::report::*;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dimerkit(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_dimerkit"))
        .args(args)
        .env_remove("DIMERKIT_DEFAULT_BOUNDS")
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Parses a JSON report and checks that re-serializing reproduces it.
fn roundtrip<T: DeserializeOwned + Serialize>(stdout: &str) -> Envelope<T> {
    let env: Envelope<T> = serde_json::from_str(stdout).expect("report parses");
    assert_eq!(env.schema_version, SCHEMA_VERSION);
    assert_eq!(env.to_json() + "\n", stdout, "JSON report does not round-trip");
    env
}

#[test]
fn check_hex_is_cancellative() {
    let out = dimerkit(&["check", "corpus:hex"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("cancellative"));
}

#[test]
fn check_fig1_lists_witnesses() {
    let out = dimerkit(&["check", "corpus:fig1"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("not cancellative"));
    assert!(out.stdout.contains("non-cancellative pair"));
    assert!(out.stdout.contains("nonnoetherian witness"));

    let json = dimerkit(&["check", "corpus:fig1", "--json"]);
    assert_eq!(json.code, 1);
    let env: Envelope<CheckResult> = roundtrip(&json.stdout);
    assert_eq!(env.exit_code, 1);
    let r = env.result.report;
    assert!(!r.cancellative);
    assert_eq!(r.uncovered_arrows, ["d", "c"]);
    assert!(r.noncancellative_pair.is_some());
    assert!(r.nonnoetherian.is_some());
}

#[test]
fn check_with_contraction_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("psi.json");
    fs::write(&file, r#"{"contracted": ["c"]}"#).unwrap();
    let out = dimerkit(&["check", "corpus:fig1", "--contraction", file.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    let env: Envelope<CheckResult> = roundtrip(&out.stdout);
    assert_eq!(env.result.report.contraction, Some(vec!["c".to_string()]));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // two faces using the same arrow with the same sign: fails incidence
    let broken = dir.path().join("broken.dimer");
    fs::write(&broken, "vertices: 1\narrow x 0 0 (0,0)\nface + [x]\nface + [x]\n").unwrap();
    let out = dimerkit(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("FAIL"));

    let garbage = dir.path().join("garbage.dimer");
    fs::write(&garbage, "vertices: one\n").unwrap();
    let out = dimerkit(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1"));

    let out = dimerkit(&["validate", "corpus:fig1", "--json"]);
    assert_eq!(out.code, 0);
    let env: Envelope<ValidateResult> = roundtrip(&out.stdout);
    assert!(env.result.report.valid);
    assert_eq!((env.result.vertices, env.result.arrows, env.result.faces), (3, 9, 6));
}

#[test]
fn usage_errors_exit_64() {
    for args in [&["frobnicate"][..], &["check"], &["paths", "corpus:hex", "--from", "0"], &["contract", "corpus:hex"]] {
        let out = dimerkit(args);
        assert_eq!(out.code, 64, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(dimerkit(&["--help"]).code, 0);
    assert_eq!(dimerkit(&["--version"]).code, 0);
}

#[test]
fn unknown_model_is_invalid_input() {
    assert_eq!(dimerkit(&["check", "corpus:nope"]).code, 2);
    assert_eq!(dimerkit(&["check", "/nonexistent/model.dimer"]).code, 2);
    let out = dimerkit(&["check", "corpus:unmatched", "--json"]);
    assert_eq!(out.code, 2);
    let env: Envelope<ErrorResult> = roundtrip(&out.stdout);
    assert!(env.result.error.contains("degenerate"));
}

#[test]
fn matchings_json() {
    let out = dimerkit(&["matchings", "corpus:fig1", "--json"]);
    assert_eq!(out.code, 0);
    let env: Envelope<MatchingsResult> = roundtrip(&out.stdout);
    let r = env.result;
    assert_eq!((r.perfect_count, r.simple_count), (6, 3));
    assert_eq!(r.matchings.iter().filter(|m| m.simple).count(), 3);
    for m in &r.matchings {
        let mut sorted = m.arrows.clone();
        sorted.sort();
        assert_eq!(m.arrows.len(), 3);
        assert!(sorted.iter().all(|a| m.arrows.contains(a)));
    }

    let out = dimerkit(&["matchings", "corpus:fig1", "--simple-only", "--json"]);
    let env: Envelope<MatchingsResult> = roundtrip(&out.stdout);
    assert!(env.result.matchings.iter().all(|m| m.simple));
    assert_eq!(env.result.matchings.len(), 3);
}

#[test]
fn paths_with_winding_filter() {
    let out = dimerkit(&["paths", "corpus:hex", "--from", "0", "--to", "0", "--max-len", "3", "--winding", "0,0", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let env: Envelope<PathsResult> = roundtrip(&out.stdout);
    // the trivial path and the six orderings of x, y, z
    assert_eq!(env.result.paths.len(), 7);
    assert!(env.result.paths.iter().all(|p| p.winding.is_zero()));

    let out = dimerkit(&["paths", "corpus:hex", "--from", "0", "--to", "0", "--max-len", "2", "--winding", "-1,-1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("[z]"));

    assert_eq!(dimerkit(&["paths", "corpus:hex", "--from", "5", "--to", "0", "--max-len", "1"]).code, 2);
}

#[test]
fn algebras_exit_codes_and_monomials() {
    let out = dimerkit(&["algebras", "corpus:conifold", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let env: Envelope<AlgebrasResult> = roundtrip(&out.stdout);
    let r = env.result;
    assert!(r.corners_equal);
    assert_eq!(r.variables.len(), 4);
    for c in &r.corners {
        assert_eq!(c.generators.len(), 4);
        assert!(c.generators.iter().all(|m| m.values().sum::<u32>() == 2));
    }

    let out = dimerkit(&["algebras", "corpus:fig1", "--json"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    let env: Envelope<AlgebrasResult> = roundtrip(&out.stdout);
    assert!(!env.result.corners_equal);
    assert!(env.result.r_equals_s.membership_witness.is_some());
}

#[test]
fn contract_writes_target_and_map() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.dimer");
    let map = dir.path().join("psi.json");
    let out = dimerkit(&[
        "contract",
        "corpus:fig1",
        "--arrows",
        "c",
        "--reduce-2cycles",
        "-o",
        target.to_str().unwrap(),
        "--save-contraction",
        map.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let env: Envelope<ContractResult> = roundtrip(&out.stdout);
    assert_eq!(env.result.reduced_arrows.len(), 4);
    assert_eq!(env.result.written.len(), 2);

    let reduced = dimerkit(&["validate", target.to_str().unwrap()]);
    assert_eq!(reduced.code, 0, "{}", reduced.stdout);
    let check = dimerkit(&["check", target.to_str().unwrap()]);
    assert_eq!(check.code, 0);

    let text = fs::read_to_string(&map).unwrap();
    assert!(text.contains("\"vertex_map\""));
    let again = dimerkit(&["check", "corpus:fig1", "--contraction", map.to_str().unwrap()]);
    assert_eq!(again.code, 1, "{}", again.stderr);
}

#[test]
fn contract_verdicts() {
    let out = dimerkit(&["contract", "corpus:conifold", "--arrows", "a1"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("contracts-simple-matching-arrow"));

    // contracting a loop is rejected as invalid input
    let out = dimerkit(&["contract", "corpus:hex", "--arrows", "x"]);
    assert_eq!(out.code, 2);

    let out = dimerkit(&["contract", "corpus:fig1", "--find", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let env: Envelope<ContractResult> = roundtrip(&out.stdout);
    assert!(env.result.search.is_some());
    let contracted = env.result.contraction.unwrap().contracted;
    assert!(contracted.iter().all(|a| a == "c" || a == "d"));
}

#[test]
fn corpus_listing() {
    let out = dimerkit(&["corpus", "--json"]);
    assert_eq!(out.code, 0);
    let env: Envelope<CorpusResult> = roundtrip(&out.stdout);
    let names: Vec<_> = env.result.entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["hex", "conifold", "fig1", "unmatched"]);

    let out = dimerkit(&["corpus", "hex"]);
    assert!(out.stdout.lines().any(|l| l == "vertices: 1"));
    assert_eq!(dimerkit(&["corpus", "nope"]).code, 2);
}

#[test]
fn draw_svg_and_dot() {
    let out = dimerkit(&["draw", "corpus:hex"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches(r#"class="vertex""#).count(), 1);
    assert_eq!(out.stdout.matches(r#"class="winding""#).count(), 3);

    let out = dimerkit(&["draw", "corpus:fig1", "--format", "dot", "--matching", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches(" -> ").count(), 9);
    assert_eq!(out.stdout.matches("style=bold").count(), 3);

    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig1.svg");
    let out = dimerkit(&["draw", "corpus:fig1", "--matching", "0", "-o", svg.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, 0);
    let env: Envelope<DrawResult> = roundtrip(&out.stdout);
    assert!(env.result.document.is_none());
    let body = fs::read_to_string(&svg).unwrap();
    assert_eq!(body.matches(r#"class="arrow matched""#).count(), 3);

    let bare = dir.path().join("bare.dimer");
    fs::write(&bare, corpus_without_positions()).unwrap();
    assert_eq!(dimerkit(&["draw", bare.to_str().unwrap()]).code, 2);
    assert_eq!(dimerkit(&["draw", bare.to_str().unwrap(), "--format", "dot"]).code, 0);
}

fn corpus_without_positions() -> String {
    dimerkit::corpus::hexagon()
        .to_dimer_text()
        .lines()
        .filter(|l| !l.starts_with("pos"))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn bounds_environment_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_dimerkit"))
        .args(["algebras", "corpus:hex", "--json"])
        .env("DIMERKIT_DEFAULT_BOUNDS", "degree=5")
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let env: Envelope<AlgebrasResult> = roundtrip(&stdout);
    assert_eq!(env.result.bounds.degree, 5);

    let out = Command::new(env!("CARGO_BIN_EXE_dimerkit"))
        .args(["algebras", "corpus:hex"])
        .env("DIMERKIT_DEFAULT_BOUNDS", "speed=fast")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_in_process() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = dimerkit_cli::run(["dimerkit", "check", "corpus:conifold"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().starts_with("cancellative"));
}
