use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn regdiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regdiag")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn sig() -> String {
    fixture("sig.json")
}

const PSI: &str = "exists x2. P(x2,x1) & f(x1) = x2";
const PHI: &str = "exists x2. P(x2,x1)";

#[test]
fn translate_prints_text_json_and_dot() {
    let s = sig();
    let out = regdiag(&["translate", "--sig", &s, "--context", "1", PHI]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains(": 1 → 0"), "{}", stdout(&out));

    let out = regdiag(&["--format", "json", "translate", "--sig", &s, "--context", "1", PHI]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["dom"].as_u64(), v["cod"].as_u64()), (Some(1), Some(0)));

    let out = regdiag(&["--format", "dot", "translate", "--sig", &s, "--context", "1", PHI]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("digraph"));
}

#[test]
fn typecheck_reports_sort_errors() {
    let s = sig();
    let out = regdiag(&["typecheck", "--sig", &s, "--context", "2", "P(f(x1),x2)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("P(f(x1),x2) : (2,0)"));
    let out = regdiag(&["typecheck", "--sig", &s, "--context", "1", "P(x1,x2)"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn derivations_accept_and_reject() {
    let s = sig();
    let out = regdiag(&["check-derivation", "--sig", &s, &fixture("entailment.deriv")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Accepted, start <= goal"));

    let out = regdiag(&["check-derivation", "--sig", &s, &fixture("snake.deriv")]);
    assert_eq!(code(&out), 0);

    let text = std::fs::read_to_string(fixture("entailment.deriv")).unwrap().replace("\"left_pad\": 1", "\"left_pad\": 0");
    let path = std::env::temp_dir().join(format!("regdiag-tampered-{}.deriv", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let out = regdiag(&["check-derivation", "--sig", &s, path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("Rejected"));
}

#[test]
fn countermodel_exit_codes_follow_the_search() {
    let s = sig();
    let none = regdiag(&["countermodel", "--sig", &s, "--formula", "--context", "1", "--max-carrier", "3", PSI, PHI]);
    assert_eq!(code(&none), 0);
    assert!(stdout(&none).contains("no countermodel up to carrier size 3"));

    let found = regdiag(&["--format", "json", "countermodel", "--sig", &s, "--formula", "--context", "1", PHI, PSI]);
    assert_eq!(code(&found), 1);
    let v: Value = serde_json::from_str(&stdout(&found)).unwrap();
    assert_eq!(v["countermodel"]["model"]["carrier"].as_array().unwrap().len(), 2);
}

#[test]
fn eval_and_include_use_carrier_names() {
    let (s, m) = (sig(), fixture("model2.json"));
    let out = regdiag(&["eval", "--sig", &s, "--model", &m, "--formula", "--context", "1", PHI]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("((b), ())"));
    assert!(!stdout(&out).contains("((a), ())"));

    let yes = regdiag(&["include", "--sig", &s, "--model", &m, "--formula", "--context", "1", PSI, PHI]);
    assert_eq!(code(&yes), 0);
    let no = regdiag(&["include", "--sig", &s, "--model", &m, "--formula", "--context", "1", "exists x2. P(x1,x2)", "P(x1,x1)"]);
    assert_eq!(code(&no), 1);
    assert!(stdout(&no).contains("((a), ())"));
}

#[test]
fn diagrams_render_and_bad_input_is_a_usage_error() {
    let s = sig();
    let out = regdiag(&["render", "--sig", &s, "copy ; (f (x) id) ; P"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("canonical:"));
    assert_eq!(code(&regdiag(&["render", "--sig", &s, "copy ; ; P"])), 2);
    assert_eq!(code(&regdiag(&["render", "--sig", "/nonexistent/sig.json", "id"])), 2);
}

#[test]
fn doctrine_files_validate_or_fail() {
    assert_eq!(code(&regdiag(&["doctrine", "validate", &fixture("pow2.doctrine.json")])), 0);
    let bad = regdiag(&["doctrine", "validate", &fixture("pow2-bad-exists.doctrine.json")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("witness"));
    assert_eq!(code(&regdiag(&["doctrine", "validate", &fixture("pow2-missing-delta.doctrine.json")])), 2);
    assert_eq!(code(&regdiag(&["doctrine", "validate", &fixture("pow2-non-monotone.doctrine.json")])), 2);
}

#[test]
fn unit_verdicts_per_builtin() {
    assert_eq!(code(&regdiag(&["doctrine", "eta-iso", "pow"])), 0);
    let neg = regdiag(&["--format", "json", "doctrine", "eta-iso", "pow-neg"]);
    assert_eq!(code(&neg), 1);
    let v: Value = serde_json::from_str(&stdout(&neg)).unwrap();
    let status = |id: &str| {
        v["checks"].as_array().unwrap().iter().find(|c| c["id"] == id).map(|c| c["status"].clone()).unwrap()
    };
    assert_eq!(status("eta_iso.full"), "fail");
    assert_eq!(status("eta_iso.faithful"), "pass");
    assert_eq!(status("eta_iso.full_vs_ruc"), "pass");
    assert_eq!(code(&regdiag(&["doctrine", "ruc", "pow-neg"])), 1);
    assert_eq!(code(&regdiag(&["doctrine", "comprehension", "pow-klein"])), 1);
    assert_eq!(code(&regdiag(&["doctrine", "lifts-agree"])), 0);
}

#[test]
fn bicategory_commands_pass_on_small_objects() {
    for args in [
        vec!["cbc-verify", "pow", "--max-object-card", "2", "--unit-products"],
        vec!["cbc-verify", "pow", "--rel", "--max-object-card", "2"],
        vec!["doctrine", "maps", "pow", "--max-object-card", "2", "--unit-products"],
        vec!["doctrine", "triangles", "pow", "--with-rel", "--max-object-card", "2"],
        vec!["doctrine", "of-cbc", "pow", "--rel"],
        vec!["doctrine", "bicat", "pow", "--max-object-card", "2"],
    ] {
        let out = regdiag(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).ends_with("all checks pass\n"));
    }
}

#[test]
fn soundness_and_factoring() {
    let out = regdiag(&["soundness", "--sig", &sig(), "--random-models", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("66 models with carrier ≤ 2"));
    assert!(stdout(&out).contains("0 violations"));

    let ksig = std::env::temp_dir().join(format!("regdiag-ksig-{}.json", std::process::id()));
    std::fs::write(&ksig, r#"{"functions":{"g1":1,"g2":1},"predicates":{}}"#).unwrap();
    let k = ksig.to_str().unwrap();
    let no = regdiag(&["factor", "--sig", k, "--context", "1", "<g1(x1), g2(x1)>"]);
    let yes = regdiag(&["--format", "json", "factor", "--sig", k, "--context", "1", "<g1(x1), g1(x1)>"]);
    std::fs::remove_file(&ksig).ok();
    assert!(stdout(&no).contains("does not factor"));
    let v: Value = serde_json::from_str(&stdout(&yes)).unwrap();
    assert!(v["factor"].is_string());
}

#[test]
fn output_is_deterministic_for_a_seed() {
    let s = sig();
    let run = |seed: &str| {
        stdout(&regdiag(&[
            "--seed", seed, "--format", "json", "countermodel", "--sig", &s, "--formula", "--context", "1", "--budget", "8", PHI, PSI,
        ]))
    };
    assert_eq!(run("5"), run("5"));
    let report = |seed: &str| stdout(&regdiag(&["--seed", seed, "--format", "json", "doctrine", "validate", "pow", "--depth", "2", "--budget", "64", "--samples", "16"]));
    assert_eq!(report("3"), report("3"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&regdiag(&["translate", "--bogus"])), 2);
    assert_eq!(code(&regdiag(&["no-such-command"])), 2);
    assert_eq!(code(&regdiag(&["--format", "dot", "doctrine", "ruc", "pow"])), 2);
    assert_eq!(code(&regdiag(&["doctrine", "validate", "/nonexistent.json"])), 2);
    let help = regdiag(&["--help"]);
    assert_eq!(code(&help), 0);
    let text = stdout(&help);
    for cmd in ["translate", "typecheck", "eval", "include", "countermodel", "check-derivation", "doctrine", "cbc-verify", "render", "soundness", "factor"] {
        assert!(text.contains(cmd), "help lacks {cmd}");
    }
    let doctrine_help = stdout(&regdiag(&["doctrine", "--help"]));
    for cmd in ["validate", "bicat", "maps", "ruc", "comprehension", "triangles", "eta-iso", "of-cbc"] {
        assert!(doctrine_help.contains(cmd), "doctrine help lacks {cmd}");
    }
}
