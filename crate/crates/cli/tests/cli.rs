use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use syntaft_cli::formats;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn syntaft(args: &[&str]) -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_syntaft"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("spawn syntaft");
    Outcome {
        code: output.status.code().expect("exit code"),
        stdout: String::from_utf8(output.stdout).expect("utf8"),
        stderr: String::from_utf8(output.stderr).expect("utf8"),
    }
}

fn in_process(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("syntaft").chain(args.iter().copied()).map(|a| {
        if a.contains('.') && !a.starts_with('-') && fixtures().join(a).exists() {
            fixture(a)
        } else {
            a.to_string()
        }
    });
    let code = syntaft_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn diagram_matches_homomorphism_count() {
    let run = syntaft(&["pipeline", "diagram", "z2.group", "--genus", "2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.trim_end().ends_with("closed_invariant=8 oracle=16/|G|=8 MATCH"));
    for group in ["z3", "klein", "s3"] {
        let run = syntaft(&["pipeline", "diagram", &format!("{group}.group"), "--genus", "2"]);
        assert_eq!(run.code, 0, "{group}: {}", run.stderr);
        assert!(run.stdout.contains("MATCH"));
    }
}

#[test]
fn verdicts_map_to_exit_codes() {
    let run = syntaft(&["alg", "semisimple", "dual_numbers.alg"]);
    assert_eq!((run.code, run.stdout.trim()), (1, "false"));
    let run = syntaft(&["alg", "semisimple", "s3.alg"]);
    assert_eq!((run.code, run.stdout.trim()), (0, "true"));
    let run = syntaft(&["alg", "check", "nonassociative.alg"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("Associativity"));
    let run = syntaft(&["code", "test", "a_ab_ba.lang"]);
    assert_eq!((run.code, run.stdout.trim()), (1, "false"));
    let run = syntaft(&["code", "test", "aa_ab.lang"]);
    assert_eq!(run.code, 0);
}

#[test]
fn state_sums_from_files() {
    let run = syntaft(&["tft", "statesum", "m2.alg", "torus.tri"]);
    assert_eq!((run.code, run.stdout.trim()), (0, "1"));
    let run = syntaft(&["tft", "statesum", "s3.alg", "genus2_scrambled.tri"]);
    assert_eq!(run.stdout.trim(), "9/4");
    let run = syntaft(&["tft", "statesum", "s3.alg", "--genus", "2"]);
    assert_eq!(run.stdout.trim(), "9/4");
}

#[test]
fn pachner_script_preserves_analysis() {
    let base = syntaft(&["tft", "analyze", "torus.tri"]);
    let moved = syntaft(&["tft", "pachner", "torus.tri", "--moves", "scramble.moves"]);
    assert_eq!(moved.code, 0, "{}", moved.stderr);
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("moved.tri");
    fs::write(&path, &moved.stdout).unwrap();
    let after = syntaft(&["tft", "analyze", path.to_str().unwrap()]);
    let field = |s: &str, key: &str| {
        s.split_whitespace().find_map(|t| t.strip_prefix(key)).map(str::to_string)
    };
    assert_eq!(field(&base.stdout, "genus="), Some("1".into()));
    assert_eq!(field(&after.stdout, "genus="), Some("1".into()));
    assert_eq!(field(&after.stdout, "F="), Some("4".into()));
}

#[test]
fn malformed_rational_is_a_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.alg");
    fs::write(&path, "syntaft-alg v1\ndim 1\nnames p0\nunit 1\n0 0 0 1/0\n").unwrap();
    let run = syntaft(&["alg", "check", path.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 5"), "{}", run.stderr);
    assert!(formats::read_algebra(&fs::read_to_string(&path).unwrap()).is_err());
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(syntaft(&["alg", "frobnicate"]).code, 2);
    assert_eq!(syntaft(&["alg", "check", "missing.alg"]).code, 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let run = syntaft(&["--budget", "10", "tft", "statesum", "m2.alg", "--genus", "2"]);
    assert_eq!(run.code, 3, "{}", run.stdout);
    let run = syntaft(&["--budget", "10", "group", "homcount", "s3.group", "--genus", "3"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("budget"));
}

#[test]
fn json_output_parses() {
    let run = syntaft(&["--json", "tft", "statesum", "s3.alg", "genus2_scrambled.tri"]);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["value"], "9/4");
    assert_eq!(v["genus"], 2);

    let run = syntaft(&["--json", "alg", "semisimple", "dual_numbers.alg"]);
    assert_eq!(run.code, 1);
    serde_json::from_str::<serde_json::Value>(&run.stdout).unwrap();

    let run = syntaft(&["--json", "--budget", "10", "group", "homcount", "s3.group", "--genus", "3"]);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn fixture_files_round_trip_byte_identically() {
    for entry in fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let rewritten = match ext {
            "alg" => formats::write_algebra(&formats::read_algebra(&text).unwrap()),
            "functional" => formats::write_functional(&formats::read_functional(&text).unwrap()),
            "group" => formats::write_group(&formats::read_group(&text).unwrap()),
            "wfa" => formats::write_wfa(&formats::read_wfa(&text).unwrap()),
            "dfa" => formats::write_dfa(&formats::read_dfa(&text).unwrap()),
            "lang" => formats::write_language(&formats::read_language(&text).unwrap()),
            "tri" => formats::write_triangulation(&formats::read_triangulation(&text).unwrap()),
            _ => continue,
        };
        // Saving what was loaded must be stable, comments aside.
        let again = match ext {
            "alg" => formats::write_algebra(&formats::read_algebra(&rewritten).unwrap()),
            "functional" => formats::write_functional(&formats::read_functional(&rewritten).unwrap()),
            "group" => formats::write_group(&formats::read_group(&rewritten).unwrap()),
            "wfa" => formats::write_wfa(&formats::read_wfa(&rewritten).unwrap()),
            "dfa" => formats::write_dfa(&formats::read_dfa(&rewritten).unwrap()),
            "lang" => formats::write_language(&formats::read_language(&rewritten).unwrap()),
            _ => formats::write_triangulation(&formats::read_triangulation(&rewritten).unwrap()),
        };
        assert_eq!(rewritten, again, "{}", path.display());
        if !text.lines().any(|l| l.trim_start().starts_with('#')) {
            assert_eq!(rewritten, text, "{}", path.display());
        }
    }
}

#[test]
fn made_algebras_round_trip() {
    for (name, param) in [("split", "3"), ("dual", "0"), ("upper-triangular", "0"), ("matrix", "2")] {
        let (code, text) = in_process(&["alg", "make", "--name", name, "--param", param]);
        assert_eq!(code, 0);
        let alg = formats::read_algebra(&text).unwrap();
        assert_eq!(formats::write_algebra(&alg).trim_end(), text.trim_end(), "{name}");
    }
}

#[test]
fn functional_out_writes_a_loadable_form() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("dw.functional");
    let run = syntaft(&["group", "algebra", "s3.group", "--form", "dw", "--functional-out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let f = formats::read_functional(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), fs::read_to_string(fixture("s3_dw.functional")).unwrap().lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect::<String>());
    let alg = formats::read_algebra(&run.stdout).unwrap();
    assert_eq!(alg.dim(), 6);
    assert_eq!(f.len(), 6);
}

#[test]
fn mso_commands() {
    let run = syntaft(&["mso", "eval", "exists_a.mso", "--word", "aba"]);
    assert_eq!((run.code, run.stdout.trim()), (0, "2"));
    let run = syntaft(&["mso", "eval", "unrestricted.mso", "--word", "ab"]);
    assert_eq!(run.code, 1);
    let run = syntaft(&["mso", "ltft-report", "m2.alg", "--max-len", "3"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("mismatches 0"));
    assert_eq!(syntaft(&["mso", "ltft-report", "dual_numbers.alg"]).code, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["pipeline", "diagram", "s3.group", "--genus", "2"];
    let first = syntaft(&args).stdout;
    for _ in 0..3 {
        assert_eq!(syntaft(&args).stdout, first);
    }
    let (_, a) = in_process(&["mso", "from-wfa", "count_a.wfa"]);
    let (_, b) = in_process(&["mso", "from-wfa", "count_a.wfa"]);
    assert_eq!(a, b);
}
