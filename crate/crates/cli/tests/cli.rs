use proptest::prelude::*;
use spectra_cli::run_args;

fn run(args: &[&str]) -> spectra_cli::Outcome {
    run_args(std::iter::once("spectra").chain(args.iter().copied()))
}

#[test]
fn documented_invocations() {
    let out = run(&["degree", "--kind", "sigma", "diag(tower(rank=w, anchor=0, scale=1, dir=0))"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "w+1\n"));
    let out = run(&["decompose", "--alpha", "1", "explicit(sigma=disk(0,1))"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("NotGAlphaInvertible"), "{}", out.stderr);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["check", "qnil"]).code, 2);
    assert_eq!(run(&["chain", "--alpha", "2", "qnil"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["acc"]).code, 2);
    assert_eq!(run(&["acc", "--alpha", "w^", "finite{1}"]).code, 2);
    assert_eq!(run(&["rank", "--lo", "1", "tower(rank=1)"]).code, 2);
    assert_eq!(run(&["rank", "--lo", "1", "--hi", "1/2", "tower(rank=1)"]).code, 2);
    assert_eq!(run(&["degree", "tower(rank=1)"]).code, 2);
    assert_eq!(run(&["acc", "qnil"]).code, 2);
    assert_eq!(run(&["--file", "/nonexistent/input.sp", "acc"]).code, 2);
}

#[test]
fn json_errors_are_objects_on_stdout() {
    let out = run(&["--format", "json", "acc", "disk(0 1)"]);
    assert_eq!(out.code, 2);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["column"], 8);
    assert!(out.stderr.is_empty());
}

#[test]
fn json_success_has_every_field() {
    let out = run(&["--format", "json", "oracle", "--stages", "1", "--depth", "20", "finite{0, 1}"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    for key in ["version", "command", "input_echo", "result", "witnesses", "checks", "durations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"]["options"]["depth"], 20);
}

#[test]
fn precondition_errors_exit_with_three() {
    assert_eq!(run(&["verify", "--alpha", "1", "qnil"]).code, 3);
    assert_eq!(run(&["decompose", "--alpha", "0", "diag(finite{1})"]).code, 3);
    assert_eq!(run(&["chain", "--alpha", "2", "--count", "2", "diag(finite{1})"]).code, 3);
    assert_eq!(run(&["verify", "--alpha", "1", "diag(tower(rank=1))"]).code, 3);
    assert_eq!(run(&["rank", "--lo", "0", "--hi", "1/1000", "seg(0, 1)"]).code, 3);
}

#[test]
fn file_bindings_and_inline_targets() {
    let dir = std::env::temp_dir().join(format!("spectra-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("defs.sp");
    std::fs::write(&path, "let S = tower(rank=3);\nlet M = diag(S);\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["--file", p, "degree", "--kind", "sigma", "M"]).stdout, "4\n");
    assert_eq!(run(&["--file", p, "acc", "--alpha", "3", "S"]).stdout, "finite{0}\n");
    assert_eq!(run(&["--file", p, "degree"]).code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn false_clauses_are_reported_with_success() {
    let out = run(&["report", "--alpha", "1", "--depth", "50", "diag(tower(rank=1))"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("g_alpha.ii: false"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn arbitrary_input_never_panics(src in "[a-z(){},=+*/^0-9i -]{0,40}") {
        let out = run(&["rank", &src]);
        prop_assert!((0..=3).contains(&out.code));
        let out = run(&["--format", "json", "degree", &src]);
        prop_assert!((0..=3).contains(&out.code));
        prop_assert!(serde_json::from_str::<serde_json::Value>(&out.stdout).is_ok());
    }

    #[test]
    fn arbitrary_alpha_never_panics(alpha in "[w0-9^()*+ ]{0,16}") {
        let out = run(&["check", "--alpha", &alpha, "diag(tower(rank=2))"]);
        prop_assert!(out.code == 0 || out.code == 2);
    }
}
