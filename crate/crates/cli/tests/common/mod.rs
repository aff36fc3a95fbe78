//! Scripted CLI invocations and their golden files.

use std::path::PathBuf;
use std::process::Command;

const JSON: [&str; 3] = ["--format", "json", "--no-timing"];

pub struct Case {
    pub name: &'static str,
    pub env: Option<(&'static str, &'static str)>,
    pub args: Vec<&'static str>,
}

fn case(name: &'static str, json: bool, args: &[&'static str]) -> Case {
    let mut all = if json { JSON.to_vec() } else { Vec::new() };
    all.extend_from_slice(args);
    Case { name, env: None, args: all }
}

pub fn cases() -> Vec<Case> {
    const FILE: &str = "tests/golden/inputs/models.sp";
    let mut env_case = case("verify_env_depth_json", true, &["verify", "--alpha", "w+1", "diag(tower(rank=w))"]);
    env_case.env = Some(("SPECTRA_DEFAULT_DEPTH", "300"));
    vec![
        case("acc_tower_w+1_at_w", false, &["acc", "--alpha", "w", "tower(rank=w+1)"]),
        case("acc_union_json", true, &["acc", "--alpha", "2", "union(disk(2,1), tower(rank=3))"]),
        case("rank_tower_w^2", false, &["rank", "tower(rank=w^2)"]),
        case("rank_radius_json", true, &["rank", "--lo", "1/4", "--hi", "1", "tower(rank=2)"]),
        case("rank_at_anchor", false, &["rank-at", "--point", "0", "tower(rank=w*2)"]),
        case("rank_at_absent", false, &["rank-at", "--point", "5", "tower(rank=1)"]),
        case("iso_finite", false, &["iso", "--count", "3", "finite{1, 1/2, 3/4+1/5i}"]),
        case("degree_sigma_tower_w", false, &["degree", "--kind", "sigma", "diag(tower(rank=w, anchor=0, scale=1, dir=0))"]),
        case("degree_all_json", true, &["degree", "dsum(diag(tower(rank=2)), explicit(sigma=disk(3,1)))"]),
        case("degree_validation_error_json", true, &["degree", "diag(disk(0,1))"]),
        case("check_qnil", false, &["check", "--alpha", "1", "--kind", "sigma", "qnil"]),
        case("check_browder_json", true, &["check", "--alpha", "w+1", "--kind", "browder", "diag(tower(rank=w))"]),
        case("decompose_precondition", false, &["decompose", "--alpha", "1", "explicit(sigma=disk(0,1))"]),
        case("decompose_drazin_json", true, &["decompose", "--alpha", "2", "--kind", "drazin", "dsum(diag(tower(rank=1)), invertible(circle(0,2)))"]),
        case("chain_tower_2", false, &["chain", "--alpha", "3", "--count", "4", "diag(tower(rank=2))"]),
        case("chain_tower_w_json", true, &["chain", "--alpha", "w+1", "--count", "3", "diag(tower(rank=w))"]),
        case("verify_tower_1", false, &["verify", "--alpha", "2", "diag(tower(rank=1))"]),
        env_case,
        case("verify_not_diagonal", false, &["verify", "--alpha", "2", "explicit(sigma=disk(3,1))"]),
        case("oracle_tower_2", false, &["oracle", "--stages", "3", "tower(rank=2)"]),
        case("oracle_circle_json", true, &["oracle", "--stages", "2", "--depth", "100", "union(circle(0,3), tower(rank=1))"]),
        case("al_spectrum_union", false, &["al-spectrum", "dsum(diag(tower(rank=w+1)), explicit(sigma=disk(3,1)))"]),
        case("al_spectrum_file", false, &["--file", FILE, "al-spectrum"]),
        case("report_tower_1_json", true, &["report", "--alpha", "2", "diag(tower(rank=1))"]),
        case("report_file_shifted", false, &["--file", FILE, "report", "--alpha", "w+2", "mshift(M, 5/8)"]),
    ]
}

pub fn invoke(c: &Case) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spectra"));
    cmd.current_dir(env!("CARGO_MANIFEST_DIR")).args(&c.args).env_remove("SPECTRA_DEFAULT_DEPTH");
    if let Some((k, v)) = c.env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let mut s = String::new();
    if let Some((k, v)) = c.env {
        s.push_str(&format!("env: {k}={v}\n"));
    }
    s.push_str(&format!("args: {}\n", c.args.join(" ")));
    s.push_str(&format!("exit: {}\n", out.status.code().unwrap_or(-1)));
    s.push_str("--- stdout\n");
    s.push_str(&String::from_utf8_lossy(&out.stdout));
    s.push_str("--- stderr\n");
    s.push_str(&String::from_utf8_lossy(&out.stderr));
    s
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.golden"))
}

pub const VERBS: [&str; 12] = ["acc", "rank", "rank-at", "iso", "degree", "check", "decompose", "chain", "verify", "oracle", "al-spectrum", "report"];

/// Runs every case twice; returns one message per nondeterministic or
/// mismatching case. With `update` set, rewrites the golden files instead.
pub fn compare_all(update: bool) -> Vec<String> {
    let mut problems = Vec::new();
    for c in cases() {
        let first = invoke(&c);
        if first != invoke(&c) {
            problems.push(format!("{}: output differs between runs", c.name));
            continue;
        }
        let path = golden_path(c.name);
        if update {
            std::fs::write(&path, &first).expect("golden file is writable");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == first => {}
            Ok(expected) => problems.push(format!("{}:\n--- expected\n{expected}\n--- actual\n{first}", c.name)),
            Err(e) => problems.push(format!("{}: {e}", c.name)),
        }
    }
    problems
}
