use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn zpcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zpcolor")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = zpcolor(&all);
    (serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&out))), out.status.code().unwrap())
}

fn k5_2_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# all pairs of 5 points").unwrap();
    writeln!(f, "v 5").unwrap();
    for a in 1..=5 {
        for b in a + 1..=5 {
            writeln!(f, "e {a} {b}").unwrap();
        }
    }
    f
}

#[test]
fn bounds_for_k5_pairs() {
    let file = k5_2_file();
    let path = file.path().to_str().unwrap();
    let out = zpcolor(&["bounds", "--file", path, "--r", "2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("chain consistent"));

    let (v, code) = json(&["bounds", "--file", path, "--r", "2", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["consistent"], true);
    let bounds = v["bounds"].as_array().unwrap();
    let exact = |name: &str| {
        let b = bounds.iter().find(|b| b["name"].as_str().unwrap().starts_with(name)).unwrap();
        assert_eq!(b["lower"], b["upper"]);
        b["lower"].as_i64().unwrap()
    };
    assert_eq!(exact("cd_2"), 3);
    assert_eq!(exact("|V(F)| - alt_2"), 3);
    assert_eq!(exact("(r - 1) * chi"), 3);
}

#[test]
fn fan_lemma_small_grid_is_clean() {
    let (v, code) = json(&["verify", "--lemma", "zp-fan", "--n", "3", "--m", "3", "--p", "2", "--alpha", "1", "--exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(v["counterexamples"], 0);
}

#[test]
fn manifest_campaign() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"lemma": "zp-fan", "grid": [{{"n": 2, "m": 3, "p": 3, "alpha": 1}}, {{"n": 3, "m": 2, "p": 2, "alpha": 0}}],
            "enumeration": {{"mode": "exhaustive"}}, "max_nodes": null}}"#
    )
    .unwrap();
    let (v, code) = json(&["verify", "--manifest", f.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["counterexamples"], 0);
    assert_eq!(v["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn cross_index_of_k4() {
    let out = zpcolor(&["xind", "--poset", "hom", "--graph", "K4", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("xind        2"));
    let (v, _) = json(&["xind", "--graph", "K4", "--p", "2"]);
    assert_eq!(v["xind"], 2);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["colorful", "--graph", "petersen", "--p", "2", "--samples", "30", "--seed", "7"];
    let (a, _) = json(&args);
    let (b, _) = json(&args);
    assert_eq!(a, b);
    let (c, code) = json(&["local", "--graph", "K4", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(c, json(&["local", "--graph", "K4", "--p", "2"]).0);
    assert_eq!(c["formulas"]["hypergraph_bound"], 3);
    assert_eq!(c["local_chromatic"], 4);
}

#[test]
fn colorful_on_petersen_reports_one_based_parts() {
    let (v, code) = json(&["colorful", "--graph", "petersen", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["target"], 3);
    assert_eq!(v["status"], "found");
    let parts = v["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().flat_map(|p| p.as_array().unwrap()).all(|x| (1..=10).contains(&x.as_u64().unwrap())));
}

#[test]
fn coloring_file_and_counterexample_exit() {
    let mut c = tempfile::NamedTempFile::new().unwrap();
    writeln!(c, "1 2").unwrap();
    let out = zpcolor(&["colorful", "--graph", "K2", "--p", "2", "--target", "3", "--coloring", c.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("counterexample"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = zpcolor(&["--max-nodes", "1", "chromatic", "--graph", "petersen"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn zigzag_over_all_colorings() {
    let (v, code) = json(&["zigzag", "--graph", "C5", "--all-colorings"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], v["colorings"]);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(zpcolor(&["bounds", "--graph", "K5", "--r", "2", "--p", "4"]).status.code(), Some(1));
    assert_eq!(zpcolor(&["chromatic", "--graph", "nonsense"]).status.code(), Some(1));
    assert_eq!(zpcolor(&["chromatic"]).status.code(), Some(1));
    assert_eq!(zpcolor(&["frobnicate"]).status.code(), Some(1));
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "v 3\ne 1 7").unwrap();
    let out = zpcolor(&["chromatic", "--file", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(zpcolor(&["--help"]).status.code(), Some(0));
    assert_eq!(zpcolor(&["--version"]).status.code(), Some(0));
}

#[test]
fn nonprime_modulus_is_experimental() {
    let (v, code) = json(&["--allow-nonprime", "bounds", "--graph", "K6_2", "--r", "2", "--p", "4"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["experimental"], true);
}

#[test]
fn kneser_output_parses_back() {
    let out = zpcolor(&["kneser", "--graph", "K5_2", "--r", "2"]);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(&out.stdout).unwrap();
    let (v, code) = json(&["chromatic", "--file", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["chromatic"], 3);
}
