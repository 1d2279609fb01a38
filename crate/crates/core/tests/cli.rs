use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legendrian"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn plat_file(text: &str, suffix: &str) -> NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn info_on_trefoil() {
    let f = plat_file("# right-handed trefoil\nplat 2 : 2 2 2\n", ".plat");
    let out = run(&["info", "--rho", "0", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["result"];
    assert_eq!(r["tb"], 1);
    assert_eq!(r["rotation"], 0);
    assert_eq!(r["rhos"][0]["chi_star"], 1);
    assert_eq!(r["rhos"][0]["degree_distribution"]["0"], 3);
    assert_eq!(r["rhos"][0]["degree_distribution"]["1"], 2);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn rulings_from_json_input() {
    let f = plat_file(r#"{"cusps": 2, "word": [2, 2, 2]}"#, ".json");
    let out = run(&["rulings", "--rho", "0", "--format", "json", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"]["rhos"][0];
    assert_eq!(r["count"], 3);
    assert_eq!(r["theta"], serde_json::json!([-1, 1, 1]));
    assert_eq!(r["polynomial"], "z^-1 + 2z");
    assert_eq!(r["rulings"][0]["letters"], "SDR");
}

#[test]
fn augs_and_correspond() {
    let out = run(&["augs", "--rho", "0", "trefoil"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"]["rhos"][0];
    assert_eq!(r["count"], 5);
    assert_eq!(r["aug_number"]["exact"], "5*2^(-1/2)");

    let out = run(&["correspond", "--rho", "0", "trefoil"]);
    assert_eq!(out.status.code(), Some(0));
    let fibers = json(&out)["result"]["rhos"][0]["fibers"].clone();
    let sizes: Vec<u64> = fibers
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["actual_size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![2, 1, 2]);
}

#[test]
fn dga_output_names_generators() {
    let out = run(&["dga", "trefoil"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["d_squared_zero"], true);
    let c1: Vec<Vec<String>> =
        serde_json::from_value(v["result"]["dga"]["differential"]["c1"].clone()).unwrap();
    assert_eq!(c1.len(), 4);
    assert!(c1.contains(&vec![]));
    assert!(c1.contains(&vec!["q1".to_string(), "q2".into(), "q3".into()]));
}

#[test]
fn verify_single_atlas_and_sweep() {
    let f = plat_file("plat 2 : 2 2 2", ".plat");
    let out = run(&["verify", "--rho", "0", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let out = run(&["verify", "--atlas"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify", "--count", "20", "--seed", "1", "--rho", "0", "--rho", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let a = json(&out)["result"].clone();
    let again = json(&run(&["verify", "--count", "20", "--seed", "1", "--rho", "0", "--rho", "1"]))["result"].clone();
    assert_eq!(a, again);

    let out = run(&["verify", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["checks_run"], 0);
}

#[test]
fn random_is_deterministic() {
    let a = run(&["random", "--cusps", "2", "--crossings", "3", "--seed", "7"]);
    let b = run(&["random", "--cusps", "2", "--crossings", "3", "--seed", "7"]);
    assert_eq!(json(&a)["result"], json(&b)["result"]);
    assert_eq!(json(&a)["result"]["diagrams"][0]["word"].as_array().unwrap().len(), 3);

    let out = run(&["random", "--cusps", "2", "--crossings", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_input_exits_one() {
    let bad = plat_file("plat 2 : 2 9", ".plat");
    let out = run(&["info", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let two_components = plat_file("plat 2 :", ".plat");
    assert_eq!(run(&["info", two_components.path().to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["info", "/no/such/file.plat"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["info", "--rho", "zero", "trefoil"]).status.code(), Some(1));
    // rho must divide 2r = 2 for the stabilized unknot
    assert_eq!(run(&["augs", "--rho", "3", "stabilized-unknot"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--rho", "2", "trefoil"]).status.code(), Some(1));
}

#[test]
fn disk_budget_exits_three() {
    let out = run(&["random", "--cusps", "4", "--crossings", "30", "--seed", "1"]);
    let text = json(&out)["result"]["diagrams"][0]["text"].as_str().unwrap().to_string();
    let f = plat_file(&text, ".plat");
    let out = run(&["verify", "--rho", "0", "--disk-budget", "10", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}
