use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frac-total")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("frac-total-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn gen(dir: &Path, family: &str, extra: &[&str]) -> String {
    let path = dir.join(format!("{family}.txt"));
    let p = path.to_str().unwrap();
    let mut args = vec!["gen", family, "--out", p];
    args.extend_from_slice(extra);
    assert!(bin(&args).status.success());
    p.to_owned()
}

#[test]
fn recurrence_csv_first_row() {
    let out = bin(&["recurrence", "--k", "11", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("i,p,q"));
    assert!(lines.next().unwrap().starts_with("1,11/32,5/16,"));
    assert_eq!(lines.count(), 10);
}

#[test]
fn envelope_records_parameters() {
    let v = json(&bin(&["recurrence", "--k", "3", "--xi", "1/2"]));
    assert_eq!(v["schema"], "frac-total/1");
    assert_eq!(v["command"], "recurrence");
    assert_eq!(v["params"]["k"], 3);
}

#[test]
fn chift_of_k4_is_five() {
    let dir = scratch("chift");
    let g = gen(&dir, "complete", &["--n", "4"]);
    let v = json(&bin(&["chift", "--graph", &g]));
    assert_eq!(v["result"]["value"], "5/1");
}

#[test]
fn randomized_output_is_reproducible() {
    let dir = scratch("repro");
    let g = gen(&dir, "petersen", &[]);
    let run = || bin(&["weights", "--graph", &g, "--ell", "2", "--k", "3", "--trials", "1000", "--seed", "9"]);
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["params"]["seed"], 9);
    assert_eq!(v["params"]["trials"], 1000);
}

#[test]
fn decompose_writes_boundary_files() {
    let dir = scratch("decompose");
    let cycle = gen(&dir, "cycle", &["--n", "48"]);
    let v = json(&bin(&["decompose", "--graph", &cycle, "--ell", "8", "--seed", "1"]));
    assert_eq!(v["result"]["sets"].as_array().unwrap().len(), 24);
    assert_eq!(v["result"]["partition"], true);
    assert_eq!(v["result"]["all_verified"], true);

    let g = gen(&dir, "petersen", &[]);
    let out_dir = dir.join("sets");
    json(&bin(&["decompose", "--graph", &g, "--ell", "2", "--seed", "1", "--out", out_dir.to_str().unwrap()]));
    let boundary = out_dir.join("boundary_1_0.txt");
    assert!(boundary.exists() && out_dir.join("report.json").exists());
    let factor = out_dir.join("factor.txt");
    let s = json(&bin(&[
        "sample", "--graph", &g, "--factor", factor.to_str().unwrap(),
        "--boundary", boundary.to_str().unwrap(), "--k", "3", "--trials", "300", "--seed", "4",
    ]));
    assert_eq!(s["result"]["violations"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["recurrence"]).status.code(), Some(1));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(bin(&["recurrence", "--k", "3", "--xi", "2"]).status.code(), Some(1));
    let dir = scratch("codes");
    let missing = dir.join("missing.txt");
    assert_eq!(bin(&["chift", "--graph", missing.to_str().unwrap()]).status.code(), Some(1));
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "p 2 1\ne 1 5\n").unwrap();
    let out = bin(&["cover", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bridged_graph_has_no_cover() {
    let dir = scratch("bridge");
    let path = dir.join("bridged.txt");
    let half = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
    let mut text = String::from("p 10 15\n");
    for shift in [0, 5] {
        for (a, b) in half {
            text.push_str(&format!("e {} {}\n", a + shift, b + shift));
        }
    }
    text.push_str("e 5 10\n");
    std::fs::write(&path, text).unwrap();
    let out = bin(&["cover", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bridge"));
}
