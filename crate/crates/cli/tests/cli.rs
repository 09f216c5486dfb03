use std::path::{Path, PathBuf};
use std::process::Command;

use oddpack_cli::{run_args, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oddpack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn ok_json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn pack_walks_examples() {
    let v = ok_json(&run_args(["oddpack", "pack-walks", &fixture("i1.json")]));
    assert_eq!(v["value"], "2");
    let v = ok_json(&run_args(["oddpack", "pack-walks", &fixture("i2.json")]));
    assert_eq!(v["value"], "0");
    assert_eq!(v["barrier"]["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["barrier"]["edges"].as_array().unwrap().len(), 2);

    let bad = write("bad.json", "{\n  \"vertices\": [\"s\",\n  \"terminals\"\n}");
    let out = run_args(["oddpack", "pack-walks", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 4 column 1"), "{}", out.stderr);
}

#[test]
fn pack_trails_examples() {
    let v = ok_json(&run_args(["oddpack", "pack-trails", &fixture("i3.json")]));
    assert_eq!(v["value"], "2");
    let weights: i64 = v["packing"]["items"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["weight"].as_str().unwrap().parse::<i64>().unwrap())
        .sum();
    assert_eq!(weights, 2);

    let star = write(
        "star3.json",
        r#"{"vertices":["v","a","b","c"],"terminals":["a","b","c"],"edges":[
            {"id":"va","u":"v","v":"a","cap":"2"},{"id":"vb","u":"v","v":"b","cap":"2"},{"id":"vc","u":"v","v":"c","cap":"2"}]}"#,
    );
    let out = run_args(["oddpack", "pack-trails", &star]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("odd degree at v"), "{}", out.stderr);

    let v = ok_json(&run_args(["oddpack", "pack-trails", &fixture("i2.json")]));
    assert_eq!(v["value"], "0");

    let trace = scratch("trace.json");
    ok_json(&run_args([
        "oddpack",
        "pack-trails",
        &fixture("case4.json"),
        "--trace",
        trace.to_str().unwrap(),
    ]));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(t["steps"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["step"] == "regularize" && s["case"] == 4));
}

fn split_certificate(instance: &str) -> (String, String) {
    let v = ok_json(&run_args(["oddpack", "pack-walks", instance]));
    let p = write("p.json", &v["packing"].to_string());
    let b = write("b.json", &v["barrier"].to_string());
    (p, b)
}

#[test]
fn verify_examples() {
    let i3 = fixture("i3.json");
    let (p, b) = split_certificate(&i3);
    assert_eq!(run_args(["oddpack", "verify", &i3, &p, "--barrier", &b]).code, 0);

    let i1 = fixture("i1.json");
    let over = write(
        "over.json",
        r#"{"value":"3","items":[{"weight":"3","edges":[["st","s","t"]]}]}"#,
    );
    let out = run_args(["oddpack", "verify", &i1, &over]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("load 3 above capacity 2"));

    let half = write(
        "half.json",
        r#"{"value":"1","items":[{"weight":"1","edges":[["st","s","t"]]}]}"#,
    );
    let bar = write(
        "bar.json",
        r#"{"vertices":["s","t"],"edges":[],"i_edges":[],"u_edges":["st"],"capacity":"2"}"#,
    );
    assert_eq!(run_args(["oddpack", "verify", &i1, &half]).code, 0);
    assert_eq!(run_args(["oddpack", "verify", &i1, &half, "--barrier", &bar]).code, 1);
}

#[test]
fn min_barrier_and_multiflow() {
    let v = ok_json(&run_args(["oddpack", "min-barrier", &fixture("i3.json")]));
    assert_eq!(v["capacity"], "2");
    assert_eq!(v["barrier"]["u_edges"], serde_json::json!(["st"]));
    for f in ["i1.json", "i3.json"] {
        let v = ok_json(&run_args(["oddpack", "multiflow", &fixture(f), "--integer"]));
        assert_eq!(v["value"], "2");
        assert_eq!(v["partition"]["capacity"], "2");
    }
}

#[test]
fn gen_flags() {
    let a = run_args(["oddpack", "gen", "--seed", "1", "--vertices", "6"]);
    assert_eq!(a, run_args(["oddpack", "gen", "--seed", "1", "--vertices", "6"]));
    let inst = write("g.json", &ok_json(&a).to_string());
    assert_eq!(run_args(["oddpack", "pack-walks", &inst]).code, 0);

    let v = ok_json(&run_args(["oddpack", "gen", "--seed", "3", "--eulerian", "--cap2"]));
    let p = write("e.json", &v.to_string());
    assert_eq!(run_args(["oddpack", "pack-trails", &p]).code, 0);
    assert!(v["edges"].as_array().unwrap().iter().all(|e| e["cap"] == "2"));

    let v = ok_json(&run_args(["oddpack", "gen", "--seed", "5", "--even-caps"]));
    assert!(v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["cap"] == "2" || e["cap"] == "4"));
}

#[test]
fn export_dot_examples() {
    let i3 = fixture("i3.json");
    let plain = run_args(["oddpack", "export-dot", &i3]);
    assert_eq!(plain.code, 0);
    assert!(plain.stdout.starts_with("graph oddpack {"));
    assert!(plain.stdout.contains("\"s\" [shape=box]"));
    assert!(!plain.stdout.contains("color="));

    let (p, b) = split_certificate(&i3);
    let out = run_args(["oddpack", "export-dot", &i3, "--barrier", &b]);
    assert_eq!(out.stdout.matches("style=bold, color=red").count(), 1);
    let out = run_args(["oddpack", "export-dot", &i3, "--packing", &p]);
    assert!(out.stdout.contains("label=\"st (2) [0]\""));
}

#[test]
fn oracle_command() {
    let v = ok_json(&run_args(["oddpack", "oracle", "pack-walks", &fixture("i3.json")]));
    assert_eq!(v["agree"], true);
    let v = ok_json(&run_args([
        "oddpack",
        "oracle",
        "multiflow",
        &fixture("i3.json"),
        "--exhaustive",
    ]));
    assert_eq!(v["value"], "2");
    let out = run_args([
        "oddpack",
        "--budget",
        "vertices=2",
        "oracle",
        "min-barrier",
        &fixture("i3.json"),
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("budget"));
}

#[test]
fn batch_mode() {
    let files = [fixture("i1.json"), fixture("i2.json"), fixture("i3.json")];
    let mut args = vec!["oddpack", "--jobs", "3", "pack-walks"];
    args.extend(files.iter().map(String::as_str));
    let v = ok_json(&run_args(&args));
    let values: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["result"]["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["2", "0", "2"]);

    let missing = scratch("missing.json");
    let out = run_args(["oddpack", "pack-walks", &files[0], missing.to_str().unwrap()]);
    assert_eq!(out.code, 2);
}

#[test]
fn binary_exit_codes_and_output_file() {
    let bin = env!("CARGO_BIN_EXE_oddpack");
    let status = Command::new(bin)
        .args(["pack-walks", &fixture("i1.json")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(String::from_utf8(status.stdout).unwrap().contains("\"value\": \"2\""));
    let status = Command::new(bin)
        .args(["pack-walks", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let status = Command::new(bin).args(["no-such-command"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));

    let out = scratch("out.json");
    let status = Command::new(bin)
        .args(["pack-walks", &fixture("i3.json"), "-o", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(status.stdout.is_empty());
    assert!(Path::new(&out).exists());

    let status = Command::new(bin)
        .env("ODDPACK_ORACLE_BUDGET", "edges=1")
        .args(["oracle", "pack-trails", &fixture("i3.json")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}
