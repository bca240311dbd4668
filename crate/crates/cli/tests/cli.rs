use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conicfib"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&o.stdout));
    })
}

fn proper(x: &str, y: &str) -> Value {
    json!({"kind": "proper", "coords": [x, y, "1"]})
}

fn config(points: Vec<Value>) -> Value {
    json!({"genus": 2, "q0": ["0", "0", "1"], "points": points})
}

fn special() -> Value {
    config([0, 2, 3, -1, -2, -3, 4].iter().map(|t: &i64| proper(&t.to_string(), &(t * t + 1).to_string())).collect())
}

fn nodal_cubic() -> Value {
    let mut pts: Vec<Value> = [("3", "6"), ("3", "-6"), ("8", "24"), ("8", "-24"), ("-3/4", "-3/8"), ("-3/4", "3/8")]
        .iter()
        .map(|(x, y)| proper(x, y))
        .collect();
    pts.push(json!({"kind": "on_section", "direction": ["1", "1"]}));
    config(pts)
}

#[test]
fn special_configuration_is_rejected_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "special.json", &special());
    let o = run(&["check", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    let cert = stdout_json(&o);
    assert_eq!(cert["verdict"], "AMPLE_NOT_VERY_AMPLE");
    assert_eq!(cert["condition"], "SEVEN_ON_CONIC_MISSING_Q0");
    assert_eq!(cert["pairing"], -1);

    let o = run(&["check", s(&cfg), "--level", "ample"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["verdict"], "AMPLE");
}

#[test]
fn certificates_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    for (name, v) in [("special.json", special()), ("cubic.json", nodal_cubic())] {
        let cfg = write(&dir, name, &v);
        let cert = dir.path().join(format!("{name}.cert"));
        let o = run(&["check", s(&cfg), "-o", s(&cert)]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(1));
        let o = run(&["verify", s(&cfg), s(&cert)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["sound"], true);
    }

    // a certificate checked against the wrong configuration
    let special_cert = dir.path().join("special.json.cert");
    let other = write(&dir, "other.json", &config(vec![proper("1", "3"), proper("-2", "5")]));
    let o = run(&["verify", s(&other), s(&special_cert)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["sound"], false);
}

#[test]
fn too_many_points_for_the_characterization() {
    let dir = TempDir::new().unwrap();
    let pts = [("1", "3"), ("-2", "5"), ("4", "-1"), ("3", "7"), ("-5", "-2"), ("6", "1"), ("2", "-9"), ("-7", "4"), ("9", "2")];
    let cfg = write(&dir, "nine.json", &config(pts.iter().map(|(x, y)| proper(x, y)).collect()));
    let o = run(&["check", s(&cfg), "--level", "ample"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["verdict"], "UNDECIDED");
    let o = run(&["check", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["verdict"], "NOT_VERY_AMPLE");
}

#[test]
fn malformed_input_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let float = write(&dir, "float.json", &json!({"genus": 2, "q0": ["0", "0", "1"], "points": [{"kind": "proper", "coords": [0.5, "1", "1"]}]}));
    let o = run(&["check", s(&float)]);
    assert_eq!(o.status.code(), Some(65));
    assert!(!o.stderr.is_empty());

    let same_fiber = write(&dir, "fiber.json", &config(vec![proper("1", "1"), proper("2", "2")]));
    assert_eq!(run(&["check", s(&same_fiber)]).status.code(), Some(65));

    let bad = dir.path().join("garbage.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(run(&["lines", s(&bad)]).status.code(), Some(65));
    assert_eq!(run(&["check", "/nonexistent/config.json"]).status.code(), Some(65));
    assert_eq!(run(&["random", "--mu", "12"]).status.code(), Some(65));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["check"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn random_and_check_are_deterministic() {
    let a = run(&["--seed", "9", "random", "--mu", "7", "--t", "1"]);
    let b = run(&["--seed", "9", "random", "--mu", "7", "--t", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let cfg = stdout_json(&a);
    assert_eq!(cfg["points"].as_array().unwrap().len(), 7);

    let dir = TempDir::new().unwrap();
    let p = write(&dir, "r.json", &cfg);
    let x = run(&["check", s(&p)]);
    let y = run(&["check", s(&p)]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn lines_and_inflection_on_the_nodal_cubic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cubic.json", &nodal_cubic());
    let o = run(&["lines", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    let lines = stdout_json(&o);
    let ids: Vec<&str> = lines.as_array().unwrap().iter().map(|l| l["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"S") && ids.contains(&"T1") && ids.contains(&"E1") && ids.contains(&"F7"));
    assert_eq!(ids.len(), 16);

    let o = run(&["inflect", s(&cfg), "--line", "S"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["report"]["contained"], false);
    assert_eq!(r["report"]["generic_rank"], 5);

    assert_eq!(run(&["inflect", s(&cfg), "--line", "T9"]).status.code(), Some(65));
}

#[test]
fn elm_steps_and_normalization() {
    let dir = TempDir::new().unwrap();
    let datum = write(&dir, "d.json", &json!({"e": 0, "mu": 3, "on_section": [true, false, true]}));
    let o = run(&["elm", s(&datum), "--normalize"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["datum"]["e"], 1);

    let o = run(&["elm", s(&datum), "--center", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 5);

    assert_eq!(run(&["elm", s(&datum), "--center", "0"]).status.code(), Some(65));
    assert_eq!(run(&["elm", s(&datum)]).status.code(), Some(64));
}

#[test]
fn classify_and_bese() {
    let o = run(&["classify", "--genus", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["minimal"].as_array().unwrap().len(), 3);
    assert_eq!(v["blown_up"][7]["d"], 5);
    let text = run(&["classify", "--text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("bounds on mu"));

    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "special.json", &special());
    let o = run(&["bese", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["agreement"], "BESE_PASS_CHARACTERIZATION_REJECT");
}
