use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_troplam"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("TROPLAM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("troplam-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, v: &Value) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn torus() -> Value {
    stdout_json(&run(&["surface", "--genus", "1", "--punctures", "1"]))
}

fn measure(values: &[&str]) -> Value {
    let map: serde_json::Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    json!({ "edges": map })
}

#[test]
fn check_tt_on_torus_curve() {
    let s = Scratch::new("check");
    let b = s.write(
        "b.json",
        &json!({ "triangulation": torus(), "measure": measure(&["0", "1", "1"]) }),
    );
    let out = run(&["check", "--input", &b, "--conditions", "tt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"tt":true}"#
    );

    let b = s.write(
        "c.json",
        &json!({ "triangulation": torus(), "measure": measure(&["2", "1", "3"]) }),
    );
    let out = run(&["check", "--input", &b, "--conditions", "tt,tf"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out), json!({ "tt": false, "tf": false }));
}

#[test]
fn simplify_torus_and_replay_output() {
    let s = Scratch::new("simplify");
    let b = s.write(
        "b.json",
        &json!({ "triangulation": torus(), "measure": measure(&["2", "1", "3"]) }),
    );
    let out = run(&["simplify", "--input", &b]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["path"]["flips"].as_array().unwrap().len(), 2);
    let mut vals: Vec<&str> = v["measure"]["edges"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_str().unwrap())
        .collect();
    vals.sort();
    assert_eq!(vals, ["0", "1", "1"]);
    assert_eq!(v["tt"], json!(true));

    // the emitted triangulation and measure are accepted as input again
    let again = s.write(
        "again.json",
        &json!({ "triangulation": v["triangulation"], "measure": v["measure"] }),
    );
    let out = run(&["check", "--input", &again, "--conditions", "tt"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn flip_round_trip_through_files() {
    let s = Scratch::new("flip");
    let b = s.write(
        "b.json",
        &json!({ "triangulation": torus(), "measure": measure(&["2", "1", "3"]), "lambda": { "edges": { "0": 1.0, "1": 1.0, "2": 1.5 } } }),
    );
    let once = stdout_json(&run(&["flip", "--input", &b, "--edge", "2"]));
    let key = once["edge"].as_u64().unwrap().to_string();
    let mut bundle = once.clone();
    bundle.as_object_mut().unwrap().remove("edge");
    let b2 = s.write("b2.json", &bundle);
    let twice = stdout_json(&run(&["flip", "--input", &b2, "--edge", &key]));
    let vals = |v: &Value| {
        let mut x: Vec<String> = v["measure"]["edges"]
            .as_object()
            .unwrap()
            .values()
            .map(|x| x.to_string())
            .collect();
        x.sort();
        x
    };
    assert_eq!(
        vals(&twice),
        vals(&json!({ "measure": measure(&["2", "1", "3"]) }))
    );
    let lam: Vec<f64> = twice["lambda"]["edges"]
        .as_object()
        .unwrap()
        .values()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(lam.iter().any(|x| (x - 1.5).abs() < 1e-12));
}

#[test]
fn cyclic_square() {
    let out = run(&["cyclic", "--sides", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["R"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((v["diagonals"][0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r#""R":0.70710678118654757"#), "{text}");
    assert_eq!(
        run(&["cyclic", "--sides", "5,1,1,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(&[
        "oracle",
        "random",
        "--seed",
        "7",
        "--trials",
        "200",
        "--decompose-every",
        "50",
    ]);
    let b = run(&[
        "oracle",
        "random",
        "--seed",
        "7",
        "--trials",
        "200",
        "--decompose-every",
        "50",
        "--jobs",
        "2",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_environment_overrides_flag() {
    let with_env = bin()
        .args([
            "oracle",
            "random",
            "--seed",
            "1",
            "--trials",
            "20",
            "--decompose-every",
            "0",
        ])
        .env("TROPLAM_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&with_env)["seed"], json!(9));
    let bad = bin()
        .args(["oracle", "random", "--trials", "1"])
        .env("TROPLAM_SEED", "nine")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn oracle_polygon_pentagon() {
    let out = run(&["oracle", "polygon", "--n", "5", "--bands", "7,8,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["entries"].as_array().unwrap().len(), 5);
    assert_eq!(v["min_total"], json!("44"));
    assert_eq!(
        run(&[
            "oracle",
            "polygon",
            "--n",
            "11",
            "--frontier",
            "1,1,1,1,1,1,1,1,1,1,1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn balance_and_degenerate_pentagon() {
    let s = Scratch::new("balance");
    // fan from vertex A: triangles ABC, ACD, ADE
    let tri = json!({ "mode": "polygon", "triangle_count": 3, "gluing": [[2, 3], [5, 6]] });
    let t = s.write("t.json", &tri);
    // frontier sides by key
    let m = s.write(
        "m.json",
        &json!({ "edges": { "0": "3", "1": "3", "4": "1", "7": "2", "8": "2" } }),
    );
    let out = run(&["balance", "--tri", &t, "--measure", &m]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    let full = s.write("full.json", &v);
    let out = run(&[
        "check",
        "--input",
        &full,
        "--conditions",
        "tt,tgt,cgt,balanced",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["degenerate", "--input", &full, "--t", "1e8", "--icd"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let d = stdout_json(&out);
    for (k, x) in d["exponents"].as_object().unwrap() {
        let target: f64 = v["measure"]["edges"][k].as_str().unwrap().parse().unwrap();
        assert!((x.as_f64().unwrap() - target).abs() < 0.1, "edge {k}");
    }
}

#[test]
fn invalid_inputs_exit_two() {
    let s = Scratch::new("invalid");
    let bad = s.write(
        "bad.json",
        &json!({ "mode": "closed", "triangle_count": 1, "gluing": [[0, 0]] }),
    );
    assert_eq!(
        run(&["check", "--tri", &bad, "--conditions", "tt"])
            .status
            .code(),
        Some(2)
    );
    let b = s.write(
        "b.json",
        &json!({ "triangulation": torus(), "measure": measure(&["1/2", "x", "1"]) }),
    );
    assert_eq!(
        run(&["check", "--input", &b, "--conditions", "tt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["check", "--conditions", "tt"]).status.code(), Some(2));
    assert_eq!(run(&["flip", "--edge", "0"]).status.code(), Some(2));
    assert_eq!(run(&["simplify", "--bogus"]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let s = Scratch::new("cap");
    let t = stdout_json(&run(&["surface", "--genus", "2", "--punctures", "4"]));
    // edge keys are the smaller side of each glued pair
    let zeros: serde_json::Map<String, Value> = t["gluing"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let k = p[0].as_u64().unwrap().min(p[1].as_u64().unwrap());
            (k.to_string(), json!("0"))
        })
        .collect();
    assert_eq!(zeros.len(), 18);
    let b = s.write(
        "b.json",
        &json!({ "triangulation": t, "measure": { "edges": zeros } }),
    );
    let out = run(&["simplify", "--input", &b, "--class-cap", "50"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn find_tt_unreachable_exits_four() {
    let s = Scratch::new("findtt");
    // pentagon BE, CE: triangles ABE, BCE, CDE
    let tri = json!({ "mode": "polygon", "triangle_count": 3, "gluing": [[1, 5], [4, 8]] });
    let t = s.write("t.json", &tri);
    // EA=0 AB=7 BC=15 CD=10 DE=2 BE=7 CE=8 by key
    let m = s.write("m.json", &json!({ "edges": { "0": "7", "1": "7", "2": "0", "3": "15", "4": "8", "6": "10", "7": "2" } }));
    let out = run(&["find-tt", "--tri", &t, "--measure", &m]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TT not achievable"));
}
