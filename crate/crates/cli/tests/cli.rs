use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_derivator"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

/// A fresh scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("derivator-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn doc(kind: &str, body: Value) -> Value {
    json!({"version": 1, "kind": kind, "body": body})
}

/// `Y ← X → Z`, all `ℚ` in degree 0.
fn span_doc() -> Value {
    let q = json!({"dims": {"0": 1}});
    doc(
        "chain_diagram",
        json!({
            "shape": {"objects": ["0,0", "1,0", "0,1"], "leq": [["0,0", "1,0"], ["0,0", "0,1"]]},
            "complexes": {"0,0": q, "1,0": q, "0,1": q},
            "maps": {"0,0->1,0": {"0": [[1]]}, "0,0->0,1": {"0": [[2]]}}
        }),
    )
}

/// `ℚ² → ℚ`, projection to the first coordinate, in degree 0.
fn projection_doc() -> Value {
    doc(
        "chain_map",
        json!({"source": {"dims": {"0": 2}}, "target": {"dims": {"0": 1}}, "components": {"0": [[1, 0]]}}),
    )
}

#[test]
fn suite_passes_with_a_json_report() {
    let o = run(&["suite", "triangulation", "--seed", "1", "--trials", "10", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["suite"], "triangulation");
    assert_eq!(r["pass"], true);
    assert_eq!(r["trials"], 10);
    assert!(r["verdicts"].as_array().unwrap().iter().any(|v| v["name"] == "trial 9: rotation compares to -Σf"));
}

#[test]
fn suite_reports_are_byte_stable() {
    let a = run(&["suite", "pointed", "--seed", "4", "--trials", "3", "--json"]);
    let b = run(&["suite", "pointed", "--seed", "4", "--trials", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_writes_its_report() {
    let d = scratch("suite");
    let o = run(&["suite", "additivity", "--trials", "2", "--out", d.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(&d.join("report.json"))["pass"], true);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
}

#[test]
fn suite_over_a_prime_field() {
    let o = run(&["suite", "stable_squares", "--trials", "2", "--field", "fp:7", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["field"], "fp:7");
}

#[test]
fn triangle_writes_complexes_maps_and_witnesses() {
    let d = scratch("triangle");
    let f = write(&d, "f.json", &projection_doc());
    let out = d.join("tri");
    let o = run(&["triangle", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["x", "y", "c"] {
        assert_eq!(read(&out.join(format!("{name}.json")))["kind"], "complex");
    }
    for name in ["f", "g", "h"] {
        assert_eq!(read(&out.join(format!("{name}.json")))["kind"], "chain_map");
    }
    let witnesses: Vec<_> = std::fs::read_dir(out.join("witnesses")).unwrap().collect();
    assert!(witnesses.len() >= 3);
    for w in witnesses {
        assert_eq!(read(&w.unwrap().path())["quasi_iso"], true);
    }
    // The written cone loads back, and the projection's cone is ℚ[1].
    let summary = read(&out.join("summary.json"));
    assert_eq!(summary["triangle"]["homology"]["C"], json!({"1": 1}));
    assert_eq!(summary["triangle"]["long_exact_sequence"]["pass"], true);
}

#[test]
fn status_of_a_pushout_square() {
    let d = scratch("status");
    let span = write(&d, "span.json", &span_doc());
    let push = run(&["shape", "box", "--map", "i_push"]);
    assert_eq!(code(&push), 0);
    let ipush = write(&d, "ipush.json", &stdout_json(&push));
    let sq = d.join("square.json");
    let o = run(&["kan", &span, &ipush, "--side", "left", "--out", sq.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["status", sq.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o), json!({"coCartesian": true, "cartesian": true}));
}

#[test]
fn status_of_maps() {
    let d = scratch("sieve");
    let zero = doc("functor", json!({
        "source": {"objects": ["*"], "leq": []},
        "target": {"objects": ["0", "1"], "leq": [["0", "1"]]},
        "map": {"*": "0"}
    }));
    let o = run(&["status", &write(&d, "zero.json", &zero)]);
    let s = stdout_json(&o);
    assert_eq!((s["sieve"].as_bool(), s["cosieve"].as_bool()), (Some(true), Some(false)));
}

#[test]
fn check_detects_a_non_exact_square() {
    // e --0--> [1] over e = e: the colimit mate is X_0 → X_1.
    let d = scratch("check");
    let e = json!({"objects": ["*"], "leq": []});
    let arrow = json!({"objects": ["0", "1"], "leq": [["0", "1"]]});
    let square = |left: bool| {
        doc("square", json!({
            "u1": {"source": e, "target": e, "map": {"*": "*"}},
            "u2": {"source": arrow, "target": e, "map": {"0": "*", "1": "*"}},
            "v": {"source": e, "target": arrow, "map": {"*": "0"}},
            "w": {"source": e, "target": e, "map": {"*": "*"}},
            "mate": if left { "left" } else { "right" }
        }))
    };
    let sample = doc("vec_diagram", json!({"shape": arrow, "dims": {"0": 1, "1": 0}}));
    let sample = write(&d, "sample.json", &sample);
    let left = write(&d, "left.json", &square(true));
    let o = run(&["check", &left, "--sample", &sample]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["pass"], false);
    assert!(v.get("witness").is_some());
    let right = write(&d, "right.json", &square(false));
    assert_eq!(code(&run(&["check", &right, "--sample", &sample])), 0);
    assert_eq!(code(&run(&["check", &right, "--trials", "4", "--seed", "9"])), 0);
}

#[test]
fn constructions_run() {
    let d = scratch("constructions");
    let f = write(&d, "f.json", &projection_doc());
    let o = run(&["rotate", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["negated"], true);

    let o = run(&["cone", &f]);
    assert_eq!(stdout_json(&o)["homology"], json!({"1": 1}));

    let x = write(&d, "x.json", &doc("complex", json!({"dims": {"0": 1}})));
    let o = run(&["suspension", &x]);
    assert_eq!(stdout_json(&o)["kind"], "complex");
    let o = run(&["biproduct", &x, &x]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["homology"], json!({"0": 2}));

    let g = write(&d, "g.json", &doc("chain_map", json!({
        "source": {"dims": {"0": 1}}, "target": {"dims": {"0": 1}}, "components": {"0": [[3]]}
    })));
    let out = d.join("octa");
    let o = run(&["octahedron", &f, &g, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("triangle4").join("c.json").exists());

    let span = write(&d, "span.json", &span_doc());
    let o = run(&["hocolim", &span]);
    assert_eq!(stdout_json(&o)["kind"], "complex");
}

#[test]
fn shapes_slices_and_commas() {
    let d = scratch("shapes");
    let o = run(&["shape", "chain", "--n", "2"]);
    assert_eq!(stdout_json(&o)["body"]["objects"].as_array().unwrap().len(), 3);
    let id = run(&["shape", "corner_push", "--map", "incl"]);
    let u = write(&d, "incl.json", &stdout_json(&id));
    let o = run(&["slice", &u, "--at", "1,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["poset"]["body"]["objects"].as_array().unwrap().len(), 3);
    let o = run(&["comma", &u, &u]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["pr1"]["kind"], "functor");
}

#[test]
fn kan_of_a_vector_space_diagram() {
    let d = scratch("kan");
    let arrow = json!({"objects": ["0", "1"], "leq": [["0", "1"]]});
    let x = doc("vec_diagram", json!({"shape": arrow, "dims": {"0": 1, "1": 1}, "maps": {"0->1": [[1]]}}));
    let u = doc("functor", json!({"source": arrow, "target": {"objects": ["*"], "leq": []}, "map": {"0": "*", "1": "*"}}));
    let o = run(&["kan", &write(&d, "x.json", &x), &write(&d, "u.json", &u)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["body"]["dims"], json!({"*": 1}));
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "chain_diagram", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&["gen", "chain_diagram", "--seed", "11"]).stdout);
}

#[test]
fn input_errors_exit_with_two() {
    let d = scratch("errors");
    let bad = write(&d, "bad.json", &json!({"version": 99, "kind": "poset", "body": {}}));
    let o = run(&["status", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/version"));
    assert_eq!(code(&run(&["status", "/nonexistent.json"])), 2);
    assert_eq!(code(&run(&["suite", "nosuch"])), 2);
    assert_eq!(code(&run(&["suite", "pointed", "--trials", "0"])), 2);
    assert_eq!(code(&run(&["suite", "pointed", "--field", "fp:4"])), 2);
    assert_eq!(code(&run(&["suite", "pointed", "--field", "reals"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["shape", "chain"])), 2);
    // A chain map where a complex is expected.
    let f = write(&d, "f.json", &projection_doc());
    assert_eq!(code(&run(&["biproduct", &f, &f])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}
