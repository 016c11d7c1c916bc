use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwb")).args(args).output().unwrap()
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn error_code(out: &Output) -> String {
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    err["error"]["code"].as_str().unwrap().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cwb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn corpus(path: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/corpus").join(path).to_string_lossy().into_owned()
}

fn without_timing(mut v: Value) -> Value {
    for r in v["reports"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn generation_is_byte_deterministic() {
    for kind in ["creature", "cond", "qcond"] {
        let a = cwb(&["--seed", "1", "gen", kind, "--count", "5"]);
        let b = cwb(&["--seed", "1", "gen", kind, "--count", "5"]);
        let c = cwb(&["--seed", "2", "gen", kind, "--count", "5"]);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{kind}");
        assert_ne!(a.stdout, c.stdout, "{kind}");
    }
}

#[test]
fn generated_strict_conditions_validate() {
    let out = cwb(&["--strict", "gen", "qcond", "--seq", "5,5;1601,1601", "--window", "14", "--count", "8", "--sigmas-min", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let instances = doc(&out)["instances"].as_array().unwrap().clone();
    assert_eq!(instances.len(), 8);
    for (i, inst) in instances.iter().enumerate() {
        assert_eq!(inst["seq"], json!([[5, 5], [1601, 1601]]));
        let path = scratch(&format!("strict-{i}.json"));
        std::fs::write(&path, inst.to_string()).unwrap();
        let v = cwb(&["--strict", "qhn", "validate", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "instance {i}: {}", String::from_utf8_lossy(&v.stdout));
    }
}

#[test]
fn generated_conditions_round_trip_through_validation() {
    let out = cwb(&["--seed", "9", "gen", "cond", "--count", "4", "--window", "10"]);
    let path = scratch("conds.json");
    std::fs::write(&path, &out.stdout).unwrap();
    for inst in doc(&out)["instances"].as_array().unwrap() {
        let one = scratch("cond-one.json");
        std::fs::write(&one, inst.to_string()).unwrap();
        let v = cwb(&["cond", "validate", one.to_str().unwrap()]);
        assert_eq!(doc(&v)["valid"], true);
    }
}

#[test]
fn impossible_shape_reports_generation_failure() {
    // Three distinct constraints cannot live on one binary coordinate.
    let out = cwb(&["gen", "creature", "--z-max", "1", "--delta-min", "3", "--delta-max", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "generation-failed");
}

#[test]
fn usage_errors_exit_with_two() {
    let out = cwb(&["suite", "verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "usage");
    assert_eq!(cwb(&["suite", "frobnicate"]).status.code(), Some(2));
    assert_eq!(cwb(&["--strict", "--relaxed", "suite", "list"]).status.code(), Some(2));
    assert_eq!(cwb(&["--budget", "999999999999", "cond", "pos", &corpus("conditions/two-blocks.json")]).status.code(), Some(2));
    let missing = cwb(&["creature", "norm", "/nonexistent/creature.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(error_code(&missing), "io");
    let csv = cwb(&["--format", "csv", "creature", "norm", &corpus("creatures/zero-on-four.json")]);
    assert_eq!(csv.status.code(), Some(2));
}

#[test]
fn malformed_documents_exit_with_two() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"schema": 1, "alphabet": {"orders": [2]}, "z": "oops"}"#).unwrap();
    let out = cwb(&["creature", "norm", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "malformed");
    std::fs::write(&path, r#"{"schema": 2, "alphabet": {"orders": [2]}, "z": [0], "delta": []}"#).unwrap();
    assert_eq!(cwb(&["creature", "norm", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exceeded_budgets_exit_with_three() {
    let out = cwb(&["--budget", "16", "cond", "pos", &corpus("conditions/two-blocks.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_code(&out), "enumeration-too-large");
    let out = cwb(&["--budget", "1000", "qhn", "leq", &corpus("qhn/weak.json"), &corpus("qhn/strong.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invalid_inputs_are_property_failures() {
    let out = cwb(&["cond", "validate", &corpus("conditions/two-blocks.json")]);
    assert_eq!(out.status.code(), Some(0));
    let path = scratch("uncovered.json");
    let mut p: Value = serde_json::from_str(&std::fs::read_to_string(corpus("conditions/two-blocks.json")).unwrap()).unwrap();
    p["window"] = json!([0, 1, 2, 3, 4, 5, 6, 7, 8]);
    std::fs::write(&path, p.to_string()).unwrap();
    let out = cwb(&["cond", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(doc(&out)["error"]["code"], "invalid-condition");
}

#[test]
fn suite_reports_are_deterministic_apart_from_timing() {
    let args = ["--seed", "5", "suite", "verify", "norm-bounds", "witness", "--count", "60"];
    let a = cwb(&args);
    let b = cwb(&args);
    assert_eq!(a.status.code(), Some(0));
    let (a, b) = (doc(&a), doc(&b));
    assert_eq!(a["passed"], true);
    assert_eq!(without_timing(a.clone()), without_timing(b));
    let report = &a["reports"][0];
    assert_eq!(report["config"]["seed"], 5);
    let props: Vec<&str> = report["properties"].as_array().unwrap().iter().map(|t| t["property"].as_str().unwrap()).collect();
    for p in ["restrict-half", "glue", "link"] {
        assert!(props.contains(&p), "{p} missing from {props:?}");
    }
}

#[test]
fn suite_csv_has_one_row_per_property() {
    let out = cwb(&["--format", "csv", "suite", "verify", "axioms", "--count", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,property,passed,failed,skipped"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("axioms,sigma-bot-associative,")));
    assert!(rows.iter().all(|r| r.split(',').nth(3) == Some("0")));
}

#[test]
fn suite_list_names_every_suite() {
    let out = cwb(&["suite", "list"]);
    let names: Vec<String> = doc(&out)["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap().to_string()).collect();
    for n in ["norm-baseline", "axioms", "order-soundness", "qhn-order", "measure", "invariance"] {
        assert!(names.iter().any(|m| m == n), "{n}");
    }
}

/// A norm-bounds instance whose z* is the whole domain, as a faulty
/// generator would produce; the proper-subset property fails on it.
fn faulty_counterexample() -> Value {
    let cfg = cwb(&["suite", "verify", "norm-baseline"]);
    let config = doc(&cfg)["reports"][0]["config"].clone();
    let creature = |z: Vec<u32>| json!({ "z": z, "delta": [z.iter().map(|&c| json!([c, [0]])).collect::<Vec<_>>()] });
    json!({
        "suite": "norm-bounds",
        "property": "proper-subset",
        "index": 0,
        "detail": "z* is not a nonempty proper subset",
        "config": config,
        "instance": {
            "alphabet": { "orders": [2] },
            "t": creature(vec![0, 1, 2]),
            "zstar": [0, 1, 2],
            "glue": [creature(vec![0]), creature(vec![1, 2])],
            "link": [creature(vec![0, 1]), { "z": [0, 1], "delta": [[[0, [1]]]] }],
        },
    })
}

#[test]
fn replay_reproduces_a_recorded_failure() {
    let cx = faulty_counterexample();
    let single = scratch("counterexample.json");
    std::fs::write(&single, cx.to_string()).unwrap();
    let out = cwb(&["suite", "verify", "--replay", single.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let d = doc(&out);
    assert_eq!(d["reproduced"], true);
    assert_eq!(d["replays"][0]["checks"][0]["verdict"], "fail");

    // The same counterexample inside a full `suite verify` document.
    let mut report = doc(&cwb(&["suite", "verify", "norm-bounds", "--count", "3"]));
    report["reports"][0]["counterexamples"] = json!([cx]);
    let wrapped = scratch("report.json");
    std::fs::write(&wrapped, report.to_string()).unwrap();
    let out = cwb(&["suite", "verify", "--replay", wrapped.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(doc(&out)["replays"].as_array().unwrap().len(), 1);
}

#[test]
fn replay_of_a_sound_instance_passes() {
    let mut cx = faulty_counterexample();
    cx["instance"]["zstar"] = json!([0, 1]);
    let path = scratch("sound.json");
    std::fs::write(&path, cx.to_string()).unwrap();
    let out = cwb(&["suite", "verify", "--replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(doc(&out)["reproduced"], false);
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let path = scratch("out.json");
    let direct = cwb(&["measure", &corpus("qhn/one-sigma.json")]);
    let written = cwb(&["measure", &corpus("qhn/one-sigma.json"), "--output", path.to_str().unwrap()]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn amalgamate_reads_generated_instance_files() {
    // Two creatures per input on one shared window; identical inputs always amalgamate.
    let gen = cwb(&["--seed", "3", "gen", "cond", "--count", "1", "--window", "8", "--z-min", "4", "--z-max", "4", "--min-n", "4", "--stem-max", "0"]);
    assert_eq!(gen.status.code(), Some(0), "{}", String::from_utf8_lossy(&gen.stderr));
    let path = scratch("gen-cond.json");
    std::fs::write(&path, &gen.stdout).unwrap();
    let p = path.to_str().unwrap();
    let out = cwb(&["amalgamate", "--mode", "q-infty", p, p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(doc(&out)["verification"]["passed"], true);
}

#[test]
fn move_replays_a_certificate_onto_its_target() {
    let out = cwb(&["cond", "move", &corpus("conditions/two-blocks.json"), &corpus("conditions/glue-certificate.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut glued: Value = serde_json::from_str(&std::fs::read_to_string(corpus("conditions/glued.json")).unwrap()).unwrap();
    let mut q = doc(&out)["q"].clone();
    for d in [&mut glued, &mut q] {
        d.as_object_mut().unwrap().remove("schema");
    }
    assert_eq!(q, glued);
    let alias = cwb(&["cond", "apply", &corpus("conditions/two-blocks.json"), &corpus("conditions/glue-certificate.json")]);
    assert_eq!(alias.stdout, out.stdout);
}
