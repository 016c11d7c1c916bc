//! Runs every worked example in `docs/corpus/cases.json` through the binary
//! and compares the listed JSON pointers and the exit status.

use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/corpus")
}

#[test]
fn worked_examples_match_their_recorded_results() {
    let dir = corpus_dir();
    let cases: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(dir.join("cases.json")).unwrap()).unwrap();
    assert!(cases.len() >= 30, "corpus shrank to {} cases", cases.len());
    let mut failures = Vec::new();
    for case in &cases {
        let about = case["about"].as_str().unwrap();
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let out = Command::new(env!("CARGO_BIN_EXE_cwb")).args(&args).current_dir(&dir).output().unwrap();
        let code = out.status.code().unwrap();
        let want = case["exit"].as_i64().unwrap() as i32;
        if code != want {
            failures.push(format!("{about}: exit {code}, expected {want}; stderr {}", String::from_utf8_lossy(&out.stderr)));
            continue;
        }
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["schema"], 1, "{about}: missing schema field");
        for (pointer, expected) in case["expect"].as_object().unwrap() {
            match doc.pointer(pointer) {
                Some(got) if got == expected => {}
                got => failures.push(format!("{about}: {pointer} is {got:?}, expected {expected}")),
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_fixture_is_used_by_some_case() {
    let dir = corpus_dir();
    let manifest = std::fs::read_to_string(dir.join("cases.json")).unwrap();
    for sub in ["creatures", "conditions", "qhn"] {
        for entry in std::fs::read_dir(dir.join(sub)).unwrap() {
            let name = format!("{sub}/{}", entry.unwrap().file_name().to_string_lossy());
            assert!(manifest.contains(&format!("\"{name}\"")), "{name} is not referenced by any case");
        }
    }
}
