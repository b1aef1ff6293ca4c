use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unimodular")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn escape_odd_trace() {
    let out = run(&["escape", "--form", "2<1>+<-1>", "--start", "0,0,1", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let idx = v["tracked_index"].as_u64().unwrap() as usize;
    let tracked: Vec<i64> = v["steps"].as_array().unwrap().iter().map(|s| s["vector"][idx].as_i64().unwrap()).collect();
    assert_eq!(&tracked[..2], &[3, 17]);
}

#[test]
fn lambda2_names_the_word() {
    let out = run(&["lambda2", "--matrix", "[[-1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,-1]]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["word"], "n1 n2");
    assert_eq!(v["gram_preserved"], true);
}

#[test]
fn planes_carry_family_parameters() {
    let out = run(&["planes", "--form", "2U", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let planes = v["planes"].as_array().unwrap();
    assert_eq!(planes.len(), 32);
    assert!(planes.iter().all(|p| p["family"].is_object()));
}

#[test]
fn classify_examples() {
    let three_u = r#"{"dim":6,"gram":[[0,1,0,0,0,0],[1,0,0,0,0,0],[0,0,0,1,0,0],[0,0,1,0,0,0],[0,0,0,0,0,1],[0,0,0,0,1,0]]}"#;
    let v = json(&run(&["classify", three_u]));
    assert_eq!(v["canonical"]["description"], "3U");
    assert_eq!(v["invariants"]["parity"], "even");

    let v = json(&run(&["classify", "[[1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]"]));
    assert_eq!(v["invariants"]["signature"], -2);
    assert_eq!(v["canonical"]["description"], "<1>+3<-1>");

    let v = json(&run(&["classify", "[[1,0],[0,1]]"]));
    assert!(v["canonical"].is_null());
    assert!(v["note"].as_str().unwrap().contains("does not apply"));
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["classify", "[[1,2],[3,1]]"][..],
        &["classify", "[[1,2],[2,4]]"],
        &["verify-paper", "no-such-target"],
        &["kodaira", "--kw", "0", "--k2", "3"],
        &["escape", "--form", "2<1>+<-1>", "--start", "0,0,0"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_command_is_deterministic() {
    let a = json(&run(&["verify-paper", "def1.1", "--seed", "5"]));
    let b = json(&run(&["verify-paper", "def1.1", "--seed", "5"]));
    assert_eq!(a["status"], "pass");
    assert_eq!(a["checks"], b["checks"]);
    assert_eq!(a["seed"], 5);
    assert!(a["version"].is_string());
    let cells = a["checks"][0]["detail"]["cells"].as_array().unwrap();
    assert_eq!(cells.iter().filter(|c| c["error"].is_string()).count(), 1);
}

#[test]
fn kt_and_cy_table() {
    let v = json(&run(&["kt", "--lambda", "-2", "--phi-T", "1,1,0,1", "--witness", "5"]));
    assert_eq!(v["h2_gram"], serde_json::json!([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]));
    assert_eq!(v["witness"]["images"].as_array().unwrap().len(), 5);
    let v = json(&run(&["cy-table"]));
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["consistent"] == true && r["k_squared"] == 0));
}

#[test]
fn json_indent_pretty_prints() {
    let out = run(&["kodaira", "--kw", "1", "--k2", "1", "--json-indent", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n    \""));
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap()["kodaira_dimension"], "2");
}
