use std::process::Command;

use serde_json::Value;

fn dirichlet(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dirichlet"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let doc = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout).expect("stdout is one JSON document")
    };
    (
        out.status.code().unwrap(),
        doc,
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn pell_two() {
    let (code, doc, _) = dirichlet(&["pell", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "certified");
    assert_eq!(doc["payload"]["fundamental"]["x"], "3");
    assert_eq!(doc["payload"]["fundamental"]["y"], "2");
}

#[test]
fn lineq_four_one() {
    let (code, doc, _) = dirichlet(&["lineq", "4", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["x"], "0");
    assert_eq!(doc["payload"]["y"], "-1");
}

#[test]
fn pell_square_is_precondition_error() {
    let (code, doc, stderr) = dirichlet(&["pell", "9"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["payload"]["kind"], "square-input");
    assert!(stderr.contains("perfect square"));
}

#[test]
fn identical_argv_gives_identical_stdout() {
    for args in [
        vec!["approx", "sqrt:2", "--N", "1000"],
        vec!["siegel", "--matrix", "1,0,-1;0,1,-1"],
        vec!["zeta3-bound", "--n", "3"],
        vec!["stream", "e", "--count", "6"],
    ] {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_dirichlet"))
                .args(&args)
                .output()
                .unwrap()
                .stdout
        };
        assert_eq!(run(), run(), "{args:?}");
    }
}

#[test]
fn enumeration_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dirichlet"))
        .args(["approx", "e", "--N", "1000"])
        .env("DIRICHLET_ENUM_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["payload"]["kind"], "infeasible-enumeration");
}

#[test]
fn bad_environment_is_precondition_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_dirichlet"))
        .args(["pell", "2"])
        .env("DIRICHLET_MAX_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn matrix_from_file() {
    let dir = std::env::temp_dir().join(format!("dirichlet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("system.txt");
    std::fs::write(&path, "1, 0, -1\n0, 1, -1\n").unwrap();
    let (code, doc, _) = dirichlet(&["siegel", "--matrix", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["solution"]["x"], serde_json::json!(["1", "1", "1"]));
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["approx", "rat:1/3", "--N", "3"],
        &["simul", "sqrt:2,sqrt:3", "--N", "10"],
        &["linform", "sqrt:2,e", "--N", "10"],
        &["multidim", "--matrix", "sqrt:2,e;zeta2,1/3", "--N", "4"],
        &["smallforms", "--matrix", "sqrt:2,e,zeta3", "--N", "8"],
        &["stream", "sqrt:5", "--count", "4"],
        &["pell-powers", "2", "--k", "3"],
        &["witness", "sqrt:2", "--eps", "1/10"],
        &["cantor", "--g", "factorial", "--N", "5"],
        &["cantor", "--g", "geometric:2", "--z", "01", "--N", "4"],
        &["zeta2", "--n", "4"],
        &["zeta3", "--n", "4"],
        &["zeta2-bound", "--n", "5"],
        &["zeta3-bound", "--n", "4"],
        &["lcm-upto", "10"],
    ];
    for args in cases {
        let (code, doc, _) = dirichlet(args);
        assert_eq!(code, 0, "{args:?}: {doc}");
        assert_eq!(doc["status"], "certified", "{args:?}");
    }
    let (code, doc, _) = dirichlet(&["kernel-max", "zeta2-kernel", "--grid", "16"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "report-only");
    assert_eq!(doc["payload"]["below_bound"], true);
}

#[test]
fn pell_powers_payload() {
    let (_, doc, _) = dirichlet(&["pell-powers", "2", "--k", "3"]);
    assert_eq!(doc["payload"]["powers"][2]["x"], "99");
    assert_eq!(doc["payload"]["powers"][2]["y"], "70");
}

#[test]
fn lcm_value() {
    let (_, doc, _) = dirichlet(&["lcm-upto", "10"]);
    assert_eq!(doc["payload"]["lcm"], "2520");
}

#[test]
fn usage_errors() {
    assert_eq!(dirichlet(&["lineq", "2", "4"]).0, 1);
    assert_eq!(dirichlet(&["witness", "rat:1/2", "--eps", "1"]).0, 1);
    assert_eq!(dirichlet(&["siegel", "--matrix", "1,2;3,4"]).0, 1);
    assert_eq!(dirichlet(&["approx", "sqrt:2"]).0, 1);
}
