//! End-to-end tests of the `kan` binary: exit-code contract, JSON output
//! shapes, file targets, and bit-exact serialization round-trips.

use std::process::{Command, Output};

fn kan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn build_kan_emits_the_table() {
    let out = kan(&["build", "kan", "--n", "3", "--field", "q"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 16);
    assert_eq!(v["unit"], 0);
    assert_eq!(v["labels"][0], "1");
}

#[test]
fn build_valpha_emits_the_action() {
    let out = kan(&[
        "build", "valpha", "--n", "2", "--alpha", "1", "--parity", "0",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["dimV"], 8);
    assert_eq!(v["algebra_ref"]["dim"], 8);
}

#[test]
fn invalid_params_exit_2() {
    assert_eq!(kan(&["build", "kan", "--n", "1"]).status.code(), Some(2));
    assert_eq!(
        kan(&["build", "kan", "--n", "2", "--field", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kan(&["build", "kan", "--n", "2", "--field", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_jordan_passes_on_kan() {
    let out = kan(&["check", "jordan", "--kan", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["status"], "pass");
}

#[test]
fn check_jordan_fails_on_a_corrupted_file() {
    let dir = std::env::temp_dir().join("kan-cli-test-corrupt");
    std::fs::create_dir_all(&dir).unwrap();
    let out = kan(&["build", "kan", "--n", "2"]);
    assert!(out.status.success());
    let mut v = stdout_json(&out);
    // flip the sign of a structure constant away from the unit row
    let products = v["products"].as_array_mut().unwrap();
    let entry = products
        .iter_mut()
        .find(|p| p[0] == 1 && p[1] == 2)
        .expect("product (1,2) present");
    let coeff = entry[2][0][1].as_str().unwrap().to_string();
    entry[2][0][1] = serde_json::Value::String(if let Some(s) = coeff.strip_prefix('-') {
        s.to_string()
    } else {
        format!("-{coeff}")
    });
    let path = dir.join("corrupted.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = kan(&["check", "jordan", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "fail");
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn check_kantor_and_lemmas_suites() {
    assert!(kan(&["check", "kantor", "--kan", "2"]).status.success());
    assert!(kan(&["check", "kantor", "--tensor", "n=2,alpha=1,trunc=2"])
        .status
        .success());
    assert!(
        kan(&["check", "lemmas", "--valpha", "n=2,alpha=2,parity=0"])
            .status
            .success()
    );
    assert!(kan(&["check", "bimodule", "--regular", "2"])
        .status
        .success());
}

#[test]
fn classify_round_trip_and_regular() {
    let out = kan(&["classify", "--valpha", "n=2,alpha=2,parity=0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["parity"], 0);
    assert_eq!(v["alpha"], "2");

    let out = kan(&["classify", "--regular", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["alpha"], "0");
}

#[test]
fn classify_rejects_a_reducible_module_with_a_certificate() {
    // build a reducible action file: the block sum of a module with itself
    let dir = std::env::temp_dir().join("kan-cli-test-reducible");
    std::fs::create_dir_all(&dir).unwrap();
    let out = kan(&[
        "build", "valpha", "--n", "2", "--alpha", "1", "--parity", "0",
    ]);
    let v = stdout_json(&out);
    let dim = v["dimV"].as_u64().unwrap() as usize;
    let mut sum = v.clone();
    sum["dimV"] = serde_json::json!(2 * dim);
    let par: Vec<u64> = v["vparities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    sum["vparities"] = serde_json::json!([par.clone(), par].concat());
    let labels: Vec<String> = v["vlabels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    let mut all_labels: Vec<String> = labels.iter().map(|l| format!("L.{l}")).collect();
    all_labels.extend(labels.iter().map(|l| format!("R.{l}")));
    sum["vlabels"] = serde_json::json!(all_labels);
    let mut r = Vec::new();
    for block in v["R"].as_array().unwrap() {
        let a = block[0].as_u64().unwrap();
        let mut entries = Vec::new();
        for e in block[1].as_array().unwrap() {
            let (i, j, c) = (
                e[0].as_u64().unwrap() as usize,
                e[1].as_u64().unwrap() as usize,
                e[2].as_str().unwrap(),
            );
            entries.push(serde_json::json!([i, j, c]));
            entries.push(serde_json::json!([i + dim, j + dim, c]));
        }
        r.push(serde_json::json!([a, entries]));
    }
    sum["R"] = serde_json::json!(r);
    let path = dir.join("reducible.json");
    std::fs::write(&path, serde_json::to_string(&sum).unwrap()).unwrap();

    let out = kan(&["classify", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let cert = stdout_json(&out);
    assert_eq!(cert["type"], "reducible");
    assert!(!cert["subspace_basis"].as_array().unwrap().is_empty());
}

#[test]
fn iso_exit_codes() {
    assert!(kan(&[
        "iso",
        "--left",
        "valpha:n=2,alpha=0,parity=0",
        "--right",
        "regular:2"
    ])
    .status
    .success());
    assert_eq!(
        kan(&[
            "iso",
            "--left",
            "valpha:n=2,alpha=1,parity=0",
            "--right",
            "valpha:n=2,alpha=1,parity=1"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn special_reports_the_annihilator_line() {
    let out = kan(&["special", "--valpha", "n=2,alpha=1,parity=0"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["dim"], 1);
}

#[test]
fn json_round_trips_bit_exactly() {
    let dir = std::env::temp_dir().join("kan-cli-test-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    for args in [
        vec!["build", "kan", "--n", "2"],
        vec!["build", "kan", "--n", "2", "--field", "5"],
        vec![
            "build", "valpha", "--n", "2", "--alpha", "1/2", "--parity", "1",
        ],
        vec![
            "build", "valpha", "--n", "2", "--alpha", "al", "--parity", "0",
        ],
        vec![
            "build", "tensor", "--n", "2", "--alpha", "-1", "--trunc", "3",
        ],
    ] {
        let out = kan(&args);
        assert!(out.status.success(), "{args:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        let reparsed = if args[1] == "valpha" {
            kanalg_roundtrip_action(&text)
        } else {
            kanalg_roundtrip_table(&text)
        };
        assert_eq!(reparsed.trim(), text.trim(), "{args:?}");
    }
}

fn kanalg_roundtrip_table(text: &str) -> String {
    kanalg::superalg::StructureTable::from_json(text)
        .unwrap()
        .to_json()
}

fn kanalg_roundtrip_action(text: &str) -> String {
    kanalg::bimodule::BimoduleAction::from_json(text)
        .unwrap()
        .to_json()
}

#[test]
fn threads_flag_gives_identical_output() {
    let a = kan(&["check", "jordan", "--kan", "2", "--threads", "1"]);
    let b = kan(&["check", "jordan", "--kan", "2", "--threads", "2"]);
    assert!(a.status.success() && b.status.success());
    let (mut va, mut vb) = (stdout_json(&a), stdout_json(&b));
    // timing differs by nature; everything else must be identical
    va["timing_ms"] = serde_json::json!(0);
    vb["timing_ms"] = serde_json::json!(0);
    assert_eq!(va, vb);
}
