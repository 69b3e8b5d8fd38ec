use std::process::{Command, Output};

use serde_json::Value;

fn hfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfock")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn moments_csv_has_one_row_per_index() {
    let out = hfock(&["moments", "--nmax", "30", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["n", "eta", "log_eta", "abs_err", "route"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 31);
    let eta0: f64 = rows[0][1].parse().unwrap();
    assert!((eta0 - 0.403_652_637_676_805_9).abs() < 1e-15);
    for (n, r) in rows.iter().enumerate() {
        assert_eq!(r[0].parse::<usize>().unwrap(), n);
    }
}

#[test]
fn json_carries_schema_and_is_deterministic() {
    let a = hfock(&["gram", "--points", "12", "--seed", "3"]);
    let b = hfock(&["gram", "--points", "12", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["psd"], true);
    assert_eq!(v["points"].as_array().unwrap().len(), 12);
    let c = hfock(&["gram", "--points", "12", "--seed", "4"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeta.json");
    let out = hfock(&["lerch", "zeta", "--s", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((v["value"].as_f64().unwrap() - pi2_6).abs() < 1e-12);
}

#[test]
fn complex_arguments() {
    let out = hfock(&["kernel", "--z", "0", "--w", "1-2i", "--normalized"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(v["w"][1], -2.0);

    let out = hfock(&["efun", "--z", "-3,0.5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).lines().nth(1).unwrap().starts_with("-3,0.5,"));
}

#[test]
fn bargmann_grid_is_a_product() {
    let out = hfock(&["bargmann", "--z", "0.5", "--z", "1+i", "--x", "0", "--x", "1", "--x", "-1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1 + 2 * 3);
}

#[test]
fn lerch_phi_and_audit() {
    let v = json(&hfock(&["lerch", "phi", "--order", "1", "--z", "0.5"]));
    let ln2 = std::f64::consts::LN_2;
    assert!((v["rows"][0]["value"][0].as_f64().unwrap() - 2.0 * ln2).abs() < 1e-12);

    let out = hfock(&["lerch", "audit", "--kernel", "eta0-k"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let iii = &v["conditions"][2];
    assert_eq!(iii["status"], "evidence");
    assert_eq!(iii["details"]["signs_consistent"], false);
}

#[test]
fn dbar_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"f": [[1, 0], [0, 1]], "u0": [[0.5, 0]], "samples": [[0.1, 0.2], [-1, 1]]}"#).unwrap();
    let out = hfock(&["dbar", "--problem", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["passed"], true);

    std::fs::write(&path, "{\"f\": 3}").unwrap();
    let out = hfock(&["dbar", "--problem", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let missing = dir.path().join("missing.json");
    assert_eq!(hfock(&["dbar", "--problem", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(hfock(&["moments", "--bogus"]).status.code(), Some(2));
    assert_eq!(hfock(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(hfock(&["lerch", "phi", "--z", "2"]).status.code(), Some(2));
    assert_eq!(hfock(&["efun", "--z", "1+2j"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = hfock(&["verify", "bounds", "--nmax", "170"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let out = hfock(&["verify", "gfs", "--points", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    for c in checks {
        if let Some(g) = c["details"]["max_gap"].as_f64() {
            assert!(g <= 1e-9, "{c}");
        }
    }
}

#[test]
fn verify_all_is_sorted_and_passes() {
    let out = hfock(&["verify", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 9);
}

#[test]
fn corrupted_golden_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.json");
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/golden.json")).unwrap();
    let mut table: serde_json::Map<String, Value> = serde_json::from_str(&text).unwrap();
    for (_, entry) in table.iter_mut().filter(|(k, _)| k.starts_with("eta_")) {
        entry["value"] = Value::String("1.0".into());
    }
    std::fs::write(&path, serde_json::to_string(&table).unwrap()).unwrap();

    let out = hfock(&["verify", "moments", "--golden", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}
