use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clairaut"))
}

fn scenario_text(name: &str) -> String {
    std::fs::read_to_string(format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn bundled_scenarios_pass() {
    for name in ["example-i", "example-ii"] {
        let out = bin().args(["check", name, "--samples", "40"]).output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(out.status.code(), Some(0), "{text}");
        assert!(text.contains("overall: pass"));
    }
}

#[test]
fn wrong_exponent_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = scenario_text("example-ii").replace("f = \"ln(sqrt(x1^2 + x2^2))\"", "f = \"x3\"");
    std::fs::write(&path, text).unwrap();
    let out = bin()
        .args(["check", path.to_str().unwrap(), "--samples", "20", "--format", "machine"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["overall"], "fail");
    let bishop = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["reference"] == "bishop-clairaut")
        .unwrap();
    assert_eq!(bishop["verdict"], "FAIL");
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.toml");
    std::fs::write(&path, scenario_text("example-i").replace("[phi]", "[phi]\ncolour = 1")).unwrap();
    let out = bin().args(["check", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));

    let out = bin().args(["check", "/nonexistent/scenario.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn machine_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("r{k}.json"));
        let out = bin()
            .args(["check", "example-ii", "--samples", "25", "--seed", "9", "--format", "machine", "--report"])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let doc: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["samples"], 25);
}

#[test]
fn geodesic_invariant_column_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = bin()
        .args(["geodesic", "example-ii", "--p0", "1,0,0,0", "--v0", "0,1,0,0", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.len(), 11);
    assert_eq!(&headers[10], "invariant");
    let mut rows = 0;
    for rec in rdr.records() {
        let c: f64 = rec.unwrap()[10].parse().unwrap();
        assert!((c - 1.0).abs() < 1e-6);
        rows += 1;
    }
    assert_eq!(rows, 2001);
}

#[test]
fn horizontal_geodesic_has_zero_sin_theta() {
    let out = bin()
        .args(["geodesic", "example-ii", "--p0", "1,0,0,0", "--v0", "1,0,0.5,0", "--length", "0.5", "--step", "0.01"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    for rec in rdr.records() {
        let s: f64 = rec.unwrap()[9].parse().unwrap();
        assert_eq!(s, 0.0);
    }
}

#[test]
fn start_on_excluded_axis_is_rejected() {
    let out = bin()
        .args(["geodesic", "example-ii", "--p0", "0,0,1,0", "--v0", "1,0,0,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn presets_lists_catalog() {
    let out = bin().arg("presets").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["euclidean-r4", "conformal-r2", "canonical-phi", "twisted-phi", "map-example-i", "map-example-ii"] {
        assert!(text.contains(name), "{name}");
    }
}
