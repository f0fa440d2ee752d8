//! End-to-end CLI behavior: exit codes, report schema, definition files.

use std::process::Command;

use serde_json::Value;

fn lms() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lms"))
}

fn parse_report(stdout: &[u8]) -> Value {
    serde_json::from_slice(stdout).expect("stdout is a JSON report")
}

#[test]
fn exit_zero_on_passing_check() {
    let out = lms()
        .args(["residual", "--surface", "elliptic-catenoid", "--grid", "51x51"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&out.stdout);
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["subcommand"], "residual");
    for key in ["tool_version", "subcommand", "config", "results", "pass"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn exit_one_on_failed_check_with_report() {
    let out = lms()
        .args(["residual", "--surface", "paraboloid", "--grid", "21x21"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = parse_report(&out.stdout);
    assert_eq!(report["pass"], Value::Bool(false));
    let max_abs = report["results"]["max_abs"].as_f64().unwrap();
    assert!(max_abs >= 4.0);
}

#[test]
fn exit_two_on_usage_error() {
    let out = lms().args(["residual", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = lms().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_three_on_runtime_error() {
    let out = lms()
        .args(["residual", "--surface", "no-such-surface"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());

    // Weierstrass range containing a data pole.
    let out = lms()
        .args([
            "weierstrass",
            "--data",
            "helicoid-timelike-axis",
            "--urange",
            "0:1",
            "--vrange",
            "0.5:1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identity_subcommand_reports_signs() {
    let out = lms()
        .args(["identity", "--id", "spacelike", "--z", "1,0.5", "--ladder", "100,1000,10000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&out.stdout);
    assert_eq!(report["results"]["sign_constant"], Value::from(1));
    assert_eq!(report["results"]["printed_sign_discrepancy"], Value::Bool(false));

    let out = lms()
        .args(["identity", "--id", "timelike", "--z", "0.5,0", "--ladder", "100,1000,10000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "error within tolerance even with the sign flip");
    let report = parse_report(&out.stdout);
    assert_eq!(report["results"]["sign_constant"], Value::from(-1));
    assert_eq!(report["results"]["printed_sign_discrepancy"], Value::Bool(true));
}

#[test]
fn definition_file_surface_loads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bump.surf");
    std::fs::write(
        &path,
        "# test surface\nname = bump\nkind = non-solution\nvars = x,y\nz = (x^2+y^2)/2\ndomain = -2:2:-2:2\n",
    )
    .unwrap();
    let out = lms()
        .args(["locus", "--surface"])
        .arg(&path)
        .args(["--grid", "101x101"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = parse_report(&out.stdout);
    assert_eq!(report["results"]["n_polylines"], Value::from(1));
    assert_eq!(report["config"]["surface"], Value::String(path.display().to_string()));
}

#[test]
fn locus_flags_degenerate_field() {
    // An identically lightlike graph: the degeneracy vanishes everywhere,
    // so the contour is meaningless and the report says so.
    let dir = tempfile::tempdir().unwrap();
    let def = dir.path().join("tilted.surf");
    std::fs::write(&def, "name = tilted\nkind = maximal\nvars = x,y\nz = x\ndomain = -1:1:-1:1\n")
        .unwrap();
    let csv = dir.path().join("locus.csv");
    let out = lms()
        .args(["locus", "--surface"])
        .arg(&def)
        .args(["--grid", "51x51", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&out.stdout);
    assert_eq!(report["results"]["degenerate_field"], Value::Bool(true));
    assert_eq!(report["results"]["n_polylines"], Value::from(0));
    assert!(!csv.exists(), "no CSV for a degenerate field");
}

#[test]
fn gauss_plane_flags_constant_map() {
    let out = lms()
        .args(["gauss", "--surface", "plane", "--grid", "21x21"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "constant Gauss map fails injectivity");
    let report = parse_report(&out.stdout);
    assert_eq!(report["results"]["constant_gauss_map"], Value::Bool(true));
}

#[test]
fn param_override_changes_surface() {
    let out = lms()
        .args([
            "residual",
            "--surface",
            "elliptic-catenoid",
            "--grid",
            "21x21",
            "--param",
            "a=2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&out.stdout);
    assert_eq!(report["config"]["params"]["a"].as_f64(), Some(2.0));
}

#[test]
fn wick_check_passes_for_catenoid() {
    let out = lms()
        .args([
            "wick",
            "--surface",
            "elliptic-catenoid",
            "--direction",
            "to-timelike",
            "--check",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&out.stdout);
    assert!(report["results"]["roundtrip_max"].as_f64().unwrap() < 1e-12);
    assert!(report["results"]["residual_max"].as_f64().unwrap() < 1e-9);
}

#[test]
fn gauss_reports_collisions_on_periodic_patch() {
    let out = lms()
        .args(["gauss", "--surface", "helicoid-timelike-axis-graph", "--grid", "101x101"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "collisions mean the injectivity check fails");
    let report = parse_report(&out.stdout);
    assert!(report["results"]["n_collisions"].as_u64().unwrap() >= 1);
}

#[test]
fn mesh_writes_obj_and_empty_mesh_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.obj");
    let out = lms()
        .args(["mesh", "--surface", "plane", "--grid", "2x2", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);

    // A fully excluded surface produces no mesh and exit code 3.
    let def = dir.path().join("empty.surf");
    std::fs::write(
        &def,
        "name = nowhere\nkind = maximal\nvars = u,v\nz = sqrt(u-10)\ndomain = -2:2:-2:2\n",
    )
    .unwrap();
    let missing = dir.path().join("none.obj");
    let out = lms()
        .args(["mesh", "--surface"])
        .arg(&def)
        .args(["--grid", "5x5", "--out"])
        .arg(&missing)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!missing.exists());
}

#[test]
fn catalog_lists_ids() {
    let out = lms().args(["catalog", "--list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["elliptic-catenoid", "catenoid-2nd-kind", "helicoid-spacelike-axis", "plane"] {
        assert!(text.lines().any(|l| l == id), "missing {id}");
    }
}

#[test]
fn golden_report_bytes() {
    // Diffable golden: any drift in formatting, key order, defaults, or
    // float rendering shows up as a byte difference here.
    let out = lms()
        .args(["residual", "--surface", "plane", "--grid", "3x3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let expected = r#"{
  "config": {
    "domain": [
      -2.0000000000000000e0,
      2.0000000000000000e0,
      -2.0000000000000000e0,
      2.0000000000000000e0
    ],
    "grid": [
      3,
      3
    ],
    "kind": "maximal",
    "params": {
      "c": 0.0000000000000000e0
    },
    "surface": "plane",
    "tol": 1.0000000000000001e-9
  },
  "pass": true,
  "results": {
    "l2": 0.0000000000000000e0,
    "max_abs": 0.0000000000000000e0,
    "mean_abs": 0.0000000000000000e0,
    "n_samples": 9,
    "worst_point": [
      -2.0000000000000000e0,
      -2.0000000000000000e0
    ]
  },
  "subcommand": "residual",
  "tool_version": "0.1.0"
}
"#;
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = lms()
        .args(["residual", "--surface", "plane", "--grid", "11x11", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read(&path).unwrap();
    assert_eq!(out.stdout, file, "stdout and --out are byte-identical");
    // Keys arrive sorted at every level.
    let text = String::from_utf8(file).unwrap();
    let config_pos = text.find("\"config\"").unwrap();
    let pass_pos = text.find("\"pass\"").unwrap();
    let version_pos = text.find("\"tool_version\"").unwrap();
    assert!(config_pos < pass_pos && pass_pos < version_pos);
}
