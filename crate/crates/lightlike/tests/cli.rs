use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lightlike"))
        .args(args)
        .current_dir(dir)
        .env_remove("LIGHTLIKE_OUTPUT_DIR")
        .env_remove("LIGHTLIKE_THREADS")
        .output()
        .unwrap()
}

fn config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn invalid_configs_exit_with_code_1_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"family": "torus", "grid": [{"resolution": 3}, {}]}"#, "grid[0].resolution"),
        (r#"{"family": "torus", "fd_step": 1}"#, "fd_step"),
        (r#"{"family": "klein"}"#, "klein"),
        (r#"{"family": "torus", "speed": 2}"#, "speed"),
        ("{\"family\": \"torus\",\n\"n\": }", "line 2"),
        (r#"{"family": "torus", "tolerances": {"conic": 0.1}}"#, "tolerances.conic"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let c = config(&dir, &format!("c{i}.json"), text);
        let out = run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", "run"]);
        assert_eq!(out.status.code(), Some(1), "{text}: {}", stderr(&out));
        assert!(stderr(&out).contains(needle), "{text}: {}", stderr(&out));
    }
    assert!(!dir.path().join("run").exists());
}

#[test]
fn usage_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["analyze"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(1));
    let missing = run(dir.path(), &["analyze", "absent.json"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(stderr(&missing).contains("absent.json"));
    let no_report = run(dir.path(), &["export", ".", "--kind", "mesh"]);
    assert_eq!(no_report.status.code(), Some(3));
}

#[test]
fn failed_fraction_above_threshold_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    // Grid reaching the pole of the polar chart, where the frame degenerates.
    let c = config(
        &dir,
        "pole.json",
        r#"{"family": "ellipsoid", "grid": [{"min": 0, "max": 1, "resolution": 5}, {"resolution": 8}],
            "tolerances": {"failure_fraction": 0}}"#,
    );
    let out = run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", "run"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    // Outputs are still written so the failures can be inspected.
    let report = fs::read_to_string(dir.path().join("run/report.json")).unwrap();
    assert!(report.contains("\"failed\""));
}

#[test]
fn eigenfields_have_one_column_per_parameter_and_root() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("torus", r#"{"family": "torus", "grid": [{"resolution": 6}, {"resolution": 7}]}"#, 2 + 2, 42),
        ("sphere4", r#"{"family": "sphere", "n": 4, "grid": [{"resolution": 5}, {"resolution": 5}, {"resolution": 5}]}"#, 3 + 3, 125),
        ("circle", r#"{"family": "circle", "grid": [{"resolution": 9}]}"#, 1 + 2, 9),
    ];
    for (name, text, columns, rows) in cases {
        let c = config(&dir, &format!("{name}.json"), text);
        let out = run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", name]);
        assert!(out.status.success(), "{name}: {}", stderr(&out));
        let mut reader = csv::Reader::from_path(dir.path().join(name).join("eigenfields.csv")).unwrap();
        assert_eq!(reader.headers().unwrap().len(), columns, "{name}");
        let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(records.len(), rows, "{name}");
        assert!(records.iter().all(|r| r.len() == columns));
    }
}

fn ply_counts(path: &Path) -> (usize, usize) {
    let text = fs::read_to_string(path).unwrap();
    let count = |key: &str| {
        text.lines().find_map(|l| l.strip_prefix(key)).map(|v| v.trim().parse::<usize>().unwrap()).unwrap()
    };
    let body = text.split("end_header\n").nth(1).unwrap().lines().count();
    let (v, f) = (count("element vertex "), count("element face "));
    assert_eq!(body, v + f, "{}", path.display());
    (v, f)
}

#[test]
fn meshes_cover_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        &dir,
        "torus.json",
        r#"{"family": "torus", "grid": [{"resolution": 8}, {"resolution": 6}],
            "outputs": {"meshes": true, "slices": [0.25]}}"#,
    );
    let out = run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", "run"]);
    assert!(out.status.success(), "{}", stderr(&out));
    // Both torus axes are periodic, so every node carries a quad.
    for name in ["focal_1.ply", "focal_2.ply", "slice_0.ply"] {
        assert_eq!(ply_counts(&dir.path().join("run").join(name)), (48, 48), "{name}");
    }
    let c = config(&dir, "ell.json", r#"{"family": "ellipsoid", "grid": [{"resolution": 7}, {"resolution": 6}], "outputs": {"meshes": true}}"#);
    assert!(run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", "ell"]).status.success());
    // Polar axis is open: 6 strips of quads, azimuth wraps.
    assert_eq!(ply_counts(&dir.path().join("ell/focal_1.ply")), (42, 36));
}

#[test]
fn export_regenerates_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        &dir,
        "ell.json",
        r#"{"family": "ellipsoid", "grid": [{"resolution": 9}, {"resolution": 8}], "outputs": {"meshes": true}}"#,
    );
    assert!(run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", "run"]).status.success());
    let run_dir = dir.path().join("run");
    for (kind, file) in [("report", "report.json"), ("eigenfields", "eigenfields.csv"), ("mesh", "focal_2.ply")] {
        let out = run(dir.path(), &["export", "run", "--kind", kind, "--out", "again"]);
        assert!(out.status.success(), "{kind}: {}", stderr(&out));
        assert_eq!(fs::read(run_dir.join(file)).unwrap(), fs::read(dir.path().join("again").join(file)).unwrap(), "{file}");
    }
}

#[test]
fn disabled_outputs_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        &dir,
        "quiet.json",
        r#"{"family": "torus", "grid": [{"resolution": 5}, {"resolution": 5}], "outputs": {"report": false, "eigenfields": false}}"#,
    );
    let out = run(dir.path(), &["analyze", c.to_str().unwrap(), "--out", "run"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("wrote"));
    assert!(!dir.path().join("run").exists());
}

#[test]
fn output_directory_and_threads_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "t.json", r#"{"family": "torus", "grid": [{"resolution": 6}, {"resolution": 6}]}"#);
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let target = dir.path().join(format!("env{threads}"));
        let out = Command::new(env!("CARGO_BIN_EXE_lightlike"))
            .args(["analyze", c.to_str().unwrap()])
            .current_dir(dir.path())
            .env("LIGHTLIKE_OUTPUT_DIR", &target)
            .env("LIGHTLIKE_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        outputs.push(fs::read(target.join("report.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn verify_passes_on_the_torus_and_writes_its_report() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir, "t.json", r#"{"family": "torus", "grid": [{"resolution": 8}, {"resolution": 8}]}"#);
    let out = run(dir.path(), &["verify", c.to_str().unwrap(), "--out", "v"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    for check in ["pfaffian", "structure", "apolarity", "nu_inverse_lambda"] {
        assert!(stdout.lines().any(|l| l.starts_with("ok") && l.contains(check)), "{stdout}");
    }
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("v/verify.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
}

#[test]
fn catalog_lists_every_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["catalog"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for f in lightlike::catalog::CATALOG {
        assert!(text.lines().any(|l| l.starts_with(f.name)), "{}", f.name);
    }
}
