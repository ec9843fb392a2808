//! End-to-end runs of the binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyl-unwrap"));
    cmd.args(args).env_remove("CYL_UNWRAP_OUT");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn angles_reference_rows() {
    let o = run(&["angles", "--reference"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("delta = 35.9277")), "{s}");
    let json_start = s.find('{').unwrap();
    let v: serde_json::Value = serde_json::from_str(&s[json_start..]).unwrap();
    assert!((v["delta"].as_f64().unwrap() - 35.9277).abs() < 5e-5);
}

#[test]
fn level_wing_sigma_row() {
    let o = run(&["angles", "--reference", "--omega", "0"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "sigma = 0.000000"));
}

#[test]
fn tiny_tilt_is_rejected_with_delta_min() {
    let o = run(&["angles", "--reference", "--theta", "0.5", "--omega", "0"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("δ_min"), "{}", stderr(&o));
}

#[test]
fn unknown_flag_prints_usage() {
    let o = run(&["angles", "--reference", "--bogus"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn out_of_range_input_exits_2() {
    let o = run(&["angles", "--reference", "--gamma", "95"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma"));
}

#[test]
fn verify_reference_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--reference", "--out", dir.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("seam_gap_max = "));
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(rep["pass"], true);
}

#[test]
fn verify_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "verify",
            "--reference",
            "--tol-seam",
            "1e-30",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("result: FAIL"));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("not-a-dir");
    fs::write(&file, "").unwrap();
    let o = run(
        &["pattern", "--reference", "--out", file.join("sub").to_str().unwrap()],
        &[],
    );
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn env_var_sets_default_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["pattern", "--reference", "--formats", "svg,dxf"],
        &[("CYL_UNWRAP_OUT", dir.path())],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("pattern.svg").is_file());
    assert!(dir.path().join("pattern.dxf").is_file());
    assert!(!dir.path().join("pattern.json").exists());
}

#[test]
fn config_file_drives_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("design.toml");
    fs::write(
        &cfg,
        "r = 1778.0          # mm\ntheta = 30.0        # deg\nomega = 10.0        # deg\ngamma = 55.0\n\
         arc_angle = 71.448\nflat_top = 900.0\nX = 2822.885\nI = 1856.4\nmesh_format = \"stl\"\n",
    )
    .unwrap();
    let o = run(
        &[
            "form",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stl = fs::read(dir.path().join("model.stl")).unwrap();
    let n = u32::from_le_bytes(stl[80..84].try_into().unwrap()) as usize;
    assert_eq!(stl.len(), 84 + 50 * n);
}

#[test]
fn overlapping_blank_is_strict_for_pattern_and_lenient_for_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let p = run(&["pattern", "--reference", "--theta", "10", "--out", out], &[]);
    assert_eq!(p.status.code(), Some(2));
    assert!(stderr(&p).contains("self-intersects"));
    let f = run(&["verify", "--reference", "--theta", "10", "--out", out], &[]);
    assert_eq!(f.status.code(), Some(0));
    assert!(stderr(&f).contains("warning"));
}

#[test]
fn sweep_without_range_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep", "--reference", "--out", dir.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}
