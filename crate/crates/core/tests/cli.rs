use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phases(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phases")).args(args).output().expect("spawn phases")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sub_tip_lobe_is_an_absent_row() {
    let o = phases(&["single", "--n", "1", "--u", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("single,ground,1,0,0,u,1,,,false\n"), "{}", stdout(&o));
}

#[test]
fn single_lobe_values() {
    let o = phases(&["single", "--n", "1", "--u", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("single,ground,1,0,0,u,20,1.11847269288,17.8815273071,true"));
}

#[test]
fn oracle_passes() {
    let o = phases(&["oracle", "--seeds", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("oracle: 20/20 passed\n"));
}

#[test]
fn unknown_figure_and_bad_flags_fail_validation() {
    assert_eq!(phases(&["figure", "fig99"]).status.code(), Some(1));
    assert_eq!(phases(&["single", "--n", "x"]).status.code(), Some(1));
    assert_eq!(phases(&["two", "--u", "3"]).status.code(), Some(1));
    assert_eq!(phases(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "variant = \"cavity\"\noccupations = [[1, 1, 1]]\n[scaled]\nu = 1.0\nwat = 2\n");
    let o = phases(&["cavity", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5") && err.contains("wat"), "{err}");
}

#[test]
fn singular_interaction_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "variant = \"general\"\noccupations = [[1, 1, 1]]\n[scaled]\nu = 20.0\nu_eg = 20.0\nf = 5.0\neps_c = 40.0\n",
    );
    assert_eq!(phases(&["general", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn cavity_run_writes_windows_and_existence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "preset = \"fig7\"\n[axis]\nname = \"u\"\nvalues = [250.0]\n");
    let out = dir.path().join("out");
    let o = phases(&["cavity", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("windows.csv")).unwrap();
    assert!(csv.contains("cavity,ground,1,1,1,u,250,165,240,true"), "{csv}");
    assert!(csv.contains("cavity,excited,1,1,1,u,250,84.0983005625,195.901699437,true"), "{csv}");
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["header"]["schema_version"], "1");
    assert_eq!(summary["body"]["existence"][0]["in_u_at_F"]["roots"], serde_json::json!([25.0, 225.0]));
}

#[test]
fn json_format_round_trips() {
    let o = phases(&["single", "--n", "2", "--u", "30", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["present"], true);
    assert_eq!(v["header"]["kind"], "windows");
}
