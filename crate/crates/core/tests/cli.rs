use std::process::{Command, Output};

fn polyvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyvol")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn volume_line(text: &str) -> &str {
    text.lines().find(|l| l.starts_with("volume ")).unwrap()
}

#[test]
fn estimate_cube_10() {
    let o = polyvol(&["estimate", "--generate", "cube:10", "--seed", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let v: f64 = volume_line(&text)[7..].parse().unwrap();
    assert!((v - 1024.0).abs() < 0.15 * 1024.0, "{v}");
    for key in ["gamma", "seed 1", "elapsed_ms", "fresh_points"] {
        assert!(text.contains(key), "missing {key}");
    }
    assert!(!text.contains("phase\talpha"));
}

#[test]
fn same_argv_same_volume() {
    let args = ["estimate", "--generate", "rh:5:12:seed=3", "--seed", "8", "--walk", "hypersphere"];
    let (a, b) = (stdout(&polyvol(&args)), stdout(&polyvol(&args)));
    assert_eq!(volume_line(&a), volume_line(&b));
    assert!(a.contains("walk hypersphere"));
}

#[test]
fn generated_file_round_trips_through_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cross3.poly");
    let path = path.to_str().unwrap();
    assert!(polyvol(&["generate", "cross:3", "--output", path]).status.success());
    let from_file = stdout(&polyvol(&["estimate", "--input", path, "--no-reuse"]));
    let from_spec = stdout(&polyvol(&["estimate", "--generate", "cross:3", "--no-reuse"]));
    assert_eq!(volume_line(&from_file), volume_line(&from_spec));
    assert!(from_file.contains("reuse false"));
}

#[test]
fn json_lines_with_ledger_and_oracle() {
    let o = polyvol(&[
        "estimate", "--generate", "cube:3", "--format", "json-lines", "--verbose", "--samples", "100000",
    ]);
    assert!(o.status.success());
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["schema"], 1);
    assert!(rec["ledger"]["t"].is_array());
    assert!((rec["oracle"]["volume"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn step_size_constant() {
    let o = polyvol(&["step-size", "--epsilon", "0.2", "--sigma", "1.96", "--l", "44"]);
    let text = stdout(&o);
    let s: f64 = text.lines().next().unwrap().parse().unwrap();
    assert!((1560.0..=1580.0).contains(&(s / 44.0)));
}

#[test]
fn trials_check_split_and_bench_run() {
    let t = polyvol(&["trials", "--generate", "cube:2", "--trials", "10", "--jobs", "2"]);
    assert!(t.status.success());
    let c = polyvol(&["check-split", "--generate", "cube:3", "--checks", "2", "--trials", "5", "--format", "json-lines"]);
    assert!(c.status.success());
    assert_eq!(stdout(&c).lines().count(), 3);
    let b = polyvol(&["bench-walk", "--generate", "rh:6:12", "--steps", "10000"]);
    assert!(b.status.success());
}

#[test]
fn failures_and_exit_codes() {
    let o = polyvol(&["estimate", "--input", "missing.poly"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[file_not_found]"));
    assert_eq!(polyvol(&["estimate"]).status.code(), Some(2));
    assert_eq!(polyvol(&["estimate", "--input", "a", "--generate", "cube:2"]).status.code(), Some(2));
    let o = polyvol(&["oracle-of-doom"]);
    assert_eq!(o.status.code(), Some(2));
    let o = polyvol(&["estimate", "--generate", "cube:9", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(1));
}
