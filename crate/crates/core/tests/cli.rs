use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhombus-saw"))
        .args(args)
        .env_remove("RHOMBUS_SAW_THREADS")
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(Result::unwrap).collect()
}

fn column(out: &Output, name: &str) -> usize {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.headers().unwrap().iter().position(|h| h == name).unwrap()
}

#[test]
fn sigma_weights_at_right_angle() {
    let out = run(&["weights", "--theta", "1.5707963", "--family", "sigma", "--sigma", "0.625"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    let inv: f64 = rows[0][column(&out, "inv_u1")].parse().unwrap();
    assert!((inv - 2.448).abs() < 1e-3, "{inv}");
}

#[test]
fn single_parallelogram() {
    let out = run(&["parallelogram", "--theta", "1.0471976", "--T", "2", "--L", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    let r: f64 = rows[0][column(&out, "residual13")].parse().unwrap();
    assert!(r < 1e-10);
}

#[test]
fn empty_series() {
    let out = run(&["series", "--theta", "1.5707963", "--n-max", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][column(&out, "c_tilde")], "1.0");
}

#[test]
fn output_is_reproducible_across_runs_and_thread_counts() {
    let a = run(&["series", "--theta", "pi/3", "--n-max", "7", "--threads", "1"]);
    let b = run(&["series", "--theta", "pi/3", "--n-max", "7", "--threads", "4"]);
    let c = run(&["series", "--theta", "pi/3", "--n-max", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rhombus-saw"))
        .args(["enumerate", "--n-max", "2"])
        .env("RHOMBUS_SAW_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, run(&["enumerate", "--n-max", "2"]).stdout);
}

#[test]
fn json_carries_meta_and_rows() {
    let out = run(&["--format", "json", "honeycomb", "--n-max", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config"]["command"]["honeycomb"]["n_max"], 3);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["rhombic_count"], rows[3]["oracle_count"]);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("rhombus-saw-cli-{}.csv", std::process::id()));
    let out = run(&["yangbaxter", "--alpha", "pi/4", "--s=-0.5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("alpha,s,n,pattern_id,pattern,sum_t1,sum_t2,diff\n"));
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(run(&["weights", "--theta", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--theta", "pie"]).status.code(), Some(2));
    assert_eq!(run(&["series", "--rule", "2,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["parallelogram", "--T", "2"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_one() {
    let out = run(&["verify-local", "--points", "3", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn every_subcommand_passes_with_defaults() {
    for cmd in ["weights --theta 5pi/12", "verify-local", "solve-system", "verify-cr", "strip --T 1,2", "honeycomb --n-max 6", "yangbaxter", "enumerate"] {
        let args: Vec<&str> = cmd.split(' ').collect();
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
