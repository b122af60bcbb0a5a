//! End-to-end tests driving the compiled binary: file round trips,
//! numeric results through the JSON surface, exit codes, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finspan"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).expect("test file written");
    path
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "expected success, got {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn density_of(path: &Path) -> (u64, Vec<f64>) {
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).expect("output file exists"))
            .expect("output file parses");
    let space = parsed["space"].as_u64().expect("space field");
    let density = parsed["density"]
        .as_array()
        .expect("density field")
        .iter()
        .map(|v| v.as_f64().expect("numeric entry"))
        .collect();
    (space, density)
}

fn dense_2x2(dir: &Path) -> PathBuf {
    write(dir, "dense.json", r#"{"kind":"dense","n_i":2,"n_o":2}"#)
}

const X_12: &str = r#"{"space":2,"values":[1.0,2.0]}"#;
const W_COUNTING: &str = r#"{"space":4,"values":[1.0,2.0,3.0,4.0]}"#;

#[test]
fn make_elaborates_dense_and_reports_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let out = dir.path().join("raw.json");
    let result = run(
        &[
            "make",
            spec.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    let stdout = stdout_of(&result);
    assert_eq!(stdout, "E\t4\nX\t2\nY\t2\nW\t4\n");

    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["kind"], "raw");
    assert_eq!(parsed["s"], serde_json::json!([0, 0, 1, 1]));
    assert_eq!(parsed["t"], serde_json::json!([0, 1, 0, 1]));
    assert_eq!(parsed["pi"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn make_round_trips_raw_files_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    stdout_of(&run(
        &[
            "make",
            spec.to_str().unwrap(),
            "--out",
            first.to_str().unwrap(),
        ],
        dir.path(),
    ));
    stdout_of(&run(
        &[
            "make",
            first.to_str().unwrap(),
            "--out",
            second.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(
        fs::read(&first).unwrap(),
        fs::read(&second).unwrap(),
        "re-emitting a raw file must reproduce it exactly"
    );
}

#[test]
fn make_reports_conv_output_shape() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "conv.json",
        r#"{"kind":"conv","n_i":1,"n_o":1,"S_i":[5],"F":[3],"stride":[1],"dilation":[1]}"#,
    );
    let out = dir.path().join("raw.json");
    let result = run(
        &[
            "make",
            spec.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    let stdout = stdout_of(&result);
    assert!(stdout.contains("E\t9\n"), "stdout: {}", stdout);
    assert!(stdout.contains("Y\t3\n"), "stdout: {}", stdout);
    assert!(stdout.ends_with("S_o\t3\n"), "stdout: {}", stdout);
}

#[test]
fn forward_computes_the_matrix_product() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let x = write(dir.path(), "x.json", X_12);
    let w = write(dir.path(), "w.json", W_COUNTING);
    let out = dir.path().join("out.json");
    stdout_of(&run(
        &[
            "forward",
            spec.to_str().unwrap(),
            "--x",
            x.to_str().unwrap(),
            "--w",
            w.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(density_of(&out), (2, vec![7.0, 10.0]));
}

#[test]
fn backward_modes_compute_the_three_gradients() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let x = write(dir.path(), "x.json", X_12);
    let w = write(dir.path(), "w.json", W_COUNTING);
    let y_ones = write(dir.path(), "y1.json", r#"{"space":2,"values":[1.0,1.0]}"#);
    let y_pick = write(dir.path(), "y2.json", r#"{"space":2,"values":[1.0,0.0]}"#);
    let y_34 = write(dir.path(), "y3.json", r#"{"space":2,"values":[3.0,4.0]}"#);
    let w_ones = write(
        dir.path(),
        "w1.json",
        r#"{"space":4,"values":[1.0,1.0,1.0,1.0]}"#,
    );
    let out = dir.path().join("out.json");

    stdout_of(&run(
        &[
            "backward",
            spec.to_str().unwrap(),
            "--wrt",
            "input",
            "--y",
            y_ones.to_str().unwrap(),
            "--w",
            w.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(density_of(&out), (2, vec![3.0, 7.0]));

    stdout_of(&run(
        &[
            "backward",
            spec.to_str().unwrap(),
            "--wrt",
            "weights",
            "--x",
            x.to_str().unwrap(),
            "--y",
            y_pick.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(density_of(&out), (4, vec![1.0, 0.0, 2.0, 0.0]));

    stdout_of(&run(
        &[
            "backward",
            spec.to_str().unwrap(),
            "--wrt",
            "measure",
            "--x",
            x.to_str().unwrap(),
            "--y",
            y_34.to_str().unwrap(),
            "--w",
            w_ones.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    ));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["space"], 4);
    assert_eq!(parsed["values"], serde_json::json!([3.0, 4.0, 6.0, 8.0]));
}

#[test]
fn missing_required_flag_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let y = write(dir.path(), "y.json", r#"{"space":2,"values":[1.0,1.0]}"#);
    let result = run(
        &[
            "backward",
            spec.to_str().unwrap(),
            "--wrt",
            "input",
            "--y",
            y.to_str().unwrap(),
            "--out",
            "unused.json",
        ],
        dir.path(),
    );
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("--w"), "stderr: {}", stderr);
}

#[test]
fn mismatched_tensor_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let x = write(
        dir.path(),
        "x.json",
        r#"{"space":3,"values":[1.0,2.0,3.0]}"#,
    );
    let w = write(dir.path(), "w.json", W_COUNTING);
    let result = run(
        &[
            "forward",
            spec.to_str().unwrap(),
            "--x",
            x.to_str().unwrap(),
            "--w",
            w.to_str().unwrap(),
            "--out",
            "unused.json",
        ],
        dir.path(),
    );
    assert_eq!(result.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("source"), "stderr: {}", stderr);
}

#[test]
fn out_of_range_leg_exits_three_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "raw.json",
        r#"{"kind":"raw","E":2,"X":1,"Y":1,"W":1,"s":[0,5],"t":[0,0],"pi":[0,0]}"#,
    );
    let result = run(
        &["make", spec.to_str().unwrap(), "--out", "unused.json"],
        dir.path(),
    );
    assert_eq!(result.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains('s'), "stderr: {}", stderr);
}

#[test]
fn malformed_or_unknown_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{not json");
    let result = run(
        &["make", broken.to_str().unwrap(), "--out", "unused.json"],
        dir.path(),
    );
    assert_eq!(result.status.code(), Some(2));

    let unknown = write(dir.path(), "unknown.json", r#"{"kind":"fancy"}"#);
    let result = run(
        &["make", unknown.to_str().unwrap(), "--out", "unused.json"],
        dir.path(),
    );
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn check_passes_with_defaults_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(&["check"], dir.path());
    let second = run(&["check"], dir.path());
    let stdout = stdout_of(&first);
    assert_eq!(
        stdout,
        stdout_of(&second),
        "same flags must reproduce stdout"
    );
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 7);
    for line in lines {
        assert_eq!(line.split('\t').count(), 6, "line: {}", line);
        assert!(line.ends_with("\ttrue\t42"), "line: {}", line);
    }
}

#[test]
fn check_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let result = run(&["check", "--trials", "0"], dir.path());
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn gradcheck_passes_by_default_and_fails_at_zero_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "dense.json",
        r#"{"kind":"dense","n_i":4,"n_o":3}"#,
    );
    let result = run(
        &["gradcheck", spec.to_str().unwrap(), "--trials", "20"],
        dir.path(),
    );
    let stdout = stdout_of(&result);
    let names: Vec<&str> = stdout
        .lines()
        .map(|line| line.split('\t').next().unwrap())
        .collect();
    assert_eq!(names, ["grad_input", "grad_weights", "grad_measure"]);

    let result = run(
        &[
            "gradcheck",
            spec.to_str().unwrap(),
            "--trials",
            "5",
            "--tol",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn bench_prints_six_timing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dense_2x2(dir.path());
    let result = run(
        &["bench", spec.to_str().unwrap(), "--repeat", "1"],
        dir.path(),
    );
    let stdout = stdout_of(&result);
    let rows: Vec<Vec<&str>> = stdout
        .lines()
        .map(|line| line.split('\t').collect())
        .collect();
    assert_eq!(rows.len(), 6);
    let labels: Vec<(&str, &str)> = rows.iter().map(|row| (row[0], row[1])).collect();
    assert_eq!(
        labels,
        [
            ("forward", "naive"),
            ("forward", "indexed"),
            ("backward_input", "naive"),
            ("backward_input", "indexed"),
            ("backward_weights", "naive"),
            ("backward_weights", "indexed"),
        ]
    );
    for row in &rows {
        assert!(row[2].parse::<u128>().is_ok(), "median column: {:?}", row);
    }
}

#[test]
fn graph_density_is_the_default_measure_and_mu_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "graph.json",
        r#"{"kind":"graph","vertices":3,"edges":[[0,0],[1,1],[2,2]],"bins":[0,0,0],"num_bins":1,"density":[2.0,2.0,2.0]}"#,
    );
    let x = write(
        dir.path(),
        "x.json",
        r#"{"space":3,"values":[1.0,2.0,3.0]}"#,
    );
    let w = write(dir.path(), "w.json", r#"{"space":1,"values":[1.0]}"#);
    let out = dir.path().join("out.json");
    stdout_of(&run(
        &[
            "forward",
            spec.to_str().unwrap(),
            "--x",
            x.to_str().unwrap(),
            "--w",
            w.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(density_of(&out), (3, vec![2.0, 4.0, 6.0]));

    let mu = write(
        dir.path(),
        "mu.json",
        r#"{"space":3,"density":[0.0,0.0,0.0]}"#,
    );
    stdout_of(&run(
        &[
            "forward",
            spec.to_str().unwrap(),
            "--x",
            x.to_str().unwrap(),
            "--w",
            w.to_str().unwrap(),
            "--mu",
            mu.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    ));
    assert_eq!(density_of(&out), (3, vec![0.0, 0.0, 0.0]));
}
