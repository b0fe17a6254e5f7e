use std::path::Path;
use std::process::Command;

use qpinn::artifacts::Checkpoint;
use qpinn::{parse_config, run_experiment, ARTIFACTS};

fn qpinn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qpinn"))
}

fn quick_args(out: &Path) -> Vec<String> {
    ["--epochs", "50", "--n-points", "16", "--hidden", "8", "--n-eval", "21", "--out"]
        .iter()
        .map(|s| s.to_string())
        .chain([out.to_str().unwrap().to_owned()])
        .collect()
}

#[test]
fn writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let result = qpinn().args(quick_args(&out)).output().unwrap();
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("final loss"));
    assert!(stdout.contains("max abs error"));
    for name in ARTIFACTS {
        let meta = std::fs::metadata(out.join(name)).unwrap_or_else(|_| panic!("missing {name}"));
        assert!(meta.len() > 0, "{name} is empty");
    }
    let solution = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    let first = solution.lines().nth(1).unwrap();
    let cols: Vec<f64> = first.split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols, vec![0.0, 1.0, 1.0, 0.0]);
    assert_eq!(solution.lines().count(), 22);
}

#[test]
fn bad_flags_fail_with_usage() {
    for args in [
        vec!["--epochs", "-5"],
        vec!["--shots", "many"],
        vec!["--no-such-flag"],
        vec!["--mode", "sideways"],
    ] {
        let result = qpinn().args(&args).output().unwrap();
        assert!(!result.status.success(), "{args:?}");
        let stderr = String::from_utf8_lossy(&result.stderr);
        assert!(stderr.contains("error"), "{stderr}");
    }
    let result = qpinn().args(["--histogram-t", "2"]).output().unwrap();
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("histogram_t"));
}

#[test]
fn help_lists_defaults() {
    let result = qpinn().arg("--help").output().unwrap();
    assert!(result.status.success());
    let help = String::from_utf8(result.stdout).unwrap();
    for needle in [
        "--n-points", "--n-eval", "--shots", "--seed", "--epochs", "--lr", "--hidden", "--mode",
        "--histogram-t", "--histogram-shots", "--out", "--config", "[default: 64]", "[default: 5000]",
        "[default: 32,32]",
    ] {
        assert!(help.contains(needle), "help is missing {needle}");
    }
}

#[test]
fn unwritable_output_directory_fails() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let result = qpinn().args(quick_args(&blocker.join("sub"))).output().unwrap();
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("output directory"));
}

#[test]
fn config_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    std::fs::write(
        &cfg_path,
        format!(
            r#"{{"epochs": 7, "n_points": 9, "hidden": [3], "n_eval": 5, "out": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let result = qpinn().args(["--config", cfg_path.to_str().unwrap()]).output().unwrap();
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let loss = std::fs::read_to_string(out.join("loss.csv")).unwrap();
    assert_eq!(loss.lines().count(), 8);
    let features = std::fs::read_to_string(out.join("features.csv")).unwrap();
    assert_eq!(features.lines().count(), 10);
}

#[test]
fn checkpoint_reproduces_solution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut args = vec!["qpinn".to_owned()];
    args.extend(quick_args(&out));
    let summary = run_experiment(&parse_config(args).unwrap()).unwrap();
    let text = std::fs::read_to_string(out.join("checkpoint.json")).unwrap();
    let model = Checkpoint::from_json(&text).unwrap().into_model().unwrap();
    assert_eq!(model, summary.report.model);
    let solution = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    for line in solution.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(model.predict(cols[0]), cols[1]);
    }
}

#[test]
fn sampled_training_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut args = quick_args(&out);
    args.extend(["--shots".to_owned(), "256".to_owned(), "--seed".to_owned(), "4".to_owned()]);
    let result = qpinn().args(&args).output().unwrap();
    assert!(result.status.success());
    let features = std::fs::read_to_string(out.join("features.csv")).unwrap();
    // Sampled rows are multiples of 1/256.
    for line in features.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        for p in &cols[1..5] {
            assert_eq!((p * 256.0).fract(), 0.0);
        }
    }
}
