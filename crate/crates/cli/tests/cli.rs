//! Command-line behavior: argument errors, defaults, config precedence and
//! the machine-readable error channel.

use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_classbench"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawning classbench")
}

fn stderr_json(output: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&output.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not JSON: {text}"))
}

fn write_synth(dir: &Path) -> std::path::PathBuf {
    let output = run(binary()
        .args(["synth", "--counts", "20,30,25", "--dim", "2", "--seed", "1"])
        .arg("--out-dir")
        .arg(dir));
    assert!(output.status.success());
    dir.join("synth.csv")
}

#[test]
fn ratios_not_summing_to_one_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_synth(dir.path());
    let output = run(binary()
        .arg("split")
        .arg("--data")
        .arg(&data)
        .args(["--ratios", "0.6,0.2,0.1"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(output.status.code(), Some(2));
    let err = stderr_json(&output);
    assert_eq!(err["kind"], "usage");
    assert!(err["error"].as_str().unwrap().contains("sum to 1"));
}

#[test]
fn omitted_ratios_default_to_65_20_15() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_synth(dir.path());
    let output = run(binary()
        .arg("split")
        .arg("--data")
        .arg(&data)
        .arg("--out-dir")
        .arg(dir.path()));
    assert!(output.status.success());
    let splits = std::fs::read_to_string(dir.path().join("splits.csv")).unwrap();
    let count = |subset: &str| splits.lines().filter(|l| l.ends_with(subset)).count();
    // 20 + 30 + 25 samples -> floor-rule totals per class: 13+19+16 / 4+6+5 / 3+5+4
    assert_eq!(count(",train"), 48);
    assert_eq!(count(",val"), 15);
    assert_eq!(count(",test"), 12);
}

#[test]
fn explicit_strategy_without_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_synth(dir.path());
    let output = run(binary()
        .arg("weights")
        .arg("--data")
        .arg(&data)
        .args(["--strategy", "explicit"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(output.status.code(), Some(2));
    assert_eq!(stderr_json(&output)["kind"], "usage");
}

#[test]
fn explicit_weights_pass_through_verbatim() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("tuned.csv");
    std::fs::write(&table, "class_name,weight\na,1.4\nb,2.05\nc,18.28\n").unwrap();
    let output = run(binary()
        .arg("weights")
        .args(["--strategy", "explicit"])
        .arg("--explicit-file")
        .arg(&table)
        .arg("--out-dir")
        .arg(dir.path()));
    assert!(output.status.success());
    let written = std::fs::read_to_string(dir.path().join("weights.csv")).unwrap();
    assert_eq!(written, "class_name,weight\na,1.4\nb,2.05\nc,18.28\n");
}

#[test]
fn empty_class_directory_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("imgs");
    std::fs::create_dir_all(data.join("full")).unwrap();
    std::fs::create_dir_all(data.join("void")).unwrap();
    std::fs::write(data.join("full/a.pgm"), "P2\n1 1\n255\n3\n").unwrap();
    let output = run(binary()
        .arg("split")
        .arg("--data")
        .arg(&data)
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_json(&output);
    assert_eq!(err["kind"], "runtime");
    assert!(err["error"].as_str().unwrap().contains("empty class"));
}

#[test]
fn config_file_with_flag_override_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_synth(dir.path());
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"epochs": 3, "base_lr": 0.05, "seed": 9, "loss": {"kind": "focal", "gamma": 2.0}}"#,
    )
    .unwrap();
    // --epochs beats the file; base_lr comes from the file.
    let output = run(binary()
        .arg("train")
        .arg("--data")
        .arg(&data)
        .arg("--config")
        .arg(&config)
        .args(["--epochs", "2"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let history = std::fs::read_to_string(dir.path().join("history.csv")).unwrap();
    let lines: Vec<&str> = history.lines().collect();
    assert_eq!(lines[0], "epoch,lr,train_loss,train_f1,val_f1");
    assert_eq!(lines.len(), 3, "2 epochs expected: {history}");
    assert!(
        lines[1].starts_with("0,0.05,"),
        "file base_lr applies: {history}"
    );

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("run_manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "train");
    assert_eq!(manifest["config"]["run"]["epochs"], 2);
    assert_eq!(manifest["config"]["run"]["loss"]["kind"], "focal");
    assert_eq!(manifest["seeds"]["master"], 9);
    let artifacts: Vec<String> = manifest["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(artifacts.len(), 2);
    assert!(artifacts.iter().any(|a| a.ends_with("model.json")));
    assert!(artifacts.iter().any(|a| a.ends_with("history.csv")));
}

#[test]
fn unknown_config_field_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_synth(dir.path());
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"epoch": 3}"#).unwrap();
    let output = run(binary()
        .arg("train")
        .arg("--data")
        .arg(&data)
        .arg("--config")
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn eval_of_a_fitted_model_on_its_training_data_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    // Widely separated blobs: the trained model classifies them perfectly.
    let output = run(binary()
        .args([
            "synth",
            "--counts",
            "30,30",
            "--dim",
            "2",
            "--separation",
            "8",
            "--noise",
            "0.3",
            "--seed",
            "4",
        ])
        .arg("--out-dir")
        .arg(dir.path()));
    assert!(output.status.success());
    let data = dir.path().join("synth.csv");
    let output = run(binary()
        .arg("train")
        .arg("--data")
        .arg(&data)
        .args(["--epochs", "10", "--lr", "0.1", "--seed", "0"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert!(output.status.success());
    let output = run(binary()
        .arg("eval")
        .arg("--model")
        .arg(dir.path().join("model.json"))
        .arg("--data")
        .arg(&data)
        .args(["--subset", "train", "--split-seed", "0"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert!(output.status.success());
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    assert_eq!(metrics["metrics"]["micro_f1"], 1.0);
}

#[test]
fn out_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(binary()
        .env("CLASSBENCH_OUT_DIR", dir.path())
        .args(["synth", "--counts", "5,5", "--dim", "1", "--seed", "0"]));
    assert!(output.status.success());
    assert!(dir.path().join("synth.csv").exists());
    assert!(dir.path().join("run_manifest.json").exists());
}

#[test]
fn missing_dataset_path_fails_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(binary()
        .arg("split")
        .args(["--data", "/definitely/not/here"])
        .arg("--out-dir")
        .arg(dir.path()));
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stderr_json(&output)["kind"], "runtime");
}
