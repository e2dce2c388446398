use std::path::Path;
use std::process::{Command, Output};

fn grainfusion(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grainfusion"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn synth(dir: &Path, days: &str, seed: &str, name: &str) {
    ok(&grainfusion(&["synth", "--days", days, "--seed", seed, "--out", name], dir));
}

#[test]
fn synth_writes_requested_rows_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&grainfusion(&["synth", "--days", "524", "--seed", "0", "--out", "a.csv"], dir.path()));
    assert!(out.contains("524 rows"));
    synth(dir.path(), "524", "0", "b.csv");
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 525);
    assert!(text.lines().nth(1).unwrap().starts_with("2020-01-01,"));
}

#[test]
fn usage_errors_are_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = grainfusion(&["synth", "--days", "0", "--out", "x.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn bad_input_reports_file_and_row() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.csv"),
        "warehouse_temp,warehouse_humidity,air_temp,air_humidity,grain_temp\n1,50,2,60,10\n1,abc,2,60,10\n",
    )
    .unwrap();
    let out = grainfusion(&["report", "--input", "bad.csv", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    let last = err.lines().last().unwrap();
    assert!(last.starts_with("error:") && last.contains('2'), "{err}");
}

#[test]
fn filtered_report_and_importance() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "300", "4", "g.csv");
    let table = ok(&grainfusion(
        &["report", "--input", "g.csv", "--out", "r", "--grid", "5,10", "--models", "adaboost+random_forest"],
        dir.path(),
    ));
    let names: Vec<&str> = table.lines().skip(1).map(|l| l.split("  ").next().unwrap().trim()).collect();
    assert_eq!(names, ["Adaboost", "Random forest", "Adaboost-random forest"]);
    for file in ["report.txt", "report.json", "chosen_params.json"] {
        assert!(dir.path().join("r").join(file).exists());
    }

    ok(&grainfusion(&["importance", "--input", "g.csv", "--out", "imp", "--grid", "5,10"], dir.path()));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("imp/importance.json")).unwrap()).unwrap();
    let entries = json.as_array().unwrap();
    assert_eq!(entries[0]["feature"], "warehouse_temp");
    let total: f64 = entries.iter().map(|e| e["importance"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn train_then_predict() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "200", "1", "train.csv");
    synth(dir.path(), "60", "2", "new.csv");
    for model in ["decision_tree", "extra_trees+random_forest"] {
        ok(&grainfusion(
            &["train", "--input", "train.csv", "--out", "m.json", "--model", model, "--n-estimators", "6"],
            dir.path(),
        ));
        ok(&grainfusion(&["predict", "--model", "m.json", "--input", "new.csv", "--out", "p.csv"], dir.path()));
        let text = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("row,prediction,grain_temp"));
        assert_eq!(lines.count(), 60);
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "days = 40\nseed = 3\nout = \"cfg.csv\"\n").unwrap();
    ok(&grainfusion(&["synth", "--config", "run.toml"], dir.path()));
    ok(&grainfusion(&["synth", "--config", "run.toml", "--days", "10", "--out", "flag.csv"], dir.path()));
    let rows = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap().lines().count() - 1;
    assert_eq!(rows("cfg.csv"), 40);
    assert_eq!(rows("flag.csv"), 10);

    std::fs::write(dir.path().join("typo.toml"), "dayz = 4\n").unwrap();
    let out = grainfusion(&["synth", "--config", "typo.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
