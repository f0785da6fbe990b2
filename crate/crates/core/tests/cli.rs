//! End-to-end checks of the `onbase` binary: exit codes, reproducibility of
//! file outputs, seed resolution, and config-file layering.

use std::path::Path;
use std::process::{Command, Output};

use onbase::io::read_matrix_path;

fn onbase(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_onbase"));
    // keep seed resolution independent of the test runner's environment
    cmd.env_remove("ONBASE_SEED");
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("failed to spawn onbase")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn list_prints_every_registry() {
    let text = stdout_of(&onbase(&["--list"], &[]));
    for needle in [
        "round-robin",
        "hide-and-seek-reassign",
        "sample-and-price",
        "identical-geometric",
        "correlated-exponential",
        "mwm-upper",
        "arbweights",
        "maximize-bound",
    ] {
        assert!(text.contains(needle), "--list output missing {needle}");
    }
}

#[test]
fn repeated_runs_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let args = [
        "run",
        "--alg",
        "hide-and-seek",
        "--model",
        "correlated",
        "--n",
        "500",
        "--m",
        "10",
        "--trials",
        "1000",
        "--seed",
        "7",
        "--out",
    ];
    let run = |path: &Path| {
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        let leaked: &str = Box::leak(p.into_boxed_str());
        full.push(leaked);
        stdout_of(&onbase(&full, &[]));
        (
            std::fs::read(path).unwrap(),
            std::fs::read(path.with_extension("csv.manifest.json")).unwrap(),
        )
    };
    let first = run(&out);
    let second = run(&out);
    assert_eq!(first.0, second.0, "result CSVs differ between reruns");
    assert_eq!(first.1, second.1, "manifests differ between reruns");

    let text = String::from_utf8(first.0).unwrap();
    assert!(text.starts_with("run_id,algorithm,model,n,m,r_or_p,trials,seed,rho_mean"));
    assert!(text.contains("hide-and-seek,correlated-uniform,500,10"));

    let manifest: serde_json::Value =
        serde_json::from_slice(&first.1).expect("manifest is valid JSON");
    assert_eq!(manifest["command"], "run");
    assert_eq!(manifest["config"]["seed"], 7);
}

#[test]
fn thread_count_does_not_change_results() {
    let one = stdout_of(&onbase(
        &["--threads", "1", "run", "--alg", "max-weight", "--model", "iid", "--n", "60",
          "--m", "4", "--trials", "200", "--seed", "11"],
        &[],
    ));
    let four = stdout_of(&onbase(
        &["--threads", "4", "run", "--alg", "max-weight", "--model", "iid", "--n", "60",
          "--m", "4", "--trials", "200", "--seed", "11"],
        &[],
    ));
    assert_eq!(one, four);
}

#[test]
fn seed_comes_from_flag_env_or_default() {
    let flag = stdout_of(&onbase(
        &["run", "--alg", "round-robin", "--model", "identical", "--n", "12", "--m", "3",
          "--trials", "50", "--seed", "99"],
        &[],
    ));
    let env = stdout_of(&onbase(
        &["run", "--alg", "round-robin", "--model", "identical", "--n", "12", "--m", "3",
          "--trials", "50"],
        &[("ONBASE_SEED", "99")],
    ));
    assert_eq!(flag, env, "ONBASE_SEED should act exactly like --seed");

    let overridden = stdout_of(&onbase(
        &["run", "--alg", "round-robin", "--model", "identical", "--n", "12", "--m", "3",
          "--trials", "50", "--seed", "1"],
        &[("ONBASE_SEED", "99")],
    ));
    assert_ne!(flag, overridden, "--seed must override the environment");

    let bad = onbase(
        &["run", "--alg", "round-robin", "--model", "identical", "--n", "12", "--m", "3",
          "--trials", "50"],
        &[("ONBASE_SEED", "not-a-number")],
    );
    assert_eq!(bad.status.code(), Some(2), "unparsable ONBASE_SEED is a config error");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"alg": "least-loaded", "model": "identical", "n": 40, "m": 5,
            "trials": 120, "seed": 3}"#,
    )
    .unwrap();
    let from_config = stdout_of(&onbase(
        &["--config", config.to_str().unwrap(), "run"],
        &[],
    ));
    assert!(from_config.contains("least-loaded,identical-uniform,40,5"));

    let overridden = stdout_of(&onbase(
        &["--config", config.to_str().unwrap(), "run", "--n", "24"],
        &[],
    ));
    assert!(overridden.contains("least-loaded,identical-uniform,24,5"));
}

#[test]
fn config_errors_exit_2_and_runtime_errors_exit_1() {
    // unknown registry name
    let out = onbase(
        &["run", "--alg", "no-such-rule", "--model", "iid", "--n", "10", "--m", "2"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-rule"));

    // clap-level error: unknown flag
    let out = onbase(&["run", "--frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(2));

    // valid request whose member overflows f64 when materialized linearly
    let out = onbase(
        &["gen", "--family", "identical-geometric", "--n", "400", "--m", "2", "--beta",
          "100", "--member", "399"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1), "overflow is a runtime error, not config");
}

#[test]
fn gen_writes_matrices_readable_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let json = dir.path().join("w.json");
    for path in [&csv, &json] {
        stdout_of(&onbase(
            &["gen", "--model", "correlated-exponential", "--n", "9", "--m", "4", "--seed",
              "21", "--out", path.to_str().unwrap()],
            &[],
        ));
    }
    let a = read_matrix_path(&csv).unwrap();
    let b = read_matrix_path(&json).unwrap();
    assert_eq!(
        a.rows().collect::<Vec<_>>(),
        b.rows().collect::<Vec<_>>(),
        "CSV and JSON round-trips disagree"
    );
    assert_eq!((a.n(), a.m()), (9, 4));

    // family members are exact: member 3 of the geometric family is 2^(1..4)
    let text = stdout_of(&onbase(
        &["gen", "--family", "identical-geometric", "--n", "4", "--m", "2", "--beta", "2",
          "--member", "3"],
        &[],
    ));
    assert_eq!(text, "2,2\n4,4\n8,8\n16,16\n");
}

#[test]
fn analytic_ops_emit_exact_values_as_json() {
    let text = stdout_of(&onbase(&["analytic", "--op", "success", "--n", "4", "--r", "1"], &[]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), 11.0 / 24.0);

    let text = stdout_of(&onbase(
        &["analytic", "--op", "maximize-bound", "--m", "2", "--dmax", "10", "--grid", "99"],
        &[],
    ));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["alpha"].as_f64().unwrap(), 0.22);

    let text = stdout_of(&onbase(
        &["analytic", "--op", "degree-law", "--n", "3", "--r", "1"],
        &[],
    ));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let law: Vec<f64> = v["law"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    // the emitted floats are bit-identical to the library's
    assert_eq!(law, onbase::analytics::modified_secretary_degree_law(3, 1).unwrap());
}

#[test]
fn worst_case_marks_exactly_one_worst_member() {
    let text = stdout_of(&onbase(
        &["worst-case", "--family", "one-strong-column", "--alg", "max-weight", "--n", "12",
          "--beta", "10", "--seed", "5"],
        &[],
    ));
    let worst_lines = text.lines().filter(|l| l.ends_with(",true")).count();
    assert_eq!(worst_lines, 1, "expected exactly one is_worst row:\n{text}");
    assert_eq!(text.lines().count(), 1 + 12, "header plus one row per member");
}

#[test]
fn figures_dataset_covers_all_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ksec.csv");
    stdout_of(&onbase(
        &["figures", "--which", "ksec", "--trials", "2", "--seed", "3", "--out",
          out.to_str().unwrap()],
        &[],
    ));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("figure,run_id,algorithm"));
    // 3 algorithms x 5 instance sizes
    assert_eq!(text.lines().count(), 1 + 15);
    let manifest: serde_json::Value = serde_json::from_slice(
        &std::fs::read(out.with_extension("csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["config"]["models"][0], "identical-uniform");
}
