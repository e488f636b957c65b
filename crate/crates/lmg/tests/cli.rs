//! End-to-end tests of the `lmg` binary: argument handling, exit codes,
//! CSV shape, override precedence, and byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_lmg")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn run_to(dir: &Path, experiment: &str, config_text: &str, sets: &[&str], out_name: &str) -> (Output, PathBuf) {
    let cfg = dir.join("run.cfg");
    write(&cfg, config_text);
    let out = dir.join(out_name);
    let mut args: Vec<String> = vec![
        experiment.to_string(),
        "--config".into(),
        cfg.display().to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    for s in sets {
        args.push("--set".into());
        args.push((*s).to_string());
    }
    let args_ref: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    (run(&args_ref), out)
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

#[test]
fn figure1_produces_header_columns_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(dir.path(), "figure1", "n_energy = 21\n", &[], "f1.csv");
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# lmg "));
    assert!(text.contains("# experiment = figure1"));
    let cols: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(cols[0], "lambda,epsilon,A");
    // default lambda list 0.5, 2.0 at 21 points each
    assert_eq!(cols.len(), 1 + 42);
    // every data cell parses as a float
    for row in &cols[1..] {
        for cell in row.split(',') {
            cell.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn identical_configs_give_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_text = "lambda = 0.7,1.3\nn_energy = 33\n";
    let (out_a, path_a) = run_to(dir.path(), "slowflow", cfg_text, &[], "a.csv");
    let (out_b, path_b) = run_to(dir.path(), "slowflow", cfg_text, &[], "b.csv");
    assert_eq!(code(&out_a), 0);
    assert_eq!(code(&out_b), 0);
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn set_flag_wins_over_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(
        dir.path(),
        "figure1",
        "lambda = 0.5\nn_energy = 5\n",
        &["lambda=2.0"],
        "f.csv",
    );
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# lambda = 2.0000000000000000e0"));
    // grid starts at the lambda = 2 ground energy
    let first = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(first, "lambda,epsilon,A");
    let row1 = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    assert!(row1.starts_with("2.0000000000000000e0,-1.2500000000000000e0,"));
}

#[test]
fn out_key_in_config_is_honored_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_key.csv");
    let cfg = dir.path().join("run.cfg");
    write(
        &cfg,
        &format!("n_energy = 4\nout = {}\n", target.display()),
    );
    let out = run(&["figure1", "--config", &cfg.display().to_string()]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(target.exists());

    let flag_target = dir.path().join("from_flag.csv");
    let out = run(&[
        "figure1",
        "--config",
        &cfg.display().to_string(),
        "--out",
        &flag_target.display().to_string(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(flag_target.exists());
}

#[test]
fn unknown_experiment_and_unknown_key_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "");
    let out = run(&["warp", "--config", &cfg.display().to_string(), "--out", "/tmp/x.csv"]);
    assert_eq!(code(&out), 2);

    write(&cfg, "lambada = 0.5\n");
    let out = run(&["figure1", "--config", &cfg.display().to_string(), "--out", "/tmp/x.csv"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambada"));
}

#[test]
fn config_and_value_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");

    // malformed line
    write(&cfg, "no equals sign here\n");
    let out = run(&["figure1", "--config", &cfg.display().to_string(), "--out", "/tmp/x.csv"]);
    assert_eq!(code(&out), 2);

    // bad value type
    write(&cfg, "n_energy = many\n");
    let out = run(&["figure1", "--config", &cfg.display().to_string(), "--out", "/tmp/x.csv"]);
    assert_eq!(code(&out), 2);

    // domain violation: negative coupling via override
    write(&cfg, "");
    let out = run(&[
        "figure1",
        "--config",
        &cfg.display().to_string(),
        "--set",
        "lambda=-2",
        "--out",
        "/tmp/x.csv",
    ]);
    assert_eq!(code(&out), 2);

    // malformed --set
    let out = run(&[
        "figure1",
        "--config",
        &cfg.display().to_string(),
        "--set",
        "lambda",
        "--out",
        "/tmp/x.csv",
    ]);
    assert_eq!(code(&out), 2);

    // missing output path
    let out = run(&["figure1", "--config", &cfg.display().to_string()]);
    assert_eq!(code(&out), 2);

    // unsupported format
    write(&cfg, "format = json\n");
    let out = run(&["figure1", "--config", &cfg.display().to_string(), "--out", "/tmp/x.csv"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "figure1",
        "--config",
        &dir.path().join("absent.cfg").display().to_string(),
        "--out",
        "/tmp/x.csv",
    ]);
    assert_eq!(code(&out), 4);

    let cfg = dir.path().join("run.cfg");
    write(&cfg, "n_energy = 4\n");
    let out = run(&[
        "figure1",
        "--config",
        &cfg.display().to_string(),
        "--out",
        &dir.path().join("no_such_dir").join("x.csv").display().to_string(),
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn gap_scan_gamma_zero_control_reports_zero_gap() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(
        dir.path(),
        "gap-scan",
        "s_list = 2,4\ngamma = 0.0\n",
        &[],
        "gap0.csv",
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let gap: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(gap.abs() < 1e-10, "gamma = 0 gap = {gap}");
    }
}

#[test]
fn figure2_small_run_matches_contract() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(
        dir.path(),
        "figure2",
        "lambda = 0.5\nttilde = 1.0\ns = 3\ngamma = 0.05\nt_max = 80\nn_times = 5\ninitial_frac = 0.25,0.75\nconv_tol = 0.05\n",
        &[],
        "f2.csv",
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# gibbs lambda = "));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    // 1 lambda x 1 Ttilde x 2 states x 5 times
    assert_eq!(rows.len(), 10);
    let cols = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(cols, "lambda,Ttilde,label,gamma_t,h");
    // series are labeled by their initial energy
    assert!(rows.iter().all(|r| r.split(',').nth(2).unwrap().starts_with("h0=")));
}
