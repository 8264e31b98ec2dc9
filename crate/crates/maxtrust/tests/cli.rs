//! End-to-end checks of the command line binary: exit codes, output
//! formats, and the experiment's file layout.

use std::path::Path;
use std::process::{Command, Output};

use maxtrust::io::{parse_matrix, ParsedMatrix};

const BIN: &str = env!("CARGO_BIN_EXE_maxtrust");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary spawns")
}

fn write_matrix(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const ABSORBING: &str = "3 3\n0.1 0.55 0.35\n0 0.8 0.2\n0 0 1\n";
const DISCONNECTED: &str = "3 3\n0.75 0 0.25\n0 1 0\n0.25 0 0.75\n";

#[test]
fn fixture_self_test_passes() {
    let out = run(&["--fixtures"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 5);
    assert!(stdout.lines().all(|l| l.ends_with(": ok")), "{stdout}");
}

#[test]
fn eigentrust_ranks_the_absorbing_agent_first() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "absorbing.txt", ABSORBING);
    let out = run(&["--mode", "eigentrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("agent_id,value,rank"));
    let ranked: Vec<&str> = lines.collect();
    assert_eq!(ranked.len(), 3);
    assert!(ranked[2].starts_with("2,") && ranked[2].ends_with(",1"), "{stdout}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("converged in"), "{stderr}");
}

#[test]
fn eigentrust_without_a_dominant_eigenvalue_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "disconnected.txt", DISCONNECTED);
    let out = run(&["--mode", "eigentrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("no dominant eigenvalue"), "{stderr}");
}

#[test]
fn eigentrust_rejects_matrices_with_eps_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "partial.txt", "2 2\neps 1\n0 eps\n");
    let out = run(&["--mode", "eigentrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn maxtrust_handles_the_disconnected_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "disconnected.txt", DISCONNECTED);
    let out = run(&["--mode", "maxtrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // Growth 1.0 for 100 steps from 0 puts the self-endorser at 100.
    assert!(stdout.contains("1,100,1"), "{stdout}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("2 blocks"), "{stderr}");
}

#[test]
fn maxtrust_on_a_single_self_trusting_agent_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "one.txt", "1 1\n1\n");
    let out = run(&["--mode", "maxtrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("growth rates [1]"), "{stderr}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout, "agent_id,value,rank\n0,100,1\n");
}

#[test]
fn maxtrust_reports_unendorsed_agents_as_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "unendorsed.txt", "2 2\neps eps\neps 1\n");
    let out = run(&["--mode", "maxtrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("no endorsements"), "{stderr}");
}

#[test]
fn parse_errors_exit_two_with_the_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "broken.txt", "2 2\n0.5 x\n0 1\n");
    let out = run(&["--mode", "maxtrust", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 2") && stderr.contains("column 5"), "{stderr}");
}

#[test]
fn missing_mode_and_missing_matrix_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--mode", "maxtrust"]).status.code(), Some(2));
    assert_eq!(run(&["--mode", "nonsense"]).status.code(), Some(2));
}

#[test]
fn classify_output_re_parses_as_the_permuted_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_matrix(dir.path(), "absorbing.txt", ABSORBING);
    let out = run(&["--mode", "classify", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    let class = lines.next().unwrap();
    assert!(class.contains("row_stochastic true") && class.contains("irreducible false"));
    assert!(lines.next().unwrap().starts_with("permutation "));
    assert!(lines.next().unwrap().starts_with("blocks "));
    let rest: String = lines.map(|l| format!("{l}\n")).collect();
    match parse_matrix(&rest).unwrap() {
        ParsedMatrix::MaxPlus(m) => assert_eq!(m.rows(), 3),
        other => panic!("expected the max-plus image, got {other:?}"),
    }
}

#[test]
fn experiment_writes_nine_condition_files_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("results");
    let out = run(&[
        "--mode",
        "experiment",
        "--runs",
        "2",
        "--steps",
        "5",
        "--seed",
        "9",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("scenario,topology,algorithm,mean,std,lo95,hi95,runs_used\n"));
    assert_eq!(stdout.lines().count(), 19, "header plus 9 conditions times 2 algorithms");

    let mut names: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"summary.csv".to_owned()));
    assert!(names.contains(&"scenario1_tree.csv".to_owned()));
    assert!(names.contains(&"scenario3_random.csv".to_owned()));

    let cond = std::fs::read_to_string(out_dir.join("scenario2_torus.csv")).unwrap();
    assert_eq!(cond.lines().next(), Some("run_id,timestep,algorithm,distance"));
    // 2 runs x 5 steps x 2 algorithms plus the header.
    assert_eq!(cond.lines().count(), 21);

    let disk_summary = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(disk_summary, stdout, "stdout repeats the summary file");
}

#[test]
fn experiment_respects_a_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.toml");
    std::fs::write(&cfg_path, "runs = 3\nsteps = 4\nmaster_seed = 11\n").unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");

    // Same config twice: byte-identical files.
    for out_dir in [&out_a, &out_b] {
        let out = run(&[
            "--mode",
            "experiment",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read_to_string(out_a.join("summary.csv")).unwrap();
    let b = std::fs::read_to_string(out_b.join("summary.csv")).unwrap();
    assert_eq!(a, b);
    let cond = std::fs::read_to_string(out_a.join("scenario1_tree.csv")).unwrap();
    assert_eq!(cond.lines().count(), 1 + 3 * 4 * 2);

    // A flag overrides the file.
    let out_c = dir.path().join("c");
    let out = run(&[
        "--mode",
        "experiment",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "12",
        "--out",
        out_c.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c = std::fs::read_to_string(out_c.join("summary.csv")).unwrap();
    assert_ne!(a, c, "a different master seed changes the samples");

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "runs = \"many\"\n").unwrap();
    let out = run(&["--mode", "experiment", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_run_single_step_experiments_have_zero_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("tiny");
    let out = run(&[
        "--mode",
        "experiment",
        "--runs",
        "1",
        "--steps",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines().skip(1) {
        let std_field = line.split(',').nth(4).unwrap();
        assert_eq!(std_field.parse::<f64>().unwrap(), 0.0, "{line}");
    }
}
