use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gwave"));
    cmd.env_remove("GWAVE_LOG");
    cmd
}

fn bundled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems/p5_scalar/problem.toml")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Writes the P5 graph and domain plus a problem file with the given body.
fn scratch_problem(dir: &Path, body: &str) -> PathBuf {
    fs::write(dir.join("graph.tsv"), "0\t1\t1\n1\t2\t1\n2\t3\t1\n3\t4\t1\n").unwrap();
    fs::write(dir.join("domain.txt"), "1\n2\n3\n").unwrap();
    let path = dir.join("problem.toml");
    fs::write(&path, format!("graph = \"graph.tsv\"\ndomain = \"domain.txt\"\n{body}")).unwrap();
    path
}

#[test]
fn solve_zero_problem_shape() {
    let dir = tempfile::tempdir().unwrap();
    let problem = scratch_problem(dir.path(), "p = 2.0\nhorizon = 1.0\nn = 8\n");
    let out = run(&["solve", "--problem", problem.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,vertex,u,w"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9 * 3);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert_eq!(cols[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(cols[3].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn solve_two_steps_of_scalar_problem() {
    let out = run(&["solve", "--problem", bundled().to_str().unwrap(), "--n", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first_step = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect::<Vec<_>>())
        .find(|c| c[1] == "2" && c[0].parse::<f64>().unwrap() == 0.5)
        .unwrap();
    let u: f64 = first_step[2].parse().unwrap();
    assert!((u - 0.719224).abs() <= 1e-6, "{u}");
}

#[test]
fn missing_graph_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("problem.toml");
    fs::write(&problem, "graph = \"nowhere.tsv\"\ndomain = \"d.txt\"\np = 2.0\nhorizon = 1.0\nn = 4\n").unwrap();
    let out = run(&["solve", "--problem", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error[E_IO]"), "{err}");
    assert!(err.contains("nowhere.tsv"), "{err}");
}

#[test]
fn invalid_exponent_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let problem = scratch_problem(dir.path(), "p = 1.0\nhorizon = 1.0\nn = 4\n");
    let out = run(&["solve", "--problem", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[E_EXPONENT]"), "{}", stderr(&out));
}

#[test]
fn unknown_key_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let problem = scratch_problem(dir.path(), "p = 2.0\nhorizon = 1.0\nn = 4\nsteps = 3\n");
    let out = run(&["solve", "--problem", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error[E_PARSE]"), "{err}");
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn converge_reports_one_row_per_level() {
    let out = run(&["converge", "--problem", bundled().to_str().unwrap(), "--n-list", "8,16,32", "--samples", "50"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,n_refined,distance,ratio");
    assert_eq!(lines.len(), 4);
    let d: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(d[1] < d[0] && d[2] < d[1]);
}

#[test]
fn converge_rejects_unnested_levels() {
    let out = run(&["converge", "--problem", bundled().to_str().unwrap(), "--n-list", "8,12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_step_beyond_horizon() {
    let out = run(&["oracle", "--problem", bundled().to_str().unwrap(), "--dt", "2.0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[E_STEP]"), "{}", stderr(&out));
}

#[test]
fn oracle_writes_comparison_and_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cmp.csv");
    let traj = dir.path().join("traj.csv");
    let out = run(&[
        "oracle",
        "--problem",
        bundled().to_str().unwrap(),
        "--dt",
        "1e-3",
        "--out",
        csv.to_str().unwrap(),
        "--trajectory",
        traj.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("sup_u_error="));
    assert!(fs::read_to_string(&csv).unwrap().starts_with("t,vertex,u_rothe,w_rothe,u_oracle,v_oracle"));
    assert!(fs::read_to_string(&traj).unwrap().starts_with("t,vertex,u,v"));
}

#[test]
fn check_passes_on_bundled_problem() {
    let out = run(&["check", "--problem", bundled().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains(", 0 failed"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["solve"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[E_USAGE]"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
