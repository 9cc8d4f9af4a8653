use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn dnls(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dnls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(sub: &str, paths: &[&Path]) -> Output {
    let mut all: Vec<&Path> = vec![Path::new(sub)];
    all.extend_from_slice(paths);
    dnls(&all)
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn lattice(dim: usize, sides: &str, boundary: &str, exponent: &str) -> String {
    format!(
        r#"
[graph]
kind = "lattice"
dim = {dim}
sides = {sides}
boundary = "{boundary}"

[potential]
kind = "constant"
value = 1.0

[nonlinearity]
exponents = [{exponent}]
"#
    )
}

const SINGLE: &str = r#"
[graph]
kind = "edges"
vertices = 1

[potential]
kind = "constant"
value = 1.0

[nonlinearity]
exponents = [4.0]
"#;

fn record(path: &Path) -> toml::Value {
    fs::read_to_string(path).unwrap().parse().unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn single_vertex_solve_writes_closed_form_energy() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "one.toml", SINGLE);
    let out = run("solve", &[&cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rec = record(&dir.path().join("one.toml"));
    let energy = rec["result"]["energy"].as_float().unwrap();
    assert!((energy - 0.25).abs() < 1e-10);
    assert_eq!(rec["result"]["seed"].as_integer(), Some(0));
    assert_eq!(rec["config"]["graph"]["vertices"].as_integer(), Some(1));
    assert!(dir.path().join("one_solution.csv").exists());
    assert!(dir.path().join("one_trace.csv").exists());
}

#[test]
fn quadratic_exponent_is_a_config_error_naming_the_key() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "q2.toml", &lattice(1, "[8]", "periodic_torus", "2.0"));
    let out = run("solve", &[&cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nonlinearity.exponents[0]"), "{err}");
    assert!(!err.contains("panicked"));
}

#[test]
fn schema_violation_names_the_key_path() {
    let dir = TempDir::new().unwrap();
    let body = format!(
        "{}\n[solver]\nmax_iters = \"many\"\n",
        lattice(1, "[8]", "periodic_torus", "4.0")
    );
    let cfg = write_config(&dir, "bad.toml", &body);
    let out = run("solve", &[&cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("solver.max_iters"));
}

#[test]
fn missing_input_is_exit_one() {
    let out = run("solve", &[Path::new("/nonexistent/config.toml")]);
    assert_eq!(out.status.code(), Some(1));
    let out = run("verify", &[Path::new("/nonexistent/result.toml")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_convergence_is_exit_two_with_a_result() {
    let dir = TempDir::new().unwrap();
    let body = format!(
        "{}\n[solver]\nmax_iters = 1\n",
        lattice(1, "[16]", "periodic_torus", "4.0")
    );
    let cfg = write_config(&dir, "short.toml", &body);
    let out = run("solve", &[&cfg]);
    assert_eq!(out.status.code(), Some(2));
    let rec = record(&dir.path().join("short.toml"));
    assert_eq!(rec["result"]["converged"].as_bool(), Some(false));
    assert_eq!(
        rec["result"]["stop_reason"].as_str(),
        Some("max_iterations")
    );
}

#[test]
fn sweep_over_exponents_gives_one_row_each() {
    let dir = TempDir::new().unwrap();
    let body = format!(
        "{}\n[sweep]\nworkers = 2\n[[sweep.axes]]\nparameter = \"nonlinearity.exponents[0]\"\nvalues = [3.0, 4.0, 6.0]\n",
        lattice(1, "[16]", "periodic_torus", "4.0")
    );
    let cfg = write_config(&dir, "sweep.toml", &body);
    let out = run("sweep", &[&cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = csv_rows(&dir.path().join("sweep_sweep.csv"));
    assert_eq!(rows.len(), 3);
    for (row, q) in rows.iter().zip(["3.0", "4.0", "6.0"]) {
        assert_eq!(row[1], q);
        let energy: f64 = row[2].parse().unwrap();
        assert!(energy > 0.0);
    }
    let entry = record(&dir.path().join("sweep_sweep002.toml"));
    let q = entry["config"]["nonlinearity"]["exponents"][0].as_float();
    assert_eq!(q, Some(6.0));
}

#[test]
fn sweep_without_axes_is_rejected() {
    let dir = TempDir::new().unwrap();
    let body = format!(
        "{}\n[sweep]\naxes = []\n",
        lattice(1, "[8]", "periodic_torus", "4.0")
    );
    let cfg = write_config(&dir, "empty.toml", &body);
    assert_eq!(run("sweep", &[&cfg]).status.code(), Some(1));
}

#[test]
fn export_plotdata_is_tidy_idempotent_and_small_residual() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "box.toml",
        &lattice(2, "[9, 9]", "dirichlet_box", "4.0"),
    );
    assert_eq!(run("solve", &[&cfg]).status.code(), Some(0));
    let result = dir.path().join("box.toml");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(
        run("export-plotdata", &[&result, &a]).status.code(),
        Some(0)
    );
    assert_eq!(
        run("export-plotdata", &[&result, &b]).status.code(),
        Some(0)
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().next(), Some("vertex_index,x0,x1,u,V,residual"));
    let rows = csv_rows(&a);
    assert_eq!(rows.len(), 81);
    let u_sup = rows
        .iter()
        .map(|r| r[3].parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max);
    let res_sup = rows
        .iter()
        .map(|r| r[5].parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max);
    assert!(res_sup <= 1e-8 * u_sup.max(1.0));
}

#[test]
fn verify_round_trips_stored_residuals() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "ring.toml",
        &lattice(1, "[16]", "periodic_torus", "4.0"),
    );
    assert_eq!(run("solve", &[&cfg]).status.code(), Some(0));
    let result = dir.path().join("ring.toml");
    let out = run("verify", &[&result]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let rep = record(&dir.path().join("ring_verify.toml"));
    assert_eq!(rep["stored_residuals_reproduced"].as_bool(), Some(true));
    assert_eq!(rep["passed"].as_bool(), Some(true));
}

#[test]
fn verify_flags_a_corrupted_solution() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "one.toml", SINGLE);
    assert_eq!(run("solve", &[&cfg]).status.code(), Some(0));
    let solution = dir.path().join("one_solution.csv");
    fs::write(&solution, "vertex_index,id,value\n0,0,1.1\n").unwrap();
    let out = run("verify", &[&dir.path().join("one.toml")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncate_reports_monotone_energies() {
    let dir = TempDir::new().unwrap();
    let body = format!(
        "{}\n[truncate]\nsizes = [3, 5, 7]\n",
        lattice(1, "[3]", "dirichlet_box", "4.0")
    );
    let cfg = write_config(&dir, "trunc.toml", &body);
    assert_eq!(run("truncate", &[&cfg]).status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("trunc_truncation.csv"));
    let energies: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(energies.len(), 3);
    assert!(energies.windows(2).all(|w| w[1] <= w[0]));
    let summary = record(&dir.path().join("trunc_truncation.toml"));
    assert_eq!(summary["monotone"].as_bool(), Some(true));
}

#[test]
fn truncate_rejects_periodic_graphs() {
    let dir = TempDir::new().unwrap();
    let body = format!(
        "{}\n[truncate]\nsizes = [3, 5]\n",
        lattice(1, "[3]", "periodic_torus", "4.0")
    );
    let cfg = write_config(&dir, "bad.toml", &body);
    assert_eq!(run("truncate", &[&cfg]).status.code(), Some(1));
}

#[test]
fn compare_reports_a_positive_gap() {
    let dir = TempDir::new().unwrap();
    let body = r#"
[graph]
kind = "lattice"
dim = 1
sides = [16]
boundary = "periodic_torus"

[potential]
kind = "well"
vinf = 1.0
dips = [{ vertex = 0, depth = 0.5 }]

[nonlinearity]
exponents = [4.0]
"#;
    let cfg = write_config(&dir, "well.toml", body);
    assert_eq!(run("compare", &[&cfg]).status.code(), Some(0));
    let rec = record(&dir.path().join("well_compare.toml"));
    let (c, c_inf) = (
        rec["c"].as_float().unwrap(),
        rec["c_inf"].as_float().unwrap(),
    );
    assert!(c < c_inf);
    assert!(rec["gap"].as_float().unwrap() > 0.0);
    // both halves are ordinary result records
    let limit = dir.path().join("well_limit.toml");
    assert_eq!(run("verify", &[&limit]).status.code(), Some(0));
}

#[test]
fn command_guard_must_match() {
    let dir = TempDir::new().unwrap();
    let body = format!("command = \"sweep\"\n{SINGLE}");
    let cfg = write_config(&dir, "guard.toml", &body);
    let out = run("solve", &[&cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("command"));
}
