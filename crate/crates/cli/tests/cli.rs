//! End-to-end runs of the `sonic` binary: exit codes and output files.

use std::path::Path;
use std::process::{Command, Output};

use sonic_cli::output::{read_json, read_solution_csv, ResidualsDocument, TricomiDiagnostics};

fn sonic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sonic"))
        .args(args)
        .env_remove("SONIC_THREADS")
        .output()
        .expect("spawn sonic")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn gamma_below_one_is_a_configuration_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "bad.toml", "kind = \"euler\"\n[gas]\ngamma = 0.9\n[boundary]\ncase = \"smoke\"\n");
    let o = sonic(&["--config", &cfg]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma"));
}

#[test]
fn unknown_keys_and_missing_files_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "typo.toml", "kind = \"tricomi\"\n[tricomi]\ncase = \"exact1\"\n[grid]\nnx = 3\n");
    assert_eq!(code(&sonic(&["--config", &cfg])), 1);
    assert_eq!(code(&sonic(&["--config", "/nonexistent/run.toml"])), 1);
    assert_eq!(code(&sonic(&["--case", "nope"])), 1);
}

#[test]
fn non_sonic_boundary_data_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    // q = 1 but c^2 = gamma p / rho = 2: subsonic, not sonic.
    let cfg = write(
        tmp.path(),
        "subsonic.toml",
        "kind = \"euler\"\n[boundary]\nx1 = 0.0\nx2 = 0.3\nphi = { poly = [0.0, 1.0] }\nrho = { poly = [0.7] }\n\
         u = { poly = [1.0] }\nv = { poly = [0.0, -0.1] }\np = { poly = [1.0] }\n",
    );
    let out = tmp.path().join("out");
    let o = sonic(&["--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tricomi_beyond_the_closure_bound_is_rejected() {
    // The closure bound on [0, 1] is cbrt(3/4) ~ 0.909.
    let o = sonic(&["--case", "exact1", "--delta", "0.95", "--out-dir", "/tmp/unused"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn iteration_cap_reports_no_convergence() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = sonic(&["--case", "exact2", "--max-iter", "2", "--grid", "8,17", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let d: TricomiDiagnostics = read_json(&out.join("diagnostics.json")).unwrap();
    assert!(!d.converged);
    assert_eq!(d.iteration.iterations, 2);
}

#[test]
fn exact_tricomi_case_succeeds_and_writes_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = sonic(&["--case", "exact1", "--grid", "16,33", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let d: TricomiDiagnostics = read_json(&out.join("diagnostics.json")).unwrap();
    assert!(d.converged && d.max_u_error.unwrap() < 1e-6);
    let csv = std::fs::read_to_string(out.join("tricomi_solution.csv")).unwrap();
    assert!(csv.starts_with("x,t,y,R,S,W,u\n"));
    assert_eq!(csv.lines().count(), 1 + 17 * 33);
}

#[test]
fn euler_run_then_verify_with_orders() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |s: &str| tmp.path().join(s).to_str().unwrap().to_owned();
    for (grid, dir) in [("16,17", "coarse"), ("32,33", "fine")] {
        let o = sonic(&["--case", "polynomial", "--grid", grid, "--out-dir", &p(dir)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let table = read_solution_csv(&tmp.path().join("fine/solution.csv")).unwrap();
    assert_eq!(table.rows(), 33 * 33);
    assert!(tmp.path().join("fine/boundary_report.json").exists());

    let cfg = write(
        tmp.path(),
        "verify.toml",
        &format!(
            "kind = \"verify\"\n[boundary]\ncase = \"polynomial\"\n[verify]\nsolution_dir = {:?}\ncoarse_dir = {:?}\n\
             min_order = 0.8\n[output]\ndir = {:?}\n",
            p("fine"),
            p("coarse"),
            p("verify")
        ),
    );
    let o = sonic(&["--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: ResidualsDocument = read_json(&tmp.path().join("verify/residuals.json")).unwrap();
    assert!(doc.passed);
    assert_eq!(doc.residuals.len(), 4);
    assert!(doc.residuals.iter().all(|r| r.order.is_some()));

    // An impossible residual ceiling turns the same check into a failure.
    let strict = std::fs::read_to_string(&cfg).unwrap().replace("min_order = 0.8", "max_residual = 1e-30");
    let strict = write(tmp.path(), "strict.toml", &strict);
    assert_eq!(code(&sonic(&["--config", &strict])), 4);
}

#[test]
fn verify_rejects_a_truncated_table() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |s: &str| tmp.path().join(s).to_str().unwrap().to_owned();
    assert_eq!(code(&sonic(&["--case", "smoke", "--grid", "8,9", "--out-dir", &p("run")])), 0);
    let csv = tmp.path().join("run/solution.csv");
    let text = std::fs::read_to_string(&csv).unwrap();
    let kept: Vec<&str> = text.lines().take(text.lines().count() - 1).collect();
    std::fs::write(&csv, kept.join("\n") + "\n").unwrap();
    let cfg = write(
        tmp.path(),
        "verify.toml",
        &format!(
            "kind = \"verify\"\n[boundary]\ncase = \"smoke\"\n[verify]\nsolution_dir = {:?}\n[output]\ndir = {:?}\n",
            p("run"),
            p("verify")
        ),
    );
    let o = sonic(&["--config", &cfg]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rows"));
}

#[test]
fn bad_thread_count_is_a_configuration_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_sonic"))
        .args(["--case", "zero", "--out-dir", "/tmp/unused"])
        .env("SONIC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn shipped_example_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap().flatten() {
        if e.path().extension().is_some_and(|x| x == "toml") {
            sonic_cli::RunConfig::from_file(&e.path()).unwrap_or_else(|err| panic!("{}: {err}", e.path().display()));
            n += 1;
        }
    }
    assert!(n >= 5);
}
