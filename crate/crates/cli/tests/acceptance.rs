//! Acceptance suite. Runs every criterion through the same entry point as the
//! `sonic` binary and prints one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines are never captured.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sonic_cli::config::VerifySection;
use sonic_cli::output::{read_json, EulerDiagnostics, ResidualsDocument, TricomiDiagnostics};
use sonic_cli::{run, Kind, Overrides, RunConfig};

const TRICOMI_TIME_LIMIT: Duration = Duration::from_secs(10);
const EULER_TIME_LIMIT: Duration = Duration::from_secs(60);

struct Run {
    dir: PathBuf,
    elapsed: Duration,
    error: Option<String>,
}

fn execute(mut cfg: RunConfig, dir: &Path, grid: Option<(usize, usize)>, delta: Option<f64>) -> Run {
    cfg.apply(&Overrides {
        out_dir: Some(dir.to_path_buf()),
        grid,
        delta,
        ..Default::default()
    })
    .expect("valid overrides");
    let start = Instant::now();
    let error = run(&cfg).err().map(|e| e.to_string());
    Run {
        dir: dir.to_path_buf(),
        elapsed: start.elapsed(),
        error,
    }
}

fn case(name: &str, dir: &Path, grid: Option<(usize, usize)>, delta: Option<f64>) -> Run {
    execute(RunConfig::for_case(name).unwrap(), dir, grid, delta)
}

fn euler(r: &Run) -> Result<EulerDiagnostics, String> {
    if let Some(e) = &r.error {
        return Err(e.clone());
    }
    read_json(&r.dir.join("diagnostics.json")).map_err(|e| e.to_string())
}

fn tricomi(r: &Run) -> Result<TricomiDiagnostics, String> {
    if let Some(e) = &r.error {
        return Err(e.clone());
    }
    read_json(&r.dir.join("diagnostics.json")).map_err(|e| e.to_string())
}

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tricomi_oracle(r: &Run, limit: f64) -> Verdict {
    let d = tricomi(r)?;
    let fe = d.max_field_error.ok_or("no field error reported")?;
    let ue = d.max_u_error.ok_or("no u error reported")?;
    check(
        d.converged && fe <= limit && ue <= limit,
        format!("field error {fe:.2e}, u error {ue:.2e} (limit {limit:.0e}), {:.2?}", r.elapsed),
    )
}

fn criterion_1(r: &Run) -> Verdict {
    let base = tricomi_oracle(r, 1e-6);
    match base {
        Ok(msg) if r.elapsed >= TRICOMI_TIME_LIMIT => Err(format!("{msg}, slower than {TRICOMI_TIME_LIMIT:?}")),
        other => other,
    }
}

fn criterion_3(r: &Run) -> Verdict {
    let d = tricomi(r)?;
    // `ratios[k]` compares sweep k + 2 with sweep k + 1.
    let from_third = d.iteration.ratios.iter().skip(1).copied().fold(0.0, f64::max);
    check(
        d.converged && d.iteration.ratios.len() >= 2 && from_third <= 0.8,
        format!("max ratio from sweep 3 = {from_third:.4} (limit 0.8) over {} sweeps", d.iteration.iterations),
    )
}

fn criterion_4(r: &Run) -> Verdict {
    let d = euler(r)?;
    let it = &d.iteration;
    let max_ratio = it.ratios.iter().copied().fold(0.0, f64::max);
    let trace = d.state.boundary_trace_error;
    check(
        d.converged
            && (0.0125..=0.1).contains(&d.delta)
            && max_ratio < 1.0
            && trace <= 1e-10
            && it.norm_bound_holds
            && (it.norm_bound - 64.0 * d.k_est).abs() <= 1e-12 * it.norm_bound
            && r.elapsed < EULER_TIME_LIMIT,
        format!(
            "delta {}, max ratio {max_ratio:.4}, trace {trace:.2e}, max norm {:.3e} <= {:.3e}, {:.2?}",
            d.delta, it.max_norm, it.norm_bound, r.elapsed
        ),
    )
}

fn criterion_5(r: &Run) -> Verdict {
    let d = euler(r)?;
    let gap = d.state.entropy_consistency;
    check(
        d.converged && d.state.entropy_varies && gap <= 1e-10,
        format!("S varies: {}, |p rho^-gamma - S| rel {gap:.2e}", d.state.entropy_varies),
    )
}

fn criterion_6(runs: &[(&str, &Run)]) -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, r) in runs {
        let d = euler(r).map_err(|e| format!("{name}: {e}"))?;
        let j = &d.jacobian;
        ok &= d.converged && j.negative_above_data_line && j.factor_sign_constant;
        lines.push(format!(
            "{name}: max j {:.2e}, factor in [{:.3}, {:.3}]",
            j.max_j_above_data_line, j.factor_min, j.factor_max
        ));
    }
    check(ok, lines.join("; "))
}

fn criterion_7(doc: &ResidualsDocument) -> Verdict {
    let need = [
        ("hodograph_system", 1.8),
        ("characteristic_form", 1.8),
        ("euler", 1.0),
        ("decomposition_xi", 0.8),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (op, min) in need {
        let Some(res) = doc.residuals.iter().find(|r| r.operator == op) else {
            return Err(format!("{op} missing from residuals.json"));
        };
        let order = res.order.unwrap_or(f64::NAN);
        ok &= order >= min;
        lines.push(format!("{op} {order:.3} (>= {min})"));
    }
    check(ok, lines.join(", "))
}

fn criterion_8(runs: &[(&str, &Run)]) -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, r) in runs {
        let d = euler(r).map_err(|e| format!("{name}: {e}"))?;
        let s = &d.state;
        ok &= s.supersonic_and_positive && s.bernoulli_consistency <= 1e-10;
        lines.push(format!(
            "{name}: min q-c {:.2e}, min rho {:.3}, min p {:.3}, Bernoulli {:.1e}",
            s.min_q_minus_c, s.min_rho, s.min_p, s.bernoulli_consistency
        ));
    }
    check(ok, lines.join("; "))
}

fn same_bytes(a: &Path, b: &Path) -> Result<Vec<String>, String> {
    let mut names = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(a).map_err(|e| e.to_string())?.flatten().collect();
    entries.sort_by_key(|e| e.file_name());
    for e in entries {
        let name = e.file_name();
        let x = std::fs::read(e.path()).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(&name)).map_err(|e| e.to_string())?;
        if x != y {
            return Err(format!("{} differs", name.to_string_lossy()));
        }
        names.push(name.to_string_lossy().into_owned());
    }
    Ok(names)
}

fn criterion_9(pairs: &[(&Run, &Run)]) -> Verdict {
    let mut compared = Vec::new();
    for (a, b) in pairs {
        if let Some(e) = a.error.as_ref().or(b.error.as_ref()) {
            return Err(e.clone());
        }
        compared.extend(same_bytes(&a.dir, &b.dir)?);
    }
    Ok(format!("{} files identical: {}", compared.len(), compared.join(", ")))
}

fn main() {
    // libtest flags such as `--nocapture` or a name filter are accepted and ignored.
    let root = tempfile::tempdir().expect("temp dir");
    let dir = |name: &str| root.path().join(name);
    // Runs are sequential so timed criteria never share the rayon pool.

    let exact1 = case("exact1", &dir("exact1"), Some((64, 129)), Some(0.4));
    let exact2 = case("exact2", &dir("exact2"), Some((64, 129)), Some(0.4));
    let exact2_wide = case("exact2", &dir("exact2_wide"), Some((64, 129)), Some(0.5));
    let smoke = case("smoke", &dir("smoke_65"), Some((65, 65)), None);
    let pressure = case("pressure", &dir("pressure_65"), Some((65, 65)), None);
    let polynomial = case("polynomial", &dir("polynomial"), None, None);

    // Determinism: an Euler config and its TOML round trip, then a Tricomi
    // case, each run twice.
    let cfg_a = RunConfig::for_case("pressure").unwrap();
    let cfg_b = RunConfig::from_toml_str(&cfg_a.to_toml_string().unwrap()).unwrap();
    let repeat_a = execute(cfg_a, &dir("repeat_a"), Some((32, 33)), None);
    let repeat_b = execute(cfg_b, &dir("repeat_b"), Some((32, 33)), None);
    let tri_cfg = RunConfig::for_case("exact2").unwrap();
    let tri_a = execute(tri_cfg.clone(), &dir("tri_a"), None, None);
    let tri_b = execute(tri_cfg, &dir("tri_b"), None, None);

    let fine = case("smoke", &dir("smoke_129"), Some((129, 129)), None);
    let orders = match (&smoke.error, &fine.error) {
        (None, None) => {
            let verify = RunConfig {
                kind: Kind::Verify,
                verify: Some(VerifySection {
                    solution_dir: fine.dir.clone(),
                    coarse_dir: Some(smoke.dir.clone()),
                    ..Default::default()
                }),
                ..RunConfig::for_case("smoke").unwrap()
            };
            let v = execute(verify, &dir("verify"), None, None);
            match v.error {
                Some(e) => Err(e),
                None => read_json::<ResidualsDocument>(&v.dir.join("residuals.json")).map_err(|e| e.to_string()),
            }
        }
        (Some(e), _) | (_, Some(e)) => Err(e.clone()),
    };

    let euler_runs = [("smoke", &smoke), ("pressure", &pressure), ("polynomial", &polynomial), ("smoke 129", &fine)];
    let verdicts: Vec<(&str, Verdict)> = vec![
        ("tricomi exact oracle 1", criterion_1(&exact1)),
        ("tricomi exact oracle 2", tricomi_oracle(&exact2, 1e-5)),
        ("tricomi contraction at delta 0.5", criterion_3(&exact2_wide)),
        ("euler smoke case", criterion_4(&smoke)),
        ("euler pressure-gradient case", criterion_5(&pressure)),
        ("jacobian signs", criterion_6(&euler_runs)),
        ("identity residual orders, 65 vs 129", orders.and_then(|d| criterion_7(&d))),
        ("supersonic state and Bernoulli", criterion_8(&euler_runs)),
        ("deterministic output", criterion_9(&[(&repeat_a, &repeat_b), (&tri_a, &tri_b)])),
    ];

    let mut failed = 0;
    for (k, (name, v)) in verdicts.iter().enumerate() {
        match v {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
