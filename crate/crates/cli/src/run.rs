use std::fs;
use std::path::{Path, PathBuf};

use sonic_core::boundary::{derive_boundary, to_hodograph, validate_boundary, DerivedBoundary, ValidationReport};
use sonic_core::hodograph::{check_strong_determinacy, solve, SolverSettings};
use sonic_core::inverse::{assemble_physical, recover_physical};
use sonic_core::tricomi::{exact_fields, exact_u, recover_u, solve_tricomi};
use sonic_core::verify::{
    bernoulli_consistency, entropy_consistency, residual_characteristic_form, residual_decomposition_xi,
    residual_euler, residual_hodograph_system, residual_tricomi_pde, residual_tricomi_system, ResidualReport,
};
use sonic_core::{FieldTriple, GasConstants, HodographBoundary, PhysicalSolution};

use crate::config::{Kind, RunConfig};
use crate::error::CliError;
use crate::output::*;

/// Tolerance of the entropy and Bernoulli identities checked by `verify`.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Files written by a successful run and a one-line summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.kind {
        Kind::Euler => run_euler(cfg),
        Kind::Tricomi => run_tricomi(cfg),
        Kind::Verify => run_verify(cfg),
    }
}

fn gas(cfg: &RunConfig) -> Result<GasConstants, CliError> {
    GasConstants::new(cfg.gas.gamma).map_err(|e| CliError::Config(e.to_string()))
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn hodograph_boundary(cfg: &RunConfig, gc: &GasConstants) -> Result<(ValidationReport, DerivedBoundary, HodographBoundary), CliError> {
    let section = cfg
        .boundary
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [boundary] section".into()))?;
    let data = section.data()?;
    let report = validate_boundary(&data, gc).map_err(CliError::from_boundary)?;
    let db = derive_boundary(&data, gc).map_err(CliError::from_boundary)?;
    let hb = to_hodograph(&db).map_err(CliError::from_boundary)?;
    Ok((report, db, hb))
}

fn boundary_report(report: &ValidationReport, db: &DerivedBoundary, hb: &HodographBoundary) -> BoundaryReport {
    let h_gap = db
        .samples()
        .iter()
        .map(|p| {
            let (a, b) = (p.h_hat.value(), p.h_hat_definition.value());
            let scale = a.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            }
        })
        .fold(0.0, f64::max);
    BoundaryReport {
        x1: db.data.x1,
        x2: db.data.x2,
        samples: report.samples,
        conditions: report
            .conditions
            .iter()
            .map(|c| ConditionJson {
                name: c.name.into(),
                worst_margin: c.worst_margin,
                worst_value: c.worst_value,
                at_x: c.at_x,
                passed: c.passed,
            })
            .collect(),
        r1: hb.r1,
        r2: hb.r2,
        eps0: hb.eps0,
        h0_flat: hb.h0_is_flat(),
        h_hat_consistency: h_gap,
        hodograph_samples: hb
            .samples()
            .iter()
            .enumerate()
            .map(|(k, s)| BoundarySampleJson {
                r: hb.sample_r(k),
                x_bar: s.x_bar.value(),
                a0: s.a0.value(),
                a1: s.a1.value(),
                h0: s.h0.value(),
            })
            .collect(),
    }
}

/// Residuals of the four Euler-side operators, in report order.
pub fn euler_residuals(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
    phys: &PhysicalSolution,
) -> Result<Vec<(&'static str, ResidualReport)>, CliError> {
    let v = |e: sonic_core::Error| CliError::Verification(e.to_string());
    Ok(vec![
        ("hodograph_system", residual_hodograph_system(fields, hb, gc).map_err(v)?),
        ("characteristic_form", residual_characteristic_form(phys).map_err(v)?),
        ("euler", residual_euler(phys).map_err(v)?),
        ("decomposition_xi", residual_decomposition_xi(phys).map_err(v)?),
    ])
}

fn jacobian_summary(phys: &PhysicalSolution) -> JacobianJson {
    let mut max_j = f64::NEG_INFINITY;
    let (mut fmin, mut fmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..phys.len() {
        if phys.t[k] > 0.0 {
            max_j = max_j.max(phys.jac[k]);
        }
        fmin = fmin.min(phys.jac_factor[k]);
        fmax = fmax.max(phys.jac_factor[k]);
    }
    JacobianJson {
        negative_above_data_line: max_j < 0.0,
        max_j_above_data_line: max_j,
        factor_min: fmin,
        factor_max: fmax,
        factor_sign_constant: fmax < 0.0 || fmin > 0.0,
    }
}

fn state_summary(phys: &PhysicalSolution, hb: &HodographBoundary) -> Result<StateJson, CliError> {
    let (mut dq, mut rho, mut p) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for k in 0..phys.len() {
        if phys.t[k] > 0.0 {
            dq = dq.min(phys.u[k].hypot(phys.v[k]) - phys.c[k]);
            rho = rho.min(phys.rho[k]);
            p = p.min(phys.p[k]);
        }
    }
    let g = &phys.grid;
    let mut trace: f64 = 0.0;
    for i in 0..g.nr {
        let k = g.index(0, i);
        let a0 = hb.at(phys.r[k]).map_err(CliError::Solver)?.a0;
        trace = trace.max((phys.ubar[k] + a0).abs());
    }
    let (smin, smax) = phys
        .s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    Ok(StateJson {
        supersonic_and_positive: dq > 0.0 && rho > 0.0 && p > 0.0,
        min_q_minus_c: dq,
        min_rho: rho,
        min_p: p,
        entropy_consistency: entropy_consistency(phys),
        bernoulli_consistency: bernoulli_consistency(phys),
        boundary_trace_error: trace,
        entropy_varies: smax - smin > 1e-12 * smax.abs(),
    })
}

fn run_euler(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let res = cfg.resolved();
    let gc = gas(cfg)?;
    let (report, db, hb) = hodograph_boundary(cfg, &gc)?;
    prepare_dir(&res.out_dir)?;
    let boundary_path = res.out_dir.join("boundary_report.json");
    write_json(&boundary_path, &boundary_report(&report, &db, &hb))?;

    let settings = SolverSettings {
        delta: res.delta,
        nt: res.nt,
        nr: res.nr,
        tol: res.tol,
        max_iter: res.max_iter,
        max_halvings: res.max_halvings,
        ..SolverSettings::default()
    };
    let sol = solve(&hb, &gc, &settings).map_err(CliError::Solver)?;
    let phys = recover_physical(&sol.fields, &hb, &gc).map_err(CliError::Solver)?;
    let determinacy = check_strong_determinacy(&sol.fields, &hb, &gc).map_err(CliError::Solver)?;
    let residuals = euler_residuals(&sol.fields, &hb, &gc, &phys)?;
    let jacobian = jacobian_summary(&phys);
    let state = state_summary(&phys, &hb)?;

    let solution_path = res.out_dir.join("solution.csv");
    write_solution_csv(&solution_path, &phys)?;
    let diag = EulerDiagnostics {
        kind: "euler".into(),
        gamma: gc.gamma,
        converged: sol.report.converged,
        delta: sol.delta,
        attempts: sol
            .attempts
            .iter()
            .map(|a| AttemptJson {
                delta: a.delta,
                failure: a.failure.clone(),
            })
            .collect(),
        k_est: sol.k_est,
        m_est: sol.m_est,
        proof_delta: sol.proof_delta,
        strong_determinacy: determinacy.passed(),
        iteration: IterationJson::from_report(&sol.report),
        grid: GridJson::from_grid(&sol.fields.grid),
        jacobian: jacobian.clone(),
        state: state.clone(),
        residuals: residuals.iter().map(|(n, r)| ResidualJson::new(n, r, None)).collect(),
    };
    let diag_path = res.out_dir.join("diagnostics.json");
    write_json(&diag_path, &diag)?;

    if !sol.report.converged {
        return Err(CliError::NotConverged {
            iterations: sol.report.iterations(),
            distance: sol.report.final_distance().unwrap_or(f64::NAN),
        });
    }
    if !(jacobian.negative_above_data_line && jacobian.factor_sign_constant) {
        return Err(CliError::Verification(format!(
            "Jacobian sign check failed: max j = {:e}, factor in [{:e}, {:e}]",
            jacobian.max_j_above_data_line, jacobian.factor_min, jacobian.factor_max
        )));
    }
    if !state.supersonic_and_positive {
        return Err(CliError::Verification("recovered state is not supersonic and positive".into()));
    }
    Ok(Outcome {
        files: vec![solution_path, diag_path, boundary_path],
        summary: format!(
            "euler: converged in {} sweeps at delta = {}",
            sol.report.iterations(),
            sol.delta
        ),
    })
}

fn run_tricomi(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let res = cfg.resolved();
    let section = cfg
        .tricomi
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [tricomi] section".into()))?;
    let prob = section.problem(res.delta, res.nt, res.nr)?;
    prob.validate().map_err(CliError::Validation)?;
    let sol = solve_tricomi(&prob, res.tol, res.max_iter).map_err(CliError::Solver)?;
    let rec = recover_u(&sol.fields, &prob).map_err(CliError::Solver)?;
    let (mut field_err, mut u_err) = (None, None);
    if let Some(case) = section.exact_case() {
        let g = &sol.fields.grid;
        let (mut fe, mut ue) = (0.0f64, 0.0f64);
        for j in 0..g.levels() {
            for i in 0..g.nr {
                let k = g.index(j, i);
                let ex = exact_fields(case, rec.x[k], rec.t[k]);
                for c in 0..3 {
                    fe = fe.max((sol.fields.f[c][k] - ex[c]).abs());
                }
                ue = ue.max((rec.u[k] - exact_u(case, rec.x[k], rec.y[k])).abs());
            }
        }
        field_err = Some(fe);
        u_err = Some(ue);
    }
    let system = residual_tricomi_system(&sol.fields, &prob).map_err(|e| CliError::Verification(e.to_string()))?;
    let pde = residual_tricomi_pde(&rec);

    prepare_dir(&res.out_dir)?;
    let csv_path = res.out_dir.join("tricomi_solution.csv");
    write_tricomi_csv(&csv_path, &sol.fields, &rec)?;
    let diag = TricomiDiagnostics {
        kind: "tricomi".into(),
        converged: sol.report.converged,
        delta: prob.delta,
        k_est: sol.k_est,
        m_est: sol.m_est,
        fixed_point_residual: sol.fixed_point_residual,
        iteration: IterationJson::from_report(&sol.report),
        grid: GridJson::from_grid(&sol.fields.grid),
        max_field_error: field_err,
        max_u_error: u_err,
        residuals: vec![
            ResidualJson::new("tricomi_system", &system, None),
            ResidualJson::new("tricomi_equation", &pde, None),
        ],
    };
    let diag_path = res.out_dir.join("diagnostics.json");
    write_json(&diag_path, &diag)?;
    if !sol.report.converged {
        return Err(CliError::NotConverged {
            iterations: sol.report.iterations(),
            distance: sol.report.final_distance().unwrap_or(f64::NAN),
        });
    }
    let mut summary = format!("tricomi: converged in {} sweeps", sol.report.iterations());
    if let (Some(f), Some(u)) = (field_err, u_err) {
        summary.push_str(&format!(", max field error {f:e}, max u error {u:e}"));
    }
    Ok(Outcome {
        files: vec![csv_path, diag_path],
        summary,
    })
}

/// Rebuild error fields and the physical solution of an Euler run from its
/// output directory.
pub fn load_euler_run(
    dir: &Path,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<(FieldTriple, PhysicalSolution), CliError> {
    let bad = |msg: String| CliError::Verification(format!("{}: {msg}", dir.display()));
    let diag: EulerDiagnostics = read_json(&dir.join("diagnostics.json"))?;
    if diag.gamma != gc.gamma {
        return Err(bad(format!("solution was computed with gamma = {}", diag.gamma)));
    }
    let grid = diag.grid.grid().map_err(|e| bad(e.to_string()))?;
    let table = read_solution_csv(&dir.join("solution.csv"))?;
    if table.rows() != grid.len() {
        return Err(bad(format!("{} rows for a grid of {} nodes", table.rows(), grid.len())));
    }
    for j in 0..grid.levels() {
        for i in 0..grid.nr {
            let k = grid.index(j, i);
            let (t, r) = (table.column("t")[k], table.column("r")[k]);
            if (t - grid.t(j)).abs() > 1e-12 || (r - grid.r(j, i)).abs() > 1e-12 {
                return Err(bad(format!("row {} is not grid node ({j}, {i})", k + 2)));
            }
        }
    }
    let col = |n: &str| table.column(n).to_vec();
    let fields = FieldTriple {
        grid,
        f: [col("U"), col("V"), col("W")],
    };
    let mut phys = assemble_physical(&fields, hb, gc, [col("x"), col("y"), col("S"), col("B")])
        .map_err(|e| bad(e.to_string()))?;
    phys.theta = col("theta");
    phys.omega = col("omega");
    phys.alpha = (0..phys.len()).map(|k| phys.theta[k] + phys.omega[k]).collect();
    phys.beta = (0..phys.len()).map(|k| phys.theta[k] - phys.omega[k]).collect();
    phys.c = col("c");
    phys.u = col("u");
    phys.v = col("v");
    phys.rho = col("rho");
    phys.p = col("p");
    phys.e = col("E");
    Ok((fields, phys))
}

fn run_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let res = cfg.resolved();
    let vs = cfg
        .verify
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [verify] section".into()))?;
    let gc = gas(cfg)?;
    let (_, _, hb) = hodograph_boundary(cfg, &gc)?;
    let (fields, phys) = load_euler_run(&vs.solution_dir, &hb, &gc)?;
    let fine = euler_residuals(&fields, &hb, &gc, &phys)?;
    let coarse = match &vs.coarse_dir {
        Some(dir) => {
            let (cf, cp) = load_euler_run(dir, &hb, &gc)?;
            Some(euler_residuals(&cf, &hb, &gc, &cp)?)
        }
        None => None,
    };
    let mut failures = Vec::new();
    let mut residuals = Vec::new();
    for (k, (name, rep)) in fine.iter().enumerate() {
        let (rep, order) = match &coarse {
            Some(c) => (
                ResidualReport::with_orders(&c[k].1, rep),
                Some(ResidualReport::order_of_max(&c[k].1, rep)),
            ),
            None => (rep.clone(), None),
        };
        if !rep.max_abs().is_finite() {
            failures.push(format!("{name}: non-finite residual"));
        }
        if let Some(limit) = vs.max_residual {
            if rep.max_abs() > limit {
                failures.push(format!("{name}: residual {:e} above {limit:e}", rep.max_abs()));
            }
        }
        if let (Some(min), Some(o)) = (vs.min_order, order) {
            if !(o >= min) {
                failures.push(format!("{name}: order {o:.3} below {min}"));
            }
        }
        residuals.push(ResidualJson::new(name, &rep, order));
    }
    let entropy = entropy_consistency(&phys);
    let bernoulli = bernoulli_consistency(&phys);
    if !(entropy <= IDENTITY_TOLERANCE) {
        failures.push(format!("entropy identity off by {entropy:e}"));
    }
    if !(bernoulli <= IDENTITY_TOLERANCE) {
        failures.push(format!("Bernoulli identity off by {bernoulli:e}"));
    }
    let doc = ResidualsDocument {
        solution_dir: vs.solution_dir.display().to_string(),
        coarse_dir: vs.coarse_dir.as_ref().map(|d| d.display().to_string()),
        residuals,
        entropy_consistency: entropy,
        bernoulli_consistency: bernoulli,
        passed: failures.is_empty(),
        failures: failures.clone(),
    };
    prepare_dir(&res.out_dir)?;
    let path = res.out_dir.join("residuals.json");
    write_json(&path, &doc)?;
    if !failures.is_empty() {
        return Err(CliError::Verification(failures.join("; ")));
    }
    Ok(Outcome {
        files: vec![path],
        summary: "verify: all checks passed".into(),
    })
}
