//! CSV tables and JSON reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! re-read table reproduces the computed values bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sonic_core::tricomi::TricomiRecovery;
use sonic_core::verify::ResidualReport;
use sonic_core::{IterationReport, LateralCurve, PhysicalSolution, ShearedGrid, TricomiField};

use crate::error::CliError;

pub const SOLUTION_HEADER: [&str; 17] = [
    "t", "r", "x", "y", "theta", "omega", "U", "V", "W", "S", "B", "c", "u", "v", "rho", "p", "E",
];

pub const TRICOMI_HEADER: [&str; 7] = ["x", "t", "y", "R", "S", "W", "u"];

fn write_table(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let csv_err = |e: csv::Error| CliError::Config(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:?}"))).map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| CliError::io(path, e.into_error()))?
        .flush()
        .map_err(|e| CliError::io(path, e))
}

pub fn write_solution_csv(path: &Path, phys: &PhysicalSolution) -> Result<(), CliError> {
    let rows = (0..phys.len()).map(|k| {
        vec![
            phys.t[k],
            phys.r[k],
            phys.x[k],
            phys.y[k],
            phys.theta[k],
            phys.omega[k],
            phys.err[0][k],
            phys.err[1][k],
            phys.err[2][k],
            phys.s[k],
            phys.b[k],
            phys.c[k],
            phys.u[k],
            phys.v[k],
            phys.rho[k],
            phys.p[k],
            phys.e[k],
        ]
    });
    write_table(path, &SOLUTION_HEADER, rows)
}

pub fn write_tricomi_csv(path: &Path, fields: &TricomiField, rec: &TricomiRecovery) -> Result<(), CliError> {
    let rows = (0..rec.u.len()).map(|k| {
        vec![
            rec.x[k],
            rec.t[k],
            rec.y[k],
            fields.f[0][k],
            fields.f[1][k],
            fields.f[2][k],
            rec.u[k],
        ]
    });
    write_table(path, &TRICOMI_HEADER, rows)
}

/// Columns of a `solution.csv`, keyed by header order.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionTable {
    pub columns: Vec<Vec<f64>>,
}

impl SolutionTable {
    pub fn column(&self, name: &str) -> &[f64] {
        let i = SOLUTION_HEADER.iter().position(|h| *h == name).expect("known column");
        &self.columns[i]
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }
}

pub fn read_solution_csv(path: &Path) -> Result<SolutionTable, CliError> {
    let bad = |msg: String| CliError::Verification(format!("{}: {msg}", path.display()));
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rd = csv::Reader::from_reader(std::io::BufReader::new(file));
    let header = rd.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(SOLUTION_HEADER.iter().copied()) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut columns = vec![Vec::new(); SOLUTION_HEADER.len()];
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| bad(format!("row {}: cannot parse `{field}`", line + 2)))?;
            columns[c].push(v);
        }
    }
    Ok(SolutionTable { columns })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Verification(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub base: f64,
    pub quadratic: f64,
    pub cubic: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub delta: f64,
    pub nt: usize,
    pub nr: usize,
    pub lower: CurveJson,
    pub upper: CurveJson,
}

impl GridJson {
    pub fn from_grid(g: &ShearedGrid) -> Self {
        let c = |l: &LateralCurve| CurveJson {
            base: l.base,
            quadratic: l.quadratic,
            cubic: l.cubic,
        };
        GridJson {
            delta: g.delta,
            nt: g.nt,
            nr: g.nr,
            lower: c(&g.lower),
            upper: c(&g.upper),
        }
    }

    pub fn grid(&self) -> Result<ShearedGrid, sonic_core::Error> {
        let c = |l: &CurveJson| LateralCurve {
            base: l.base,
            quadratic: l.quadratic,
            cubic: l.cubic,
        };
        ShearedGrid::new(self.delta, self.nt, self.nr, c(&self.lower), c(&self.upper))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepJson {
    pub distance: f64,
    pub ratio: Option<f64>,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationJson {
    pub iterations: usize,
    pub converged: bool,
    pub tol: f64,
    pub final_distance: Option<f64>,
    /// Contraction ratios from the second sweep on.
    pub ratios: Vec<f64>,
    pub sweeps: Vec<SweepJson>,
    pub max_norm: f64,
    pub norm_bound: f64,
    pub norm_bound_holds: bool,
}

impl IterationJson {
    pub fn from_report(r: &IterationReport) -> Self {
        IterationJson {
            iterations: r.iterations(),
            converged: r.converged,
            tol: r.tol,
            final_distance: r.final_distance(),
            ratios: r.ratios(),
            sweeps: r
                .sweeps
                .iter()
                .map(|s| SweepJson {
                    distance: s.distance,
                    ratio: s.ratio,
                    norm: s.norm,
                })
                .collect(),
            max_norm: r.max_norm(),
            norm_bound: r.norm_bound,
            norm_bound_holds: r.bound_holds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntryJson {
    pub name: String,
    pub max_abs: f64,
    pub h: f64,
    pub order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualJson {
    pub operator: String,
    pub max_abs: f64,
    /// Observed order of the largest entry against a coarser run.
    pub order: Option<f64>,
    pub entries: Vec<ResidualEntryJson>,
}

impl ResidualJson {
    pub fn new(operator: &str, rep: &ResidualReport, order: Option<f64>) -> Self {
        ResidualJson {
            operator: operator.into(),
            max_abs: rep.max_abs(),
            order,
            entries: rep
                .entries
                .iter()
                .map(|e| ResidualEntryJson {
                    name: e.name.clone(),
                    max_abs: e.max_abs,
                    h: e.h,
                    order: e.order,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptJson {
    pub delta: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobianJson {
    /// `j < 0` at every node with `t > 0`.
    pub negative_above_data_line: bool,
    pub max_j_above_data_line: f64,
    pub factor_min: f64,
    pub factor_max: f64,
    pub factor_sign_constant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    /// `q > c`, `rho > 0` and `p > 0` at every node with `t > 0`.
    pub supersonic_and_positive: bool,
    pub min_q_minus_c: f64,
    pub min_rho: f64,
    pub min_p: f64,
    /// Largest relative gap between `p rho^-gamma` and the transported `S`.
    pub entropy_consistency: f64,
    /// Largest `|(u^2 + v^2)/2 + c^2/(gamma - 1) - B|`.
    pub bernoulli_consistency: f64,
    /// Largest `|Ubar(0, r) + a0(r)|`.
    pub boundary_trace_error: f64,
    pub entropy_varies: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerDiagnostics {
    pub kind: String,
    pub gamma: f64,
    pub converged: bool,
    pub delta: f64,
    pub attempts: Vec<AttemptJson>,
    pub k_est: f64,
    pub m_est: f64,
    pub proof_delta: f64,
    pub strong_determinacy: bool,
    pub iteration: IterationJson,
    pub grid: GridJson,
    pub jacobian: JacobianJson,
    pub state: StateJson,
    pub residuals: Vec<ResidualJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TricomiDiagnostics {
    pub kind: String,
    pub converged: bool,
    pub delta: f64,
    pub k_est: f64,
    pub m_est: f64,
    pub fixed_point_residual: f64,
    pub iteration: IterationJson,
    pub grid: GridJson,
    /// Largest node error of `(R, S, W)` against the closed form, for
    /// built-in cases.
    pub max_field_error: Option<f64>,
    /// Largest error of the recovered `u`, for built-in cases.
    pub max_u_error: Option<f64>,
    pub residuals: Vec<ResidualJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionJson {
    pub name: String,
    pub worst_margin: f64,
    pub worst_value: f64,
    pub at_x: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySampleJson {
    pub r: f64,
    pub x_bar: f64,
    pub a0: f64,
    pub a1: f64,
    pub h0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub x1: f64,
    pub x2: f64,
    pub samples: usize,
    pub conditions: Vec<ConditionJson>,
    pub r1: f64,
    pub r2: f64,
    pub eps0: f64,
    pub h0_flat: bool,
    /// Largest relative gap between the closed form of the entropy-gradient
    /// datum and its definition route.
    pub h_hat_consistency: f64,
    pub hodograph_samples: Vec<BoundarySampleJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualsDocument {
    pub solution_dir: String,
    pub coarse_dir: Option<String>,
    pub residuals: Vec<ResidualJson>,
    pub entropy_consistency: f64,
    pub bernoulli_consistency: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}
