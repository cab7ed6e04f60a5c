//! Run configuration, read from a TOML document.
//!
//! ```toml
//! kind = "euler"            # euler | tricomi | verify
//!
//! [gas]
//! gamma = 1.4
//!
//! [boundary]                # either a built-in case ...
//! case = "smoke"            # smoke | pressure | polynomial
//!
//! # ... or explicit data on [x1, x2]
//! # x1 = 0.0
//! # x2 = 0.3
//! # phi = { poly = [0.0, 1.0] }
//! # rho = { poly = [1.4] }
//! # u = { table = { x = [0.0, 0.075, 0.15, 0.225, 0.3], f = [1.0, 0.925, 0.85, 0.775, 0.7] } }
//!
//! [grid]
//! delta = 0.1
//! nt = 64
//! nr = 65
//!
//! [solver]
//! tol = 1e-10
//! max_iter = 50
//! max_halvings = 6
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sonic_core::{BoundaryFunction, SonicBoundaryData};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Euler,
    Tricomi,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EulerCase {
    Smoke,
    Pressure,
    Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TricomiCase {
    Exact1,
    Exact2,
    Zero,
}

/// A boundary function: polynomial coefficients (lowest degree first) or a
/// table on uniform nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    Poly(Vec<f64>),
    Table { x: Vec<f64>, f: Vec<f64> },
}

impl FunctionSpec {
    pub fn build(&self, name: &str) -> Result<BoundaryFunction, CliError> {
        match self {
            FunctionSpec::Poly(c) if c.is_empty() => Err(CliError::Config(format!("{name}: empty coefficient list"))),
            FunctionSpec::Poly(c) => Ok(BoundaryFunction::Poly(c.clone())),
            FunctionSpec::Table { x, f } => BoundaryFunction::table(x.clone(), f.clone())
                .map_err(|e| CliError::Config(format!("{name}: {e}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    pub gamma: f64,
}

impl Default for GasSection {
    fn default() -> Self {
        GasSection { gamma: 1.4 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<EulerCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<FunctionSpec>,
}

impl BoundarySection {
    pub fn data(&self) -> Result<SonicBoundaryData, CliError> {
        let explicit = [&self.phi, &self.rho, &self.u, &self.v, &self.p];
        if let Some(case) = self.case {
            if self.x1.is_some() || self.x2.is_some() || explicit.iter().any(|f| f.is_some()) {
                return Err(CliError::Config("boundary: give either `case` or explicit data, not both".into()));
            }
            return Ok(match case {
                EulerCase::Smoke => sonic_core::cases::smoke(0.6),
                EulerCase::Pressure => sonic_core::cases::pressure(),
                EulerCase::Polynomial => sonic_core::cases::polynomial(),
            });
        }
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Config(format!("boundary.{name} is missing")));
        let func = |f: &Option<FunctionSpec>, name: &str| {
            f.as_ref()
                .ok_or_else(|| CliError::Config(format!("boundary.{name} is missing")))?
                .build(&format!("boundary.{name}"))
        };
        let (x1, x2) = (need(self.x1, "x1")?, need(self.x2, "x2")?);
        if !(x1 < x2) {
            return Err(CliError::Config(format!("boundary: need x1 < x2, got [{x1}, {x2}]")));
        }
        Ok(SonicBoundaryData {
            x1,
            x2,
            phi: func(&self.phi, "phi")?,
            rho: func(&self.rho, "rho")?,
            u: func(&self.u, "u")?,
            v: func(&self.v, "v")?,
            p: func(&self.p, "p")?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TricomiSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<TricomiCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u1: Option<FunctionSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Number of `t`-steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nt: Option<usize>,
    /// Nodes per `t`-level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nr: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Number of times `delta` may be halved (Euler only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_halvings: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Inputs of the `verify` kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Directory holding `solution.csv` and `diagnostics.json` of an Euler run.
    pub solution_dir: PathBuf,
    /// Optional coarser run of the same problem; enables order estimates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_dir: Option<PathBuf>,
    /// Fail when any residual exceeds this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    /// Fail when an operator's observed order falls below this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: Kind,
    #[serde(default)]
    pub gas: GasSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tricomi: Option<TricomiSection>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
}

/// Grid and solver settings after defaults are filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub delta: f64,
    pub nt: usize,
    pub nr: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub out_dir: PathBuf,
}

/// Command-line overrides applied on top of a file or a named case.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub grid: Option<(usize, usize)>,
    pub delta: Option<f64>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Configuration of a named built-in case: `exact1`, `exact2`, `zero`
    /// (Tricomi) or `smoke`, `pressure`, `polynomial` (Euler).
    pub fn for_case(name: &str) -> Result<Self, CliError> {
        let tricomi = |case| RunConfig {
            kind: Kind::Tricomi,
            tricomi: Some(TricomiSection {
                case: Some(case),
                ..Default::default()
            }),
            ..Self::empty(Kind::Tricomi)
        };
        let euler = |case| RunConfig {
            boundary: Some(BoundarySection {
                case: Some(case),
                ..Default::default()
            }),
            ..Self::empty(Kind::Euler)
        };
        Ok(match name {
            "exact1" => tricomi(TricomiCase::Exact1),
            "exact2" => tricomi(TricomiCase::Exact2),
            "zero" => tricomi(TricomiCase::Zero),
            "smoke" => euler(EulerCase::Smoke),
            "pressure" => euler(EulerCase::Pressure),
            "polynomial" => euler(EulerCase::Polynomial),
            other => return Err(CliError::Config(format!("unknown case `{other}`"))),
        })
    }

    fn empty(kind: Kind) -> Self {
        RunConfig {
            kind,
            gas: GasSection::default(),
            boundary: None,
            tricomi: None,
            grid: GridSection::default(),
            solver: SolverSection::default(),
            output: OutputSection::default(),
            verify: None,
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(d) = &o.out_dir {
            self.output.dir = Some(d.clone());
        }
        if let Some(t) = o.tol {
            self.solver.tol = Some(t);
        }
        if let Some(m) = o.max_iter {
            self.solver.max_iter = Some(m);
        }
        if let Some((nt, nr)) = o.grid {
            self.grid.nt = Some(nt);
            self.grid.nr = Some(nr);
        }
        if let Some(d) = o.delta {
            self.grid.delta = Some(d);
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let g = self.gas.gamma;
        if !(g.is_finite() && g > 1.0) {
            return bad(format!("gas.gamma must be a finite number greater than 1, got {g}"));
        }
        if let Some(d) = self.grid.delta {
            if !(d > 0.0 && d < 1.0) {
                return bad(format!("grid.delta must lie in (0, 1), got {d}"));
            }
        }
        if let Some(nt) = self.grid.nt {
            if nt < 2 {
                return bad(format!("grid.nt must be at least 2, got {nt}"));
            }
        }
        if let Some(nr) = self.grid.nr {
            if nr < 5 {
                return bad(format!("grid.nr must be at least 5, got {nr}"));
            }
        }
        if let Some(t) = self.solver.tol {
            if !(t >= 0.0) {
                return bad(format!("solver.tol must be non-negative, got {t}"));
            }
        }
        if self.solver.max_iter == Some(0) {
            return bad("solver.max_iter must be at least 1".into());
        }
        match self.kind {
            Kind::Euler | Kind::Verify if self.boundary.is_none() => {
                return bad("a [boundary] section is required for euler and verify runs".into())
            }
            Kind::Tricomi if self.tricomi.is_none() => return bad("a [tricomi] section is required".into()),
            Kind::Verify if self.verify.is_none() => return bad("a [verify] section is required".into()),
            _ => {}
        }
        if let Some(b) = &self.boundary {
            b.data()?;
        }
        if let Some(t) = &self.tricomi {
            t.problem(0.4, 2, 5)?;
        }
        Ok(())
    }

    pub fn resolved(&self) -> Resolved {
        let tricomi = self.kind == Kind::Tricomi;
        Resolved {
            delta: self.grid.delta.unwrap_or(if tricomi { 0.4 } else { 0.1 }),
            nt: self.grid.nt.unwrap_or(64),
            nr: self.grid.nr.unwrap_or(if tricomi { 129 } else { 65 }),
            tol: self.solver.tol.unwrap_or(if tricomi { 1e-12 } else { 1e-10 }),
            max_iter: self.solver.max_iter.unwrap_or(if tricomi { 100 } else { 50 }),
            max_halvings: self.solver.max_halvings.unwrap_or(6),
            out_dir: self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out")),
        }
    }
}

impl TricomiSection {
    pub fn problem(&self, delta: f64, nt: usize, nr: usize) -> Result<sonic_core::TricomiProblem, CliError> {
        use sonic_core::tricomi;
        if let Some(case) = self.case {
            if self.x1.is_some() || self.x2.is_some() || self.u0.is_some() || self.u1.is_some() {
                return Err(CliError::Config("tricomi: give either `case` or explicit data, not both".into()));
            }
            return Ok(match case {
                TricomiCase::Exact1 => tricomi::exact1(delta, nt, nr),
                TricomiCase::Exact2 => tricomi::exact2(delta, nt, nr),
                TricomiCase::Zero => tricomi::zero(delta, nt, nr),
            });
        }
        let missing = |name: &str| CliError::Config(format!("tricomi.{name} is missing"));
        Ok(sonic_core::TricomiProblem {
            x1: self.x1.ok_or_else(|| missing("x1"))?,
            x2: self.x2.ok_or_else(|| missing("x2"))?,
            u0: self.u0.as_ref().ok_or_else(|| missing("u0"))?.build("tricomi.u0")?,
            u1: self.u1.as_ref().ok_or_else(|| missing("u1"))?.build("tricomi.u1")?,
            delta,
            nt,
            nr,
        })
    }

    pub fn exact_case(&self) -> Option<sonic_core::tricomi::ExactCase> {
        use sonic_core::tricomi::ExactCase;
        self.case.map(|c| match c {
            TricomiCase::Exact1 => ExactCase::Quadratic,
            TricomiCase::Exact2 => ExactCase::Quartic,
            TricomiCase::Zero => ExactCase::Zero,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_cases_pick_the_kind() {
        assert_eq!(RunConfig::for_case("exact1").unwrap().kind, Kind::Tricomi);
        assert_eq!(RunConfig::for_case("pressure").unwrap().kind, Kind::Euler);
        assert!(RunConfig::for_case("nope").is_err());
    }

    #[test]
    fn mixing_case_and_data_is_rejected() {
        let text = "kind = \"euler\"\n[boundary]\ncase = \"smoke\"\nx1 = 0.0\n";
        assert!(RunConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn defaults_depend_on_kind() {
        let r = RunConfig::for_case("exact1").unwrap().resolved();
        assert_eq!((r.delta, r.nt, r.nr), (0.4, 64, 129));
        let r = RunConfig::for_case("smoke").unwrap().resolved();
        assert_eq!((r.delta, r.nt, r.nr, r.tol), (0.1, 64, 65, 1e-10));
    }

    #[test]
    fn explicit_config_survives_a_toml_round_trip() {
        let text = "kind = \"euler\"\n[gas]\ngamma = 1.3\n[boundary]\nx1 = 0.0\nx2 = 0.3\n\
                    phi = { poly = [0.0, 1.0] }\nrho = { poly = [1.4] }\n\
                    u = { table = { x = [0.0, 0.075, 0.15, 0.225, 0.3], f = [1.0, 0.925, 0.85, 0.775, 0.7] } }\n\
                    v = { poly = [0.0, -0.5] }\np = { poly = [1.0] }\n[grid]\nnt = 16\n[output]\ndir = \"o\"\n";
        let cfg = RunConfig::from_toml_str(text).unwrap();
        let again = RunConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(again.resolved().nt, 16);
        assert_eq!(again.resolved().out_dir, PathBuf::from("o"));
    }
}
