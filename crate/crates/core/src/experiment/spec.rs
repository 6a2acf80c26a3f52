use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cnf::Assignment;
use crate::error::{Error, Result};
use crate::generate::{clauses_for_density, density_for_kappa, random_assignment, Mode};
use crate::seed::{mix, Purpose, Seed};
use crate::solver::{SolverKind, MAX_PROBE_VARS};

/// κ values bracketing the threshold 7/6.
pub const DEFAULT_KAPPA_GRID: [f64; 7] = [0.6, 0.8, 1.0, 7.0 / 6.0, 1.4, 1.7, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    TransitionSweep,
    SdRuntime,
    SdUniformity,
    ZeroFlood,
    MinimaGeometry,
    StructureCensus,
    ApproxGap,
    CoupledDistance,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::TransitionSweep,
        ExperimentKind::SdRuntime,
        ExperimentKind::SdUniformity,
        ExperimentKind::ZeroFlood,
        ExperimentKind::MinimaGeometry,
        ExperimentKind::StructureCensus,
        ExperimentKind::ApproxGap,
        ExperimentKind::CoupledDistance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::TransitionSweep => "transition_sweep",
            ExperimentKind::SdRuntime => "sd_runtime",
            ExperimentKind::SdUniformity => "sd_uniformity",
            ExperimentKind::ZeroFlood => "zero_flood",
            ExperimentKind::MinimaGeometry => "minima_geometry",
            ExperimentKind::StructureCensus => "structure_census",
            ExperimentKind::ApproxGap => "approx_gap",
            ExperimentKind::CoupledDistance => "coupled_distance",
        }
    }

    /// Whether cells carry a formula (and hence a density grid).
    pub fn uses_formula(self) -> bool {
        !matches!(self, ExperimentKind::SdRuntime | ExperimentKind::SdUniformity)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    /// One JSON object per line.
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidSpec(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    #[default]
    Random,
    AllOnes,
    AllZeros,
}

impl InitialKind {
    pub fn draw(self, n: usize, seed: Seed) -> Assignment {
        match self {
            InitialKind::Random => random_assignment(n, &mut seed.rng_for(Purpose::Initial)),
            InitialKind::AllOnes => Assignment::all_ones(n),
            InitialKind::AllZeros => Assignment::all_zeros(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Kappa(f64),
    Rho(f64),
}

impl Density {
    pub fn clauses(self, n: usize) -> usize {
        match self {
            Density::Kappa(k) => density_for_kappa(n, k),
            Density::Rho(r) => clauses_for_density(n, r),
        }
    }
}

fn default_mode() -> Mode {
    Mode::Planted
}

fn default_samples() -> usize {
    1000
}

fn default_min_expected() -> f64 {
    5.0
}

fn default_d1() -> usize {
    1
}

fn default_d2() -> usize {
    2
}

/// A sweep over `n` × density cells with `trials` seeded trials per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub n: Vec<usize>,
    /// `m = round(κ n ln n)`. Defaults to [`DEFAULT_KAPPA_GRID`] when neither
    /// grid is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
    /// `m = round(ρ n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<f64>>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    /// Defaults to LS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverKind>,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Worker threads; `None` uses all cores. Output does not depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_budget: Option<u64>,
    #[serde(default)]
    pub initial: InitialKind,

    /// zero_flood: zero fractions of the two assignment batches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    /// zero_flood: assignments per batch.
    #[serde(default = "default_samples")]
    pub samples: usize,

    /// sd_uniformity: initial number of ones, probe horizon and runs per
    /// repetition. Each trial is one repetition with its own chi-square.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_trials: Option<u64>,
    #[serde(default = "default_min_expected")]
    pub min_expected: f64,

    /// structure_census: isolation level and pair distance.
    #[serde(default = "default_d1")]
    pub d1: usize,
    #[serde(default = "default_d2")]
    pub d2: usize,
}

/// One `(n, density)` grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub density: Option<Density>,
    pub m: usize,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, n: Vec<usize>, trials: usize) -> Self {
        ExperimentSpec {
            kind,
            n,
            kappa: None,
            rho: None,
            mode: Mode::Planted,
            solver: None,
            trials,
            base_seed: 0,
            output: None,
            format: OutputFormat::Csv,
            threads: None,
            step_budget: None,
            initial: InitialKind::Random,
            q0: None,
            q1: None,
            samples: default_samples(),
            m0: None,
            t: None,
            probe_trials: None,
            min_expected: default_min_expected(),
            d1: default_d1(),
            d2: default_d2(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("experiment config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn solver_kind(&self) -> SolverKind {
        self.solver.unwrap_or(SolverKind::Ls)
    }

    fn densities(&self) -> Result<Vec<Density>> {
        match (&self.kappa, &self.rho) {
            (Some(_), Some(_)) => Err(Error::InvalidSpec(
                "give at most one of the kappa and rho grids".into(),
            )),
            (Some(k), None) => Ok(k.iter().map(|&x| Density::Kappa(x)).collect()),
            (None, Some(r)) => Ok(r.iter().map(|&x| Density::Rho(x)).collect()),
            (None, None) => Ok(DEFAULT_KAPPA_GRID.iter().map(|&x| Density::Kappa(x)).collect()),
        }
    }

    fn invalid<T>(&self, msg: impl fmt::Display) -> Result<T> {
        Err(Error::InvalidSpec(format!("{}: {msg}", self.kind)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            return self.invalid("n grid is empty");
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 3) {
            return Err(Error::TooFewVariables(n));
        }
        if self.trials == 0 {
            return self.invalid("trials must be at least 1");
        }
        if self.threads == Some(0) {
            return self.invalid("threads must be at least 1");
        }
        if self.kind.uses_formula() {
            let grid = self.densities()?;
            if grid.is_empty() {
                return self.invalid("density grid is empty");
            }
            if grid.iter().any(|d| match *d {
                Density::Kappa(x) | Density::Rho(x) => !(x.is_finite() && x >= 0.0),
            }) {
                return self.invalid("densities must be finite and >= 0");
            }
        }
        let planted_only = matches!(
            self.kind,
            ExperimentKind::TransitionSweep
                | ExperimentKind::ZeroFlood
                | ExperimentKind::MinimaGeometry
                | ExperimentKind::CoupledDistance
        );
        if planted_only && self.mode != Mode::Planted {
            return self.invalid("needs planted mode");
        }
        match self.kind {
            ExperimentKind::ZeroFlood => {
                let (Some(q0), Some(q1)) = (self.q0, self.q1) else {
                    return self.invalid("q0 and q1 are required");
                };
                if !(0.0..=1.0).contains(&q0) || !(0.0..=1.0).contains(&q1) {
                    return self.invalid("q0 and q1 must lie in [0, 1]");
                }
                if q0 >= q1 {
                    return self.invalid("q0 must be smaller than q1");
                }
                if self.samples == 0 {
                    return self.invalid("samples must be at least 1");
                }
            }
            ExperimentKind::SdUniformity => {
                let (Some(m0), Some(_), Some(runs)) = (self.m0, self.t, self.probe_trials) else {
                    return self.invalid("m0, t and probe_trials are required");
                };
                if runs == 0 {
                    return self.invalid("probe_trials must be at least 1");
                }
                for &n in &self.n {
                    if n > MAX_PROBE_VARS {
                        return Err(Error::SizeGuard {
                            n,
                            limit: MAX_PROBE_VARS,
                        });
                    }
                    if m0 > n {
                        return self.invalid(format!("m0 = {m0} exceeds n = {n}"));
                    }
                }
            }
            ExperimentKind::MinimaGeometry if self.solver_kind() == SolverKind::Sd => {
                return self.invalid("solver must be ls or mls");
            }
            ExperimentKind::ApproxGap if self.rho.is_none() => {
                return self.invalid("needs a constant-density rho grid");
            }
            _ => {}
        }
        Ok(())
    }

    /// Cells in output order: `n` outer, density inner.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        self.validate()?;
        let mut out = Vec::new();
        for &n in &self.n {
            if self.kind.uses_formula() {
                for d in self.densities()? {
                    out.push(Cell {
                        index: out.len(),
                        n,
                        density: Some(d),
                        m: d.clauses(n),
                    });
                }
            } else {
                out.push(Cell {
                    index: out.len(),
                    n,
                    density: None,
                    m: 0,
                });
            }
        }
        Ok(out)
    }

    /// Seed of trial `trial` in cell `cell`.
    pub fn trial_seed(&self, cell: usize, trial: usize) -> Seed {
        Seed::new(mix(self.base_seed, cell as u64), trial as u64)
    }
}
