use serde_json::Value;

use super::spec::{Density, ExperimentKind, OutputFormat};
use crate::generate::Mode;
use crate::solver::Status;

/// Per-kind measurements of one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Transition(RunOutcome),
    SdRuntime {
        initial_ones: usize,
        steps: u64,
        flips: u64,
        /// `2 n ln n`.
        bound: f64,
        within_bound: bool,
    },
    SdUniformity {
        m0: usize,
        t: u64,
        runs: u64,
        statistic: f64,
        df: usize,
        p_value: f64,
        classes: usize,
    },
    ZeroFlood {
        zeros_q0: usize,
        zeros_q1: usize,
        min_sat_q0: usize,
        max_sat_q1: usize,
        separated: bool,
    },
    MinimaGeometry(RunOutcome),
    Census {
        caps: usize,
        crowns: usize,
        max_degree: usize,
        d1: usize,
        d2: usize,
        isolation_pairs: usize,
    },
    ApproxGap {
        crowns: usize,
        /// Crowns whose nine variables are all 0 initially.
        zero_crowns: usize,
        /// Of those, crowns whose central clause is unsatisfied at the end.
        trapped_crowns: usize,
        status: Status,
        final_unsat: usize,
        opt: Option<usize>,
        gap: Option<usize>,
    },
    Coupled {
        max_distance: u32,
        terminal_distance: u32,
        max_step_change: u32,
        shared_steps: u64,
        sd_steps: u64,
        ls_steps: u64,
        ls_status: Status,
        ls_final_unsat: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: Status,
    pub steps: u64,
    pub flips: u64,
    pub initial_unsat: usize,
    pub final_unsat: usize,
    pub final_ones: usize,
    /// Whether this record was re-checked against a from-scratch recount.
    pub verified: bool,
}

impl RunOutcome {
    pub fn success(&self) -> bool {
        self.final_unsat == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub kind: ExperimentKind,
    pub cell: usize,
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub density: Option<Density>,
    pub mode: Mode,
    pub seed: u64,
    pub outcome: Outcome,
}

const COMMON: [&str; 8] = ["cell", "trial", "n", "m", "kappa", "rho", "mode", "seed"];

const RUN_COLUMNS: [&str; 8] = [
    "status",
    "steps",
    "flips",
    "initial_unsat",
    "final_unsat",
    "final_ones",
    "success",
    "verified",
];

fn outcome_columns(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::TransitionSweep | ExperimentKind::MinimaGeometry => &RUN_COLUMNS,
        ExperimentKind::SdRuntime => &["initial_ones", "steps", "flips", "bound", "within_bound"],
        ExperimentKind::SdUniformity => {
            &["m0", "t", "runs", "statistic", "df", "p_value", "classes"]
        }
        ExperimentKind::ZeroFlood => &[
            "zeros_q0",
            "zeros_q1",
            "min_sat_q0",
            "max_sat_q1",
            "separated",
        ],
        ExperimentKind::StructureCensus => &[
            "caps",
            "crowns",
            "max_degree",
            "d1",
            "d2",
            "isolation_pairs",
        ],
        ExperimentKind::ApproxGap => &[
            "crowns",
            "zero_crowns",
            "trapped_crowns",
            "status",
            "final_unsat",
            "opt",
            "gap",
        ],
        ExperimentKind::CoupledDistance => &[
            "max_distance",
            "terminal_distance",
            "max_step_change",
            "shared_steps",
            "sd_steps",
            "ls_steps",
            "ls_status",
            "ls_final_unsat",
        ],
    }
}

/// Column names of the output for `kind`, in order.
pub fn columns(kind: ExperimentKind) -> Vec<&'static str> {
    COMMON.iter().chain(outcome_columns(kind)).copied().collect()
}

fn status(s: Status) -> Value {
    Value::from(s.as_str())
}

fn opt(x: Option<usize>) -> Value {
    x.map_or(Value::Null, Value::from)
}

fn run_values(r: &RunOutcome) -> Vec<Value> {
    vec![
        status(r.status),
        r.steps.into(),
        r.flips.into(),
        r.initial_unsat.into(),
        r.final_unsat.into(),
        r.final_ones.into(),
        r.success().into(),
        r.verified.into(),
    ]
}

impl Outcome {
    fn values(&self) -> Vec<Value> {
        match self {
            Outcome::Transition(r) | Outcome::MinimaGeometry(r) => run_values(r),
            Outcome::SdRuntime {
                initial_ones,
                steps,
                flips,
                bound,
                within_bound,
            } => vec![
                (*initial_ones).into(),
                (*steps).into(),
                (*flips).into(),
                (*bound).into(),
                (*within_bound).into(),
            ],
            Outcome::SdUniformity {
                m0,
                t,
                runs,
                statistic,
                df,
                p_value,
                classes,
            } => vec![
                (*m0).into(),
                (*t).into(),
                (*runs).into(),
                (*statistic).into(),
                (*df).into(),
                (*p_value).into(),
                (*classes).into(),
            ],
            Outcome::ZeroFlood {
                zeros_q0,
                zeros_q1,
                min_sat_q0,
                max_sat_q1,
                separated,
            } => vec![
                (*zeros_q0).into(),
                (*zeros_q1).into(),
                (*min_sat_q0).into(),
                (*max_sat_q1).into(),
                (*separated).into(),
            ],
            Outcome::Census {
                caps,
                crowns,
                max_degree,
                d1,
                d2,
                isolation_pairs,
            } => vec![
                (*caps).into(),
                (*crowns).into(),
                (*max_degree).into(),
                (*d1).into(),
                (*d2).into(),
                (*isolation_pairs).into(),
            ],
            Outcome::ApproxGap {
                crowns,
                zero_crowns,
                trapped_crowns,
                status: s,
                final_unsat,
                opt: o,
                gap,
            } => vec![
                (*crowns).into(),
                (*zero_crowns).into(),
                (*trapped_crowns).into(),
                status(*s),
                (*final_unsat).into(),
                opt(*o),
                opt(*gap),
            ],
            Outcome::Coupled {
                max_distance,
                terminal_distance,
                max_step_change,
                shared_steps,
                sd_steps,
                ls_steps,
                ls_status,
                ls_final_unsat,
            } => vec![
                (*max_distance).into(),
                (*terminal_distance).into(),
                (*max_step_change).into(),
                (*shared_steps).into(),
                (*sd_steps).into(),
                (*ls_steps).into(),
                status(*ls_status),
                (*ls_final_unsat).into(),
            ],
        }
    }
}

impl ExperimentRecord {
    /// `(column, value)` pairs in column order; both output formats are
    /// rendered from this.
    pub fn fields(&self) -> Vec<(&'static str, Value)> {
        let (kappa, rho) = match self.density {
            Some(Density::Kappa(k)) => (Value::from(k), Value::Null),
            Some(Density::Rho(r)) => (Value::Null, Value::from(r)),
            None => (Value::Null, Value::Null),
        };
        let common = vec![
            self.cell.into(),
            self.trial.into(),
            self.n.into(),
            self.m.into(),
            kappa,
            rho,
            Value::from(self.mode.to_string()),
            self.seed.into(),
        ];
        columns(self.kind)
            .into_iter()
            .zip(common.into_iter().chain(self.outcome.values()))
            .collect()
    }

    /// Value of one column, as `f64` (booleans as 0/1); `None` when the
    /// column is absent, null or a string.
    pub fn number(&self, column: &str) -> Option<f64> {
        self.fields()
            .into_iter()
            .find(|(c, _)| *c == column)
            .and_then(|(_, v)| match v {
                Value::Bool(b) => Some(b as u8 as f64),
                Value::Number(x) => x.as_f64(),
                _ => None,
            })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self
                .fields()
                .iter()
                .map(|(_, v)| csv_cell(v))
                .collect::<Vec<_>>()
                .join(","),
            OutputFormat::Json => {
                let body: Vec<String> = self
                    .fields()
                    .iter()
                    .map(|(c, v)| format!("\"{c}\":{v}"))
                    .collect();
                format!("{{{}}}", body.join(","))
            }
        }
    }
}

/// Floats use 17 significant digits; integers are written exactly.
fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(x) if x.is_f64() => format!("{:.16e}", x.as_f64().expect("f64")),
        Value::Number(x) => x.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn csv_header(kind: ExperimentKind) -> String {
    columns(kind).join(",")
}
