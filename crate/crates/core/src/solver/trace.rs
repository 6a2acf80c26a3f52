use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cnf::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Local Search: flip a uniformly random improving variable.
    Ls,
    /// Modified Local Search: pick any variable, flip it if that improves.
    Mls,
    /// Straight Descent: pick any variable, set it to 1.
    Sd,
}

impl std::str::FromStr for SolverKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ls" => Ok(SolverKind::Ls),
            "mls" => Ok(SolverKind::Mls),
            "sd" => Ok(SolverKind::Sd),
            other => Err(crate::Error::InvalidSpec(format!("unknown solver {other:?}"))),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Ls => "ls",
            SolverKind::Mls => "mls",
            SolverKind::Sd => "sd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Satisfied,
    ProperLocalMinimum,
    StepBudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::ProperLocalMinimum => "proper_local_minimum",
            Status::StepBudgetExhausted => "step_budget_exhausted",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TraceLevel {
    /// Counters and status only.
    #[default]
    Compact,
    /// Every considered step.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub index: u64,
    pub var: usize,
    pub flipped: bool,
    /// `votes_to_one - votes_to_zero` for `var` when it was considered.
    /// Straight Descent never reads the formula, so it records `None`.
    pub righteous_margin: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub kind: SolverKind,
    pub initial: Assignment,
    pub steps: Vec<Step>,
    pub final_assignment: Assignment,
    pub status: Status,
    /// Considered variables (LS: flips; MLS and SD: all picks).
    pub steps_taken: u64,
    pub flips: u64,
    pub initial_unsat: usize,
    pub final_unsat: usize,
}

impl RunTrace {
    /// Number of variables that were considered at least once while less
    /// than `d`-righteous. Requires a full trace.
    pub fn not_playing_righteously(&self, d: i64) -> usize {
        let mut bad = vec![false; self.initial.len()];
        for s in &self.steps {
            if let Some(margin) = s.righteous_margin {
                if margin < d {
                    bad[s.var] = true;
                }
            }
        }
        bad.into_iter().filter(|&b| b).count()
    }

    pub fn to_json(&self, level: TraceLevel) -> Value {
        let mut v = json!({
            "kind": self.kind,
            "status": self.status,
            "steps_taken": self.steps_taken,
            "flips": self.flips,
            "initial_unsat": self.initial_unsat,
            "final_unsat": self.final_unsat,
            "final_ones": self.final_assignment.ones(),
        });
        if level == TraceLevel::Full {
            v["initial"] = json!(self.initial.to_string());
            v["final"] = json!(self.final_assignment.to_string());
            v["steps"] = serde_json::to_value(&self.steps).expect("serializable");
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledTrace {
    /// Hamming distance after each shared step; empty in compact mode.
    pub distances: Vec<u32>,
    pub max_distance: u32,
    pub terminal_distance: u32,
    /// Largest absolute change of the distance over one shared step.
    pub max_step_change: u32,
    pub shared_steps: u64,
    /// Shared step at which SD reached all-ones.
    pub sd_steps: u64,
    /// Shared step at which the local search side stopped.
    pub ls_steps: u64,
    pub ls_flips: u64,
    pub ls_status: Status,
    pub ls_final_unsat: usize,
}
