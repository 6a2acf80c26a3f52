//! Local Search, Modified Local Search and Straight Descent, plus the
//! coupled SD/MLS run used to compare their trajectories.

mod coupled;
mod descent;
mod local;
mod state;
mod trace;

pub use coupled::coupled_run;
pub use descent::{straight_descent, uniformity_probe, DescentProcess, UniformityTable, MAX_PROBE_VARS};
pub use local::{default_ls_budget, default_mls_budget, local_search, modified_local_search};
pub use state::{IndexedSet, SearchState};
pub use trace::{CoupledTrace, RunTrace, SolverKind, Status, Step, TraceLevel};

use crate::cnf::{Assignment, Formula};
use crate::error::Result;
use crate::seed::Seed;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// `None` selects the per-solver default budget.
    pub step_budget: Option<u64>,
    pub trace: TraceLevel,
    /// Re-derive votes and the improving set from scratch every `k` flips
    /// and fail with an invariant error on divergence.
    pub verify_every: Option<u64>,
}

pub fn run(
    kind: SolverKind,
    f: &Formula,
    initial: Option<Assignment>,
    seed: Seed,
    opts: &RunOptions,
) -> Result<RunTrace> {
    match kind {
        SolverKind::Ls => local_search(f, initial, seed, opts),
        SolverKind::Mls => modified_local_search(f, initial, seed, opts),
        SolverKind::Sd => straight_descent(f, initial, seed, opts),
    }
}
