use rand::Rng as _;

use super::state::SearchState;
use super::trace::{RunTrace, SolverKind, Status, Step, TraceLevel};
use super::RunOptions;
use crate::cnf::{Assignment, Formula};
use crate::error::{Error, Result};
use crate::generate::random_assignment;
use crate::seed::{Purpose, Seed};

/// `m * n`. Every LS flip satisfies at least one more clause, so at most `m`
/// flips ever happen.
pub fn default_ls_budget(f: &Formula) -> u64 {
    (f.num_clauses() as u64) * (f.num_vars() as u64)
}

/// `ceil(4 n ln(n) (m + 1))` considered steps.
pub fn default_mls_budget(f: &Formula) -> u64 {
    let n = f.num_vars() as f64;
    (4.0 * n * n.ln() * (f.num_clauses() as f64 + 1.0)).ceil() as u64
}

pub(crate) fn resolve_initial(
    f: &Formula,
    initial: Option<Assignment>,
    seed: Seed,
) -> Result<Assignment> {
    match initial {
        Some(a) if a.len() != f.num_vars() => Err(Error::LengthMismatch {
            expected: f.num_vars(),
            got: a.len(),
        }),
        Some(a) => Ok(a),
        None => Ok(random_assignment(
            f.num_vars(),
            &mut seed.rng_for(Purpose::Initial),
        )),
    }
}

fn check(state: &SearchState<'_>, opts: &RunOptions, step: u64) -> Result<()> {
    if let Some(k) = opts.verify_every {
        if k > 0 && step.is_multiple_of(k) {
            state.check_consistency().map_err(Error::Invariant)?;
        }
    }
    Ok(())
}

fn finish(
    kind: SolverKind,
    initial: Assignment,
    initial_unsat: usize,
    state: SearchState<'_>,
    steps: Vec<Step>,
    steps_taken: u64,
    flips: u64,
) -> RunTrace {
    let status = if !state.improving().is_empty() {
        Status::StepBudgetExhausted
    } else if state.unsat() == 0 {
        Status::Satisfied
    } else {
        Status::ProperLocalMinimum
    };
    let final_unsat = state.unsat();
    RunTrace {
        kind,
        initial,
        steps,
        final_assignment: state.into_assignment(),
        status,
        steps_taken,
        flips,
        initial_unsat,
        final_unsat,
    }
}

/// Local Search: while the improving set is non-empty, flip a uniformly
/// random member of it.
pub fn local_search(
    f: &Formula,
    initial: Option<Assignment>,
    seed: Seed,
    opts: &RunOptions,
) -> Result<RunTrace> {
    let initial = resolve_initial(f, initial, seed)?;
    let budget = opts.step_budget.unwrap_or_else(|| default_ls_budget(f));
    let mut rng = seed.rng_for(Purpose::Solver);
    let mut state = SearchState::new(f, initial.clone());
    let initial_unsat = state.unsat();
    let mut steps = Vec::new();
    let mut taken = 0u64;
    check(&state, opts, 0)?;

    while !state.improving().is_empty() && taken < budget {
        let x = state.improving().sample(&mut rng);
        if opts.trace == TraceLevel::Full {
            steps.push(Step {
                index: taken,
                var: x,
                flipped: true,
                righteous_margin: Some(state.margin(x)),
            });
        }
        let before = state.unsat();
        state.flip(x);
        if state.unsat() >= before {
            return Err(Error::Invariant(format!(
                "flip of x{} did not decrease unsatisfied clauses ({} -> {})",
                x + 1,
                before,
                state.unsat()
            )));
        }
        taken += 1;
        check(&state, opts, taken)?;
    }
    Ok(finish(SolverKind::Ls, initial, initial_unsat, state, steps, taken, taken))
}

/// Modified Local Search: pick a uniformly random variable among all `n`;
/// flip it iff that strictly increases the number of satisfied clauses.
/// Stops once the improving set is empty.
pub fn modified_local_search(
    f: &Formula,
    initial: Option<Assignment>,
    seed: Seed,
    opts: &RunOptions,
) -> Result<RunTrace> {
    let initial = resolve_initial(f, initial, seed)?;
    let budget = opts.step_budget.unwrap_or_else(|| default_mls_budget(f));
    let n = f.num_vars();
    let mut rng = seed.rng_for(Purpose::Solver);
    let mut state = SearchState::new(f, initial.clone());
    let initial_unsat = state.unsat();
    let mut steps = Vec::new();
    let mut taken = 0u64;
    let mut flips = 0u64;
    check(&state, opts, 0)?;

    while !state.improving().is_empty() && taken < budget {
        let x = rng.gen_range(0..n);
        let flip = state.is_improving(x);
        if opts.trace == TraceLevel::Full {
            steps.push(Step {
                index: taken,
                var: x,
                flipped: flip,
                righteous_margin: Some(state.margin(x)),
            });
        }
        if flip {
            let before = state.unsat();
            state.flip(x);
            if state.unsat() >= before {
                return Err(Error::Invariant(format!(
                    "flip of x{} did not decrease unsatisfied clauses",
                    x + 1
                )));
            }
            flips += 1;
        }
        taken += 1;
        if flip {
            check(&state, opts, flips)?;
        }
    }
    Ok(finish(SolverKind::Mls, initial, initial_unsat, state, steps, taken, flips))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> RunOptions {
        RunOptions {
            trace: TraceLevel::Full,
            verify_every: Some(1),
            ..RunOptions::default()
        }
    }

    fn crown() -> Formula {
        Formula::from_dimacs_clauses(
            9,
            &[[1, 2, 3], [-1, 4, 5], [-2, 6, 7], [-3, 8, 9]],
        )
        .unwrap()
    }

    #[test]
    fn single_clause_one_flip() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        let t = local_search(&f, Some(Assignment::all_zeros(3)), Seed::single(1), &full()).unwrap();
        assert_eq!(t.flips, 1);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.status, Status::Satisfied);
        assert_eq!(t.steps[0].righteous_margin, Some(1));

        let t = modified_local_search(&f, Some(Assignment::all_zeros(3)), Seed::single(1), &full())
            .unwrap();
        assert_eq!(t.status, Status::Satisfied);
        assert_eq!(t.flips, 1);
        assert!(t.steps_taken >= 1);
    }

    #[test]
    fn crown_traps_both_searches() {
        let f = crown();
        for s in 0..10 {
            let t = local_search(&f, Some(Assignment::all_zeros(9)), Seed::single(s), &full())
                .unwrap();
            assert_eq!(t.flips, 0);
            assert_eq!(t.status, Status::ProperLocalMinimum);
            let t = modified_local_search(&f, Some(Assignment::all_zeros(9)), Seed::single(s), &full())
                .unwrap();
            assert_eq!(t.steps_taken, 0);
            assert_eq!(t.status, Status::ProperLocalMinimum);
        }
    }

    #[test]
    fn satisfying_initial_takes_no_steps() {
        let f = crown();
        let t = local_search(&f, Some(Assignment::all_ones(9)), Seed::single(0), &full()).unwrap();
        assert_eq!((t.steps_taken, t.status), (0, Status::Satisfied));
        let t = modified_local_search(&f, Some(Assignment::all_ones(9)), Seed::single(0), &full())
            .unwrap();
        assert_eq!((t.steps_taken, t.status), (0, Status::Satisfied));
    }

    #[test]
    fn budget_exhaustion_is_a_status() {
        let f = Formula::from_dimacs_clauses(4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4]]).unwrap();
        let opts = RunOptions {
            step_budget: Some(0),
            ..RunOptions::default()
        };
        let t = local_search(&f, Some(Assignment::all_zeros(4)), Seed::single(0), &opts).unwrap();
        assert_eq!(t.status, Status::StepBudgetExhausted);
        let t = modified_local_search(&f, Some(Assignment::all_zeros(4)), Seed::single(0), &opts)
            .unwrap();
        assert_eq!(t.status, Status::StepBudgetExhausted);
    }

    #[test]
    fn initial_length_checked() {
        let f = crown();
        assert!(local_search(&f, Some(Assignment::all_ones(8)), Seed::single(0), &full()).is_err());
    }

    #[test]
    fn random_initial_is_reproducible() {
        let f = crown();
        let a = local_search(&f, None, Seed::new(3, 9), &full()).unwrap();
        let b = local_search(&f, None, Seed::new(3, 9), &full()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn default_budgets() {
        let f = crown();
        assert_eq!(default_ls_budget(&f), 36);
        let expect = (4.0 * 9.0 * 9f64.ln() * 5.0).ceil() as u64;
        assert_eq!(default_mls_budget(&f), expect);
    }
}
