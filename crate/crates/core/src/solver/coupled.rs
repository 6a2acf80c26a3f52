//! Straight Descent and Modified Local Search driven by one shared stream of
//! uniform variable picks.

use rand::Rng as _;

use super::descent::DescentProcess;
use super::local::{default_mls_budget, resolve_initial};
use super::state::SearchState;
use super::trace::{CoupledTrace, Status, TraceLevel};
use super::RunOptions;
use crate::cnf::{Assignment, Formula};
use crate::error::{Error, Result};
use crate::seed::{Purpose, Seed};

pub fn coupled_run(
    f: &Formula,
    initial: Option<Assignment>,
    seed: Seed,
    opts: &RunOptions,
) -> Result<CoupledTrace> {
    let n = f.num_vars();
    if !f.is_satisfied_by(&Assignment::all_ones(n)) {
        return Err(Error::InvalidSpec(
            "coupled run needs a formula planted at all-ones".into(),
        ));
    }
    let initial = resolve_initial(f, initial, seed)?;
    let budget = opts.step_budget.unwrap_or_else(|| default_mls_budget(f));
    let mut rng = seed.rng_for(Purpose::Solver);
    let mut sd = DescentProcess::new(initial.clone());
    let mut ls = SearchState::new(f, initial);

    let mut distance = 0u32;
    let mut distances = Vec::new();
    let mut max_distance = 0u32;
    let mut max_step_change = 0u32;
    let mut step = 0u64;
    let mut sd_steps = 0u64;
    let mut ls_steps = 0u64;
    let mut ls_flips = 0u64;
    let mut sd_done = sd.is_done();
    let mut ls_done = ls.improving().is_empty();

    while !(sd_done && ls_done) && step < budget {
        let x = rng.gen_range(0..n);
        let differs_before = sd.values()[x] != ls.assignment()[x];
        if !sd_done {
            sd.apply(x);
        }
        if !ls_done && ls.is_improving(x) {
            ls.flip(x);
            ls_flips += 1;
        }
        step += 1;
        let differs_after = sd.values()[x] != ls.assignment()[x];
        let prev = distance;
        match (differs_before, differs_after) {
            (false, true) => distance += 1,
            (true, false) => distance -= 1,
            _ => {}
        }
        max_step_change = max_step_change.max(prev.abs_diff(distance));
        max_distance = max_distance.max(distance);
        if opts.trace == TraceLevel::Full {
            distances.push(distance);
        }
        if !sd_done && sd.is_done() {
            sd_done = true;
            sd_steps = step;
        }
        if !ls_done && ls.improving().is_empty() {
            ls_done = true;
            ls_steps = step;
        }
    }

    let ls_status = if !ls_done {
        ls_steps = step;
        Status::StepBudgetExhausted
    } else if ls.unsat() == 0 {
        Status::Satisfied
    } else {
        Status::ProperLocalMinimum
    };
    if !sd_done {
        sd_steps = step;
    }
    debug_assert_eq!(
        distance as usize,
        sd.values().hamming(ls.assignment()).expect("same length")
    );
    Ok(CoupledTrace {
        distances,
        max_distance,
        terminal_distance: distance,
        max_step_change,
        shared_steps: step,
        sd_steps,
        ls_steps,
        ls_flips,
        ls_status,
        ls_final_unsat: ls.unsat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{sample, GeneratorSpec};

    fn full() -> RunOptions {
        RunOptions {
            trace: TraceLevel::Full,
            ..RunOptions::default()
        }
    }

    #[test]
    fn all_ones_start_stays_at_zero_distance() {
        let f = sample(&GeneratorSpec::planted(30, 200), Seed::single(1)).unwrap();
        let c = coupled_run(&f, Some(Assignment::all_ones(30)), Seed::single(2), &full()).unwrap();
        assert_eq!(c.max_distance, 0);
        assert_eq!(c.shared_steps, 0);
        assert_eq!(c.ls_status, Status::Satisfied);
    }

    #[test]
    fn distance_moves_by_at_most_one() {
        for s in 0..40 {
            let f = sample(&GeneratorSpec::planted(40, 400), Seed::new(8, s)).unwrap();
            let c = coupled_run(&f, None, Seed::new(9, s), &full()).unwrap();
            assert!(c.max_step_change <= 1);
            let mut prev = 0u32;
            for &d in &c.distances {
                assert!(prev.abs_diff(d) <= 1);
                prev = d;
            }
            assert_eq!(c.distances.len() as u64, c.shared_steps);
            assert_eq!(c.distances.last().copied().unwrap_or(0), c.terminal_distance);
        }
    }

    #[test]
    fn reproducible() {
        let f = sample(&GeneratorSpec::planted(50, 600), Seed::single(5)).unwrap();
        let a = coupled_run(&f, None, Seed::single(6), &full()).unwrap();
        let b = coupled_run(&f, None, Seed::single(6), &full()).unwrap();
        assert_eq!(a, b);
    }
}
