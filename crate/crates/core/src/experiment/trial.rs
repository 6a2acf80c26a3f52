use super::record::{ExperimentRecord, Outcome, RunOutcome};
use super::spec::{Cell, ExperimentKind, ExperimentSpec};
use crate::census::{census, find_crowns};
use crate::cnf::{Assignment, Formula};
use crate::error::{Error, Result};
use crate::generate::{random_assignment_with_ones, sample, GeneratorSpec, Mode};
use crate::oracle::{brute_force_opt, MAX_OPT_VARS};
use crate::seed::{splitmix64, Purpose, Seed};
use crate::solver::{
    coupled_run, run, uniformity_probe, DescentProcess, RunOptions, RunTrace, Status,
};

/// Roughly one record in a hundred is re-checked from scratch.
pub fn selected_for_verification(seed: u64) -> bool {
    splitmix64(seed ^ 0x7665_7269_6679).is_multiple_of(100)
}

/// Recomputes status, unsat count and ones count of a finished run.
pub fn verify_trace(f: &Formula, t: &RunTrace) -> Result<()> {
    let a = &t.final_assignment;
    let unsat = f.unsat_count(a);
    let expected = if unsat == 0 {
        Status::Satisfied
    } else if f.is_proper_local_minimum(a) {
        Status::ProperLocalMinimum
    } else {
        Status::StepBudgetExhausted
    };
    if unsat != t.final_unsat || expected != t.status {
        return Err(Error::Invariant(format!(
            "record re-verification failed: reported {} with {} unsatisfied, recount gives {} with {}",
            t.status.as_str(),
            t.final_unsat,
            expected.as_str(),
            unsat
        )));
    }
    Ok(())
}

fn formula(spec: &ExperimentSpec, cell: &Cell, seed: Seed) -> Result<Formula> {
    let g = GeneratorSpec {
        n: cell.n,
        m: cell.m,
        mode: spec.mode,
        planted: None,
    };
    sample(&g, seed.sub(Purpose::Formula))
}

fn options(spec: &ExperimentSpec) -> RunOptions {
    RunOptions {
        step_budget: spec.step_budget,
        ..RunOptions::default()
    }
}

fn solve(spec: &ExperimentSpec, f: &Formula, initial: Assignment, seed: Seed) -> Result<RunOutcome> {
    let t = run(spec.solver_kind(), f, Some(initial), seed, &options(spec))?;
    let verified = selected_for_verification(seed.value());
    if verified {
        verify_trace(f, &t)?;
    }
    Ok(RunOutcome {
        status: t.status,
        steps: t.steps_taken,
        flips: t.flips,
        initial_unsat: t.initial_unsat,
        final_unsat: t.final_unsat,
        final_ones: t.final_assignment.ones(),
        verified,
    })
}

pub fn run_trial(spec: &ExperimentSpec, cell: &Cell, trial: usize) -> Result<ExperimentRecord> {
    let seed = spec.trial_seed(cell.index, trial);
    let n = cell.n;
    let outcome = match spec.kind {
        ExperimentKind::TransitionSweep | ExperimentKind::MinimaGeometry => {
            let f = formula(spec, cell, seed)?;
            let r = solve(spec, &f, spec.initial.draw(n, seed), seed)?;
            if spec.kind == ExperimentKind::TransitionSweep {
                Outcome::Transition(r)
            } else {
                Outcome::MinimaGeometry(r)
            }
        }
        ExperimentKind::SdRuntime => {
            let initial = spec.initial.draw(n, seed);
            let initial_ones = initial.ones();
            let mut rng = seed.rng_for(Purpose::Solver);
            let mut sd = DescentProcess::new(initial);
            let budget = spec.step_budget.unwrap_or(u64::MAX);
            let (mut steps, mut flips) = (0u64, 0u64);
            while !sd.is_done() && steps < budget {
                flips += sd.step(&mut rng).1 as u64;
                steps += 1;
            }
            let bound = 2.0 * n as f64 * (n as f64).ln();
            Outcome::SdRuntime {
                initial_ones,
                steps,
                flips,
                bound,
                within_bound: sd.is_done() && steps as f64 <= bound,
            }
        }
        ExperimentKind::SdUniformity => {
            let (m0, t, runs) = (
                spec.m0.expect("validated"),
                spec.t.expect("validated"),
                spec.probe_trials.expect("validated"),
            );
            let table = uniformity_probe(n, m0, t, runs, seed)?;
            let chi = table.chi_square(spec.min_expected);
            Outcome::SdUniformity {
                m0,
                t,
                runs,
                statistic: chi.statistic,
                df: chi.df,
                p_value: chi.p_value,
                classes: chi.classes,
            }
        }
        ExperimentKind::ZeroFlood => {
            let f = formula(spec, cell, seed)?;
            let zeros = |q: f64| ((q * n as f64).round() as usize).min(n);
            let (z0, z1) = (zeros(spec.q0.expect("validated")), zeros(spec.q1.expect("validated")));
            let mut rng = seed.rng_for(Purpose::Probe);
            let mut batch = |z: usize| -> Vec<usize> {
                (0..spec.samples)
                    .map(|_| f.sat_count(&random_assignment_with_ones(n, n - z, &mut rng)))
                    .collect()
            };
            let min0 = batch(z0).into_iter().min().expect("samples >= 1");
            let max1 = batch(z1).into_iter().max().expect("samples >= 1");
            Outcome::ZeroFlood {
                zeros_q0: z0,
                zeros_q1: z1,
                min_sat_q0: min0,
                max_sat_q1: max1,
                separated: min0 > max1,
            }
        }
        ExperimentKind::StructureCensus => {
            let f = formula(spec, cell, seed)?;
            let r = census(&f, spec.d1, spec.d2, false);
            Outcome::Census {
                caps: r.caps,
                crowns: r.crowns,
                max_degree: r.max_degree,
                d1: spec.d1,
                d2: spec.d2,
                isolation_pairs: r.isolation_pairs,
            }
        }
        ExperimentKind::ApproxGap => {
            let f = formula(spec, cell, seed)?;
            let crowns = find_crowns(&f);
            let initial = spec.initial.draw(n, seed);
            let zero: Vec<_> = crowns
                .iter()
                .filter(|c| c.vars.iter().all(|&v| !initial[v]))
                .collect();
            let t = run(spec.solver_kind(), &f, Some(initial.clone()), seed, &options(spec))?;
            if selected_for_verification(seed.value()) {
                verify_trace(&f, &t)?;
            }
            let end = &t.final_assignment;
            let trapped = zero
                .iter()
                .filter(|c| !f.clauses()[c.positions[0]].is_satisfied(end))
                .count();
            let opt = match spec.mode {
                Mode::Planted => Some(f.num_clauses()),
                Mode::Uniform if n <= MAX_OPT_VARS => Some(brute_force_opt(&f)?.0),
                Mode::Uniform => None,
            };
            Outcome::ApproxGap {
                crowns: crowns.len(),
                zero_crowns: zero.len(),
                trapped_crowns: trapped,
                status: t.status,
                final_unsat: t.final_unsat,
                opt,
                gap: opt.map(|o| o - f.sat_count(end)),
            }
        }
        ExperimentKind::CoupledDistance => {
            let f = formula(spec, cell, seed)?;
            let c = coupled_run(&f, Some(spec.initial.draw(n, seed)), seed, &options(spec))?;
            if c.max_step_change > 1 {
                return Err(Error::Invariant(format!(
                    "coupled distance changed by {} in one step",
                    c.max_step_change
                )));
            }
            Outcome::Coupled {
                max_distance: c.max_distance,
                terminal_distance: c.terminal_distance,
                max_step_change: c.max_step_change,
                shared_steps: c.shared_steps,
                sd_steps: c.sd_steps,
                ls_steps: c.ls_steps,
                ls_status: c.ls_status,
                ls_final_unsat: c.ls_final_unsat,
            }
        }
    };
    Ok(ExperimentRecord {
        kind: spec.kind,
        cell: cell.index,
        trial,
        n,
        m: cell.m,
        density: cell.density,
        mode: spec.mode,
        seed: seed.value(),
        outcome,
    })
}
