//! Straight Descent and the conditional-uniformity probe.
//!
//! The descent process only knows `n`: it never reads a clause, so its state
//! after `t` steps is independent of the formula.

use std::collections::BTreeMap;

use rand::Rng as _;

use super::local::resolve_initial;
use super::trace::{RunTrace, SolverKind, Status, Step, TraceLevel};
use super::RunOptions;
use crate::cnf::{Assignment, Formula};
use crate::error::{Error, Result};
use crate::generate::random_assignment_with_ones;
use crate::seed::{Purpose, Rng, Seed};
use crate::stats::{chi_square_p_value, ChiSquareSummary};

#[derive(Debug, Clone)]
pub struct DescentProcess {
    values: Assignment,
    zeros: usize,
}

impl DescentProcess {
    pub fn new(initial: Assignment) -> Self {
        let zeros = initial.zeros();
        DescentProcess {
            values: initial,
            zeros,
        }
    }

    #[inline]
    pub fn is_done(&self) -> bool {
        self.zeros == 0
    }

    #[inline]
    pub fn values(&self) -> &Assignment {
        &self.values
    }

    /// Sets `x` to 1; returns whether it was 0.
    #[inline]
    pub fn apply(&mut self, x: usize) -> bool {
        if self.values[x] {
            false
        } else {
            self.values.set(x, true);
            self.zeros -= 1;
            true
        }
    }

    /// One pick of a uniform variable. Returns `(variable, changed)`.
    #[inline]
    pub fn step(&mut self, rng: &mut Rng) -> (usize, bool) {
        let x = rng.gen_range(0..self.values.len());
        (x, self.apply(x))
    }

    pub fn into_values(self) -> Assignment {
        self.values
    }
}

/// Runs Straight Descent towards the all-ones assignment. The formula must
/// be satisfied by all-ones; beyond that check only its variable count is
/// used.
pub fn straight_descent(
    f: &Formula,
    initial: Option<Assignment>,
    seed: Seed,
    opts: &RunOptions,
) -> Result<RunTrace> {
    let n = f.num_vars();
    if !f.is_satisfied_by(&Assignment::all_ones(n)) {
        return Err(Error::InvalidSpec(
            "straight descent needs a formula planted at all-ones".into(),
        ));
    }
    let initial = resolve_initial(f, initial, seed)?;
    let initial_unsat = f.unsat_count(&initial);
    let budget = opts.step_budget.unwrap_or(u64::MAX);
    let mut rng = seed.rng_for(Purpose::Solver);
    let mut sd = DescentProcess::new(initial.clone());
    let mut steps = Vec::new();
    let mut taken = 0u64;
    let mut flips = 0u64;
    while !sd.is_done() && taken < budget {
        let (x, changed) = sd.step(&mut rng);
        if opts.trace == TraceLevel::Full {
            steps.push(Step {
                index: taken,
                var: x,
                flipped: changed,
                righteous_margin: None,
            });
        }
        taken += 1;
        flips += changed as u64;
    }
    let status = if sd.is_done() {
        Status::Satisfied
    } else {
        Status::StepBudgetExhausted
    };
    let final_assignment = sd.into_values();
    let final_unsat = f.unsat_count(&final_assignment);
    Ok(RunTrace {
        kind: SolverKind::Sd,
        initial,
        steps,
        final_assignment,
        status,
        steps_taken: taken,
        flips,
        initial_unsat,
        final_unsat,
    })
}

/// Frequencies of the vectors reached by Straight Descent after `t` steps,
/// grouped by their number of ones. Vectors are keyed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityTable {
    pub n: usize,
    pub m0: usize,
    pub t: u64,
    pub trials: u64,
    pub by_ones: BTreeMap<usize, BTreeMap<u64, u64>>,
}

pub const MAX_PROBE_VARS: usize = 20;

pub fn uniformity_probe(n: usize, m0: usize, t: u64, trials: u64, seed: Seed) -> Result<UniformityTable> {
    if n == 0 || n > MAX_PROBE_VARS {
        return Err(Error::InvalidSpec(format!(
            "uniformity probe needs 1 <= n <= {MAX_PROBE_VARS}, got {n}"
        )));
    }
    if m0 > n {
        return Err(Error::InvalidSpec(format!("m0 = {m0} exceeds n = {n}")));
    }
    let mut rng = seed.rng_for(Purpose::Probe);
    let mut by_ones: BTreeMap<usize, BTreeMap<u64, u64>> = BTreeMap::new();
    for _ in 0..trials {
        let mut sd = DescentProcess::new(random_assignment_with_ones(n, m0, &mut rng));
        for _ in 0..t {
            if sd.is_done() {
                break;
            }
            sd.step(&mut rng);
        }
        let v = sd.into_values();
        *by_ones
            .entry(v.ones())
            .or_default()
            .entry(v.to_bits())
            .or_default() += 1;
    }
    Ok(UniformityTable {
        n,
        m0,
        t,
        trials,
        by_ones,
    })
}

impl UniformityTable {
    /// Pearson chi-square against the uniform law inside each ones-count
    /// class, summed over classes whose expected per-vector count is at
    /// least `min_expected`. Classes with a single vector carry no
    /// information and are skipped.
    pub fn chi_square(&self, min_expected: f64) -> ChiSquareSummary {
        let mut class_vectors: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for bits in 0u64..(1u64 << self.n) {
            let k = bits.count_ones() as usize;
            if self.by_ones.contains_key(&k) {
                class_vectors.entry(k).or_default().push(bits);
            }
        }
        let mut statistic = 0.0;
        let mut df = 0usize;
        let mut classes = 0usize;
        for (k, counts) in &self.by_ones {
            let vectors = &class_vectors[k];
            if vectors.len() < 2 {
                continue;
            }
            let total: u64 = counts.values().sum();
            let expected = total as f64 / vectors.len() as f64;
            if expected < min_expected {
                continue;
            }
            for bits in vectors {
                let o = *counts.get(bits).unwrap_or(&0) as f64;
                statistic += (o - expected).powi(2) / expected;
            }
            df += vectors.len() - 1;
            classes += 1;
        }
        ChiSquareSummary {
            statistic,
            df,
            p_value: chi_square_p_value(statistic, df),
            classes,
        }
    }
}
