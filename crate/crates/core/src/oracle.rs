//! Exhaustive and exact ground truth for small instances: MAX-SAT optimum,
//! classification of every assignment, reachable local minima, and exact
//! rational probabilities/expectations under the two samplers.
//!
//! Nothing here shares code with the incremental search state; flip effects
//! are evaluated per clause from scratch.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cnf::{Assignment, Formula};
use crate::error::{Error, Result};
use crate::generate::Mode;

pub const MAX_OPT_VARS: usize = 24;
pub const MAX_MINIMA_VARS: usize = 20;
pub const MAX_ENUMERATION_VARS: usize = 12;
/// Largest clause count accepted by the exact expectation routines; the
/// rational powers grow linearly in `m` in digit length.
pub const MAX_EXACT_CLAUSES: usize = 200_000;

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeGuard { n, limit })
    } else {
        Ok(())
    }
}

/// Per-clause literal bookkeeping for Gray-code sweeps: flipping `v` moves
/// the true-literal count of each clause in `occ[v]` by ±1.
struct Sweep<'f> {
    f: &'f Formula,
    occ: Vec<Vec<u32>>,
    bits: u64,
    true_count: Vec<u8>,
    sat: usize,
}

impl<'f> Sweep<'f> {
    fn new(f: &'f Formula) -> Self {
        let zeros = Assignment::all_zeros(f.num_vars());
        let true_count: Vec<u8> = f.clauses().iter().map(|c| c.true_count(&zeros)).collect();
        let sat = true_count.iter().filter(|&&t| t > 0).count();
        Sweep {
            f,
            occ: f.occurrences(),
            bits: 0,
            true_count,
            sat,
        }
    }

    fn flip(&mut self, v: usize) {
        self.bits ^= 1 << v;
        let now = self.bits >> v & 1 == 1;
        for &p in &self.occ[v] {
            let p = p as usize;
            let lit = self.f.clauses()[p].literal_of(v).expect("occurrence");
            if lit.holds_for(now) {
                if self.true_count[p] == 0 {
                    self.sat += 1;
                }
                self.true_count[p] += 1;
            } else {
                self.true_count[p] -= 1;
                if self.true_count[p] == 0 {
                    self.sat -= 1;
                }
            }
        }
    }

    /// Whether no single flip increases the satisfied count.
    fn is_local_minimum(&self, gain: &mut [i32]) -> bool {
        gain.iter_mut().for_each(|g| *g = 0);
        for (c, &tc) in self.f.clauses().iter().zip(&self.true_count) {
            match tc {
                0 => c.vars().iter().for_each(|&v| gain[v] += 1),
                1 => {
                    let l = c
                        .literals()
                        .iter()
                        .find(|l| l.holds_for(self.bits >> l.var() & 1 == 1))
                        .expect("one true literal");
                    gain[l.var()] -= 1;
                }
                _ => {}
            }
        }
        gain.iter().all(|&g| g <= 0)
    }
}

/// Visits all `2^n` assignments in Gray-code order.
fn gray_sweep(f: &Formula, mut visit: impl FnMut(&Sweep<'_>)) {
    let n = f.num_vars();
    let mut s = Sweep::new(f);
    visit(&s);
    for i in 1u64..(1u64 << n) {
        s.flip(i.trailing_zeros() as usize);
        visit(&s);
    }
}

/// Maximum number of simultaneously satisfiable clauses, with a witness.
pub fn brute_force_opt(f: &Formula) -> Result<(usize, Assignment)> {
    guard(f.num_vars(), MAX_OPT_VARS)?;
    let mut best = (0usize, 0u64);
    let mut first = true;
    gray_sweep(f, |s| {
        if first || s.sat > best.0 {
            best = (s.sat, s.bits);
            first = false;
        }
    });
    Ok((best.0, Assignment::from_bits(f.num_vars(), best.1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimumClass {
    NotMinimum,
    /// A local minimum satisfying every clause.
    GlobalMinimum,
    /// A local minimum leaving at least one clause unsatisfied.
    ProperLocalMinimum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaCensus {
    pub n: usize,
    /// Indexed by assignment bitmask (bit `i` = value of variable `i`).
    pub classes: Vec<MinimumClass>,
    pub not_minimum: usize,
    pub global_minima: usize,
    pub proper_minima: usize,
    /// `proper_ones_histogram[k]` proper minima have exactly `k` ones.
    pub proper_ones_histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaSummary {
    pub n: usize,
    pub assignments: u64,
    pub not_minimum: usize,
    pub global_minima: usize,
    pub proper_minima: usize,
    pub proper_ones_histogram: Vec<usize>,
}

impl MinimaCensus {
    pub fn class_of(&self, a: &Assignment) -> MinimumClass {
        self.classes[a.to_bits() as usize]
    }

    pub fn summary(&self) -> MinimaSummary {
        MinimaSummary {
            n: self.n,
            assignments: 1u64 << self.n,
            not_minimum: self.not_minimum,
            global_minima: self.global_minima,
            proper_minima: self.proper_minima,
            proper_ones_histogram: self.proper_ones_histogram.clone(),
        }
    }
}

pub fn enumerate_minima(f: &Formula) -> Result<MinimaCensus> {
    let n = f.num_vars();
    guard(n, MAX_MINIMA_VARS)?;
    let m = f.num_clauses();
    let mut classes = vec![MinimumClass::NotMinimum; 1 << n];
    let mut gain = vec![0i32; n];
    let mut hist = vec![0usize; n + 1];
    gray_sweep(f, |s| {
        if s.is_local_minimum(&mut gain) {
            let class = if s.sat == m {
                MinimumClass::GlobalMinimum
            } else {
                hist[s.bits.count_ones() as usize] += 1;
                MinimumClass::ProperLocalMinimum
            };
            classes[s.bits as usize] = class;
        }
    });
    let count = |c: MinimumClass| classes.iter().filter(|&&x| x == c).count();
    Ok(MinimaCensus {
        n,
        not_minimum: count(MinimumClass::NotMinimum),
        global_minima: count(MinimumClass::GlobalMinimum),
        proper_minima: count(MinimumClass::ProperLocalMinimum),
        classes,
        proper_ones_histogram: hist,
    })
}

/// Local minima reachable from `start` by some sequence of strictly
/// improving single flips. Every terminal state of LS or MLS from `start`
/// lies in this set. Returned as bitmasks.
pub fn reachable_minima(f: &Formula, start: &Assignment) -> Result<BTreeSet<u64>> {
    let n = f.num_vars();
    guard(n, MAX_MINIMA_VARS)?;
    let sat = |bits: u64| {
        f.clauses()
            .iter()
            .filter(|c| c.literals().iter().any(|l| l.holds_for(bits >> l.var() & 1 == 1)))
            .count()
    };
    let mut seen = BTreeSet::new();
    let mut out = BTreeSet::new();
    let mut stack = vec![start.to_bits()];
    seen.insert(start.to_bits());
    while let Some(bits) = stack.pop() {
        let here = sat(bits);
        let mut terminal = true;
        for v in 0..n {
            let next = bits ^ (1 << v);
            if sat(next) > here {
                terminal = false;
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        if terminal {
            out.insert(bits);
        }
    }
    Ok(out)
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(big(num), big(den))
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn big_choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * big(n - i) / big(i + 1))
}

fn falling(m: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        if m < i {
            BigInt::zero()
        } else {
            acc * big(m - i)
        }
    })
}

fn pow(base: &BigRational, exp: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

/// Probability that one planted clause is satisfied by a fixed assignment
/// with `zeros` zeros, computed two independent ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSatProbability {
    pub n: usize,
    pub zeros: usize,
    /// Full enumeration of the `7 C(n,3)` planted clauses (only for
    /// `n <= MAX_ENUMERATION_VARS`).
    pub enumerated: Option<BigRational>,
    /// `1 - [(1/7) h3 + (3/7) h2 + (3/7) h1]`, where `h_j` is the
    /// hypergeometric probability that a specific `j` of the clause's three
    /// variables are exactly the zero-valued ones.
    pub closed_form: BigRational,
}

/// `q` is the zero fraction; `q * n` must be an integer in `0..=n`.
pub fn clause_sat_probability(n: usize, q: Ratio<u64>) -> Result<ClauseSatProbability> {
    if n < 3 {
        return Err(Error::TooFewVariables(n));
    }
    let scaled = q * Ratio::from_integer(n as u64);
    if !scaled.is_integer() || *scaled.numer() > n as u64 {
        return Err(Error::InvalidSpec(format!(
            "q * n = {scaled} is not an integer in 0..={n}"
        )));
    }
    let k = scaled.to_integer();
    let nn = n as u64;
    let triples = big_choose(nn, 3);

    let h = |j: u64| {
        BigRational::new(
            big_choose(k, j) * big_choose(nn - k, 3 - j),
            &triples * big(choose(3, j)),
        )
    };
    let unsat = ratio(1, 7) * h(3) + ratio(3, 7) * h(2) + ratio(3, 7) * h(1);
    let closed_form = BigRational::one() - unsat;

    let enumerated = (n <= MAX_ENUMERATION_VARS).then(|| {
        // zeros on variables 0..k
        let value = |v: usize| v >= k as usize;
        let mut sat = 0u64;
        let mut total = 0u64;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for pattern in 1u32..8 {
                        let vars = [a, b, c];
                        let satisfied = (0..3).any(|i| value(vars[i]) == (pattern >> i & 1 == 1));
                        sat += satisfied as u64;
                        total += 1;
                    }
                }
            }
        }
        ratio(sat, total)
    });

    Ok(ClauseSatProbability {
        n,
        zeros: k as usize,
        enumerated,
        closed_form,
    })
}

/// Probability that a random planted clause is unsatisfied by an assignment
/// whose values are i.i.d. with zero probability `q`:
/// `(1/7) q^3 + (3/7) q^2 (1-q) + (3/7) q (1-q)^2 = (1 - (1-q)^3) / 7`.
pub fn clause_unsat_probability_iid(q: f64) -> f64 {
    (q.powi(3) + 3.0 * q.powi(2) * (1.0 - q) + 3.0 * q * (1.0 - q).powi(2)) / 7.0
}

fn sampler_size(n: u64, mode: Mode) -> BigInt {
    let patterns = match mode {
        Mode::Uniform => 8u64,
        Mode::Planted => 7,
    };
    big_choose(n, 3) * big(patterns)
}

fn check_exact(n: usize, m: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewVariables(n));
    }
    if m > MAX_EXACT_CLAUSES {
        return Err(Error::InvalidSpec(format!(
            "m = {m} exceeds exact-arithmetic limit {MAX_EXACT_CLAUSES}"
        )));
    }
    Ok(())
}

/// Exact expected number of caps (ordered position pairs) in a formula
/// drawn by the sampler for `mode` with `n` variables and `m` clauses.
///
/// With `T` equiprobable clauses and `q` the probability that a clause is a
/// `(+,−,−)` clause with a given positive variable:
///
/// ```text
/// E = m(m-1) * n C(n-1,2) (n-3)(n-4) / T^2
///       * [(1-2q)^(m-2) - 2(1-3q)^(m-2) + (1-4q)^(m-2)]
/// ```
///
/// The bracket is inclusion-exclusion over the other `m-2` clauses: none
/// makes `x1` or `x5` positive in a `(+,−,−)` clause, and at least one does
/// so for each of `x2`, `x3`.
pub fn cap_probability(n: usize, m: usize, mode: Mode) -> Result<BigRational> {
    check_exact(n, m)?;
    if m < 2 || n < 5 {
        return Ok(BigRational::zero());
    }
    let nn = n as u64;
    let t = sampler_size(nn, mode);
    let pnn_per_var = big_choose(nn - 1, 2);
    let q = BigRational::new(pnn_per_var.clone(), t.clone());
    let patterns = big(nn) * &pnn_per_var * big(nn - 3) * big(nn - 4);
    let pair = BigRational::new(falling(m as u64, 2) * patterns, &t * &t);
    let r = (m - 2) as u64;
    let one = BigRational::one();
    let term = |k: u64| pow(&(&one - &q * BigRational::from_integer(big(k))), r);
    let rest = term(2) - term(3) * BigRational::from_integer(big(2)) + term(4);
    Ok(pair * rest)
}

/// Exact expected number of crowns in a formula drawn by the sampler for
/// `mode`:
///
/// ```text
/// E = m(m-1)(m-2)(m-3) * C(n,3) C(n-3,2) C(n-5,2) C(n-7,2) / T^4
///       * (C(n-9,3) / C(n,3))^(m-4)
/// ```
///
/// The last factor is the probability that the remaining clauses avoid all
/// nine crown variables.
pub fn crown_probability(n: usize, m: usize, mode: Mode) -> Result<BigRational> {
    check_exact(n, m)?;
    if m < 4 || n < 9 {
        return Ok(BigRational::zero());
    }
    let nn = n as u64;
    let t = sampler_size(nn, mode);
    let patterns = big_choose(nn, 3)
        * big_choose(nn - 3, 2)
        * big_choose(nn - 5, 2)
        * big_choose(nn - 7, 2);
    let t4 = &t * &t * &t * &t;
    let structure = BigRational::new(falling(m as u64, 4) * patterns, t4);
    let avoid = BigRational::new(big_choose(nn - 9, 3), big_choose(nn, 3));
    Ok(structure * pow(&avoid, (m - 4) as u64))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
