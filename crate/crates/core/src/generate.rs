//! Seeded samplers for the uniform and planted random 3-CNF distributions.
//!
//! Both draw `m` clauses independently and with replacement. A clause is a
//! uniformly random 3-subset of variables with a uniformly random sign
//! pattern; the planted sampler excludes the single pattern that the planted
//! assignment falsifies.

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cnf::{Assignment, Clause, Formula, Literal};
use crate::error::{Error, Result};
use crate::seed::{Rng, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Uniform,
    Planted,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Uniform => "uniform",
            Mode::Planted => "planted",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Mode::Uniform),
            "planted" => Ok(Mode::Planted),
            other => Err(Error::InvalidSpec(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub m: usize,
    pub mode: Mode,
    /// Planted assignment; `None` means all-ones. Ignored in uniform mode.
    pub planted: Option<Assignment>,
}

impl GeneratorSpec {
    pub fn uniform(n: usize, m: usize) -> Self {
        GeneratorSpec {
            n,
            m,
            mode: Mode::Uniform,
            planted: None,
        }
    }

    pub fn planted(n: usize, m: usize) -> Self {
        GeneratorSpec {
            n,
            m,
            mode: Mode::Planted,
            planted: None,
        }
    }

    pub fn with_planted_assignment(mut self, planted: Assignment) -> Self {
        self.planted = Some(planted);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidSpec(format!(
                "n must be at least 3, got {}",
                self.n
            )));
        }
        if let Some(p) = &self.planted {
            if p.len() != self.n {
                return Err(Error::InvalidSpec(format!(
                    "planted assignment has length {}, expected {}",
                    p.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// The planted assignment, or all-ones.
    pub fn planted_assignment(&self) -> Assignment {
        self.planted
            .clone()
            .unwrap_or_else(|| Assignment::all_ones(self.n))
    }
}

/// JSON form of a generator spec: `n`, exactly one of `m`, `kappa`, `rho`,
/// `mode`, and an optional `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GeneratorConfig {
    pub fn clause_count(&self) -> Result<usize> {
        match (self.m, self.kappa, self.rho) {
            (Some(m), None, None) => Ok(m),
            (None, Some(k), None) => {
                check_nonneg("kappa", k)?;
                Ok(density_for_kappa(self.n, k))
            }
            (None, None, Some(r)) => {
                check_nonneg("rho", r)?;
                Ok(clauses_for_density(self.n, r))
            }
            _ => Err(Error::InvalidSpec(
                "exactly one of m, kappa, rho must be given".into(),
            )),
        }
    }

    pub fn to_spec(&self) -> Result<GeneratorSpec> {
        let spec = GeneratorSpec {
            n: self.n,
            m: self.clause_count()?,
            mode: self.mode,
            planted: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// One-line description for DIMACS comment headers.
    pub fn describe(&self, m: usize, seed: u64) -> String {
        let mut s = format!("lslab generate n={} m={} mode={}", self.n, m, self.mode);
        if let Some(k) = self.kappa {
            s.push_str(&format!(" kappa={k}"));
        }
        if let Some(r) = self.rho {
            s.push_str(&format!(" rho={r}"));
        }
        s.push_str(&format!(" seed={seed}"));
        s
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be finite and >= 0")))
    }
}

/// `m = round(kappa * ln(n) * n)`, ties rounded up.
pub fn density_for_kappa(n: usize, kappa: f64) -> usize {
    let n = n as f64;
    (kappa * n.ln() * n).round() as usize
}

/// `m = round(rho * n)`, ties rounded up.
pub fn clauses_for_density(n: usize, rho: f64) -> usize {
    (rho * n as f64).round() as usize
}

/// Three distinct variables, uniform over ordered triples.
#[inline]
fn distinct_triple(n: usize, rng: &mut Rng) -> [usize; 3] {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n);
    while b == a {
        b = rng.gen_range(0..n);
    }
    let mut c = rng.gen_range(0..n);
    while c == a || c == b {
        c = rng.gen_range(0..n);
    }
    [a, b, c]
}

/// Sign pattern bit `i` set means literal `i` is positive.
#[inline]
fn clause_from_pattern(vars: [usize; 3], pattern: u32) -> Clause {
    let lit = |i: usize| Literal::new(vars[i], pattern >> i & 1 == 1);
    Clause::new(lit(0), lit(1), lit(2)).expect("distinct variables")
}

pub(crate) fn uniform_clause(n: usize, rng: &mut Rng) -> Clause {
    let vars = distinct_triple(n, rng);
    clause_from_pattern(vars, rng.gen_range(0..8))
}

/// Uniform over the clauses satisfied by the all-ones assignment.
pub(crate) fn planted_clause(n: usize, rng: &mut Rng) -> Clause {
    let vars = distinct_triple(n, rng);
    clause_from_pattern(vars, rng.gen_range(1..8))
}

pub fn sample_uniform(spec: &GeneratorSpec, seed: Seed) -> Result<Formula> {
    spec.validate()?;
    if spec.mode != Mode::Uniform {
        return Err(Error::InvalidSpec("sample_uniform needs uniform mode".into()));
    }
    let mut rng = seed.rng();
    let clauses = (0..spec.m).map(|_| uniform_clause(spec.n, &mut rng)).collect();
    Formula::new(spec.n, clauses)
}

pub fn sample_planted(spec: &GeneratorSpec, seed: Seed) -> Result<Formula> {
    spec.validate()?;
    if spec.mode != Mode::Planted {
        return Err(Error::InvalidSpec("sample_planted needs planted mode".into()));
    }
    let mut rng = seed.rng();
    let clauses = match &spec.planted {
        None => (0..spec.m).map(|_| planted_clause(spec.n, &mut rng)).collect(),
        Some(p) => (0..spec.m)
            .map(|_| planted_clause(spec.n, &mut rng).transported(p))
            .collect(),
    };
    Formula::new(spec.n, clauses)
}

pub fn sample(spec: &GeneratorSpec, seed: Seed) -> Result<Formula> {
    match spec.mode {
        Mode::Uniform => sample_uniform(spec, seed),
        Mode::Planted => sample_planted(spec, seed),
    }
}

/// Clauses of `f1` followed by those of `f2`.
pub fn concat(f1: &Formula, f2: &Formula) -> Result<Formula> {
    if f1.num_vars() != f2.num_vars() {
        return Err(Error::VariableCountMismatch {
            left: f1.num_vars(),
            right: f2.num_vars(),
        });
    }
    let mut clauses = f1.clauses().to_vec();
    clauses.extend_from_slice(f2.clauses());
    Formula::new(f1.num_vars(), clauses)
}

/// Uniform over all 2^n tuples.
pub fn random_assignment(n: usize, rng: &mut Rng) -> Assignment {
    Assignment::new((0..n).map(|_| rng.gen::<bool>()).collect())
}

/// Uniform over tuples with exactly `ones` ones.
pub fn random_assignment_with_ones(n: usize, ones: usize, rng: &mut Rng) -> Assignment {
    assert!(ones <= n);
    let mut values = vec![false; n];
    for i in index::sample(rng, n, ones) {
        values[i] = true;
    }
    Assignment::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::ClauseType;

    #[test]
    fn kappa_rounding() {
        assert_eq!(density_for_kappa(1000, 7.0 / 6.0), 8059);
        assert_eq!(density_for_kappa(100, 1.5), 691);
        assert_eq!(density_for_kappa(1000, 0.0), 0);
        let mut prev = 0;
        for i in 0..200 {
            let m = density_for_kappa(500, i as f64 * 0.013);
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn empty_and_deterministic() {
        let f = sample_uniform(&GeneratorSpec::uniform(100, 0), Seed::single(1)).unwrap();
        assert_eq!(f.num_clauses(), 0);
        let spec = GeneratorSpec::planted(50, 200);
        assert_eq!(
            sample_planted(&spec, Seed::new(9, 3)).unwrap(),
            sample_planted(&spec, Seed::new(9, 3)).unwrap()
        );
        assert_ne!(
            sample_planted(&spec, Seed::new(9, 3)).unwrap(),
            sample_planted(&spec, Seed::new(9, 4)).unwrap()
        );
    }

    #[test]
    fn mode_mismatch_and_invalid_spec() {
        assert!(sample_uniform(&GeneratorSpec::planted(5, 1), Seed::single(0)).is_err());
        assert!(sample_planted(&GeneratorSpec::uniform(5, 1), Seed::single(0)).is_err());
        assert!(sample(&GeneratorSpec::uniform(2, 1), Seed::single(0)).is_err());
        let bad = GeneratorSpec::planted(5, 1).with_planted_assignment(Assignment::all_ones(4));
        assert!(sample(&bad, Seed::single(0)).is_err());
    }

    #[test]
    fn planted_never_emits_nnn_and_is_satisfied() {
        for s in 0..50 {
            let f = sample_planted(&GeneratorSpec::planted(20, 100), Seed::new(5, s)).unwrap();
            assert!(f.clauses().iter().all(|c| c.clause_type() != ClauseType::Nnn));
            assert_eq!(f.unsat_count(&Assignment::all_ones(20)), 0);
        }
    }

    #[test]
    fn arbitrary_planted_assignment() {
        let mut rng = Seed::single(3).rng();
        for s in 0..30 {
            let p = random_assignment(15, &mut rng);
            let spec = GeneratorSpec::planted(15, 80).with_planted_assignment(p.clone());
            let f = sample(&spec, Seed::new(11, s)).unwrap();
            assert_eq!(f.unsat_count(&p), 0);
        }
    }

    #[test]
    fn concat_semantics() {
        let f1 = sample(&GeneratorSpec::uniform(10, 7), Seed::single(1)).unwrap();
        let f2 = sample(&GeneratorSpec::uniform(10, 4), Seed::single(2)).unwrap();
        let e = Formula::empty(10).unwrap();
        assert_eq!(concat(&f1, &e).unwrap(), f1);
        let g = concat(&f1, &f2).unwrap();
        assert_eq!(g.num_clauses(), 11);
        assert_eq!(&g.clauses()[..7], f1.clauses());
        assert_eq!(&g.clauses()[7..], f2.clauses());
        let other = Formula::empty(11).unwrap();
        assert!(matches!(
            concat(&f1, &other),
            Err(Error::VariableCountMismatch { left: 10, right: 11 })
        ));
    }

    #[test]
    fn config_clause_count() {
        let c: GeneratorConfig =
            serde_json::from_str(r#"{"n":100,"kappa":1.5,"mode":"planted","seed":7}"#).unwrap();
        assert_eq!(c.clause_count().unwrap(), 691);
        let c: GeneratorConfig = serde_json::from_str(r#"{"n":60,"rho":2,"mode":"uniform"}"#).unwrap();
        assert_eq!(c.clause_count().unwrap(), 120);
        let c: GeneratorConfig =
            serde_json::from_str(r#"{"n":60,"rho":2,"m":3,"mode":"uniform"}"#).unwrap();
        assert!(c.clause_count().is_err());
    }

    #[test]
    fn fixed_ones_assignment() {
        let mut rng = Seed::single(4).rng();
        for k in 0..=8 {
            assert_eq!(random_assignment_with_ones(8, k, &mut rng).ones(), k);
        }
    }
}
