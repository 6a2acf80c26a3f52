//! 3-CNF data model: literals, canonical clauses, position-indexed formulas,
//! assignments, and the vote semantics that drive every local search process
//! in this crate.
//!
//! A clause *votes* for variable `x` to take value 1 when it contains the
//! literal `x` and its other two literals are false; it votes for value 0 when
//! it contains `¬x` and the other two literals are false. Flipping `x` changes
//! the number of satisfied clauses by exactly
//! `votes to change x - votes to keep x`, so the improving set is the set of
//! variables whose "change" votes strictly outnumber their "keep" votes.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed variable, packed as `var << 1 | negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(u32);

impl Literal {
    #[inline]
    pub fn new(var: usize, positive: bool) -> Self {
        Literal(((var as u32) << 1) | (!positive) as u32)
    }

    #[inline]
    pub fn positive(var: usize) -> Self {
        Self::new(var, true)
    }

    #[inline]
    pub fn negative(var: usize) -> Self {
        Self::new(var, false)
    }

    #[inline]
    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn negated(self) -> Self {
        Literal(self.0 ^ 1)
    }

    /// Truth value of the literal when its variable has value `value`.
    #[inline]
    pub fn holds_for(self, value: bool) -> bool {
        value == self.is_positive()
    }

    #[inline]
    pub fn eval(self, a: &Assignment) -> bool {
        self.holds_for(a[self.var()])
    }

    /// 1-indexed signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 {
            return None;
        }
        let var = (lit.unsigned_abs() - 1) as usize;
        Some(Self::new(var, lit > 0))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var() + 1)
        } else {
            write!(f, "¬x{}", self.var() + 1)
        }
    }
}

/// Clause signature by number of positive literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClauseType {
    /// (−,−,−)
    Nnn,
    /// (+,−,−)
    Pnn,
    /// (+,+,−)
    Ppn,
    /// (+,+,+)
    Ppp,
}

impl ClauseType {
    pub fn from_positives(k: usize) -> Self {
        match k {
            0 => ClauseType::Nnn,
            1 => ClauseType::Pnn,
            2 => ClauseType::Ppn,
            3 => ClauseType::Ppp,
            _ => unreachable!("a 3-clause has at most 3 positive literals"),
        }
    }

    pub fn positives(self) -> usize {
        self as usize
    }
}

/// Three literals over pairwise-distinct variables, sorted by variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause([Literal; 3]);

impl Clause {
    pub fn new(a: Literal, b: Literal, c: Literal) -> Result<Self> {
        let mut lits = [a, b, c];
        lits.sort_unstable_by_key(|l| l.var());
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(Error::DuplicateVariable { var: w[0].var() + 1 });
            }
        }
        Ok(Clause(lits))
    }

    /// Builds a clause from 1-indexed signed DIMACS literals, e.g. `[1, -2, -3]`.
    pub fn from_dimacs(lits: [i64; 3]) -> Result<Self> {
        let mut out = [Literal(0); 3];
        for (slot, &l) in out.iter_mut().zip(lits.iter()) {
            *slot = Literal::from_dimacs(l).ok_or_else(|| Error::Parse {
                line: 0,
                msg: "literal 0 inside a clause".into(),
            })?;
        }
        Self::new(out[0], out[1], out[2])
    }

    #[inline]
    pub fn literals(&self) -> &[Literal; 3] {
        &self.0
    }

    #[inline]
    pub fn vars(&self) -> [usize; 3] {
        [self.0[0].var(), self.0[1].var(), self.0[2].var()]
    }

    pub fn clause_type(&self) -> ClauseType {
        ClauseType::from_positives(self.0.iter().filter(|l| l.is_positive()).count())
    }

    /// The literal over `var`, if the clause mentions it.
    pub fn literal_of(&self, var: usize) -> Option<Literal> {
        self.0.iter().copied().find(|l| l.var() == var)
    }

    /// Number of literals true under `a`.
    #[inline]
    pub fn true_count(&self, a: &Assignment) -> u8 {
        self.0.iter().filter(|l| l.eval(a)).count() as u8
    }

    #[inline]
    pub fn is_satisfied(&self, a: &Assignment) -> bool {
        self.0.iter().any(|l| l.eval(a))
    }

    /// The same clause with every literal over a 0-valued variable of
    /// `planted` negated. Maps clauses satisfied by all-ones onto clauses
    /// satisfied by `planted`.
    pub fn transported(&self, planted: &Assignment) -> Clause {
        let mut lits = self.0;
        for l in lits.iter_mut() {
            if !planted[l.var()] {
                *l = l.negated();
            }
        }
        Clause(lits)
    }

    /// Largest variable index mentioned.
    pub fn max_var(&self) -> usize {
        self.0[2].var()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ∨ {} ∨ {})", self.0[0], self.0[1], self.0[2])
    }
}

/// A Boolean n-tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all_ones(n: usize) -> Self {
        Assignment(vec![true; n])
    }

    pub fn all_zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// Bit `i` of `bits` is the value of variable `i`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64);
        Assignment((0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn to_bits(&self) -> u64 {
        assert!(self.0.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, var: usize) -> bool {
        self.0[var]
    }

    #[inline]
    pub fn set(&mut self, var: usize, value: bool) {
        self.0[var] = value;
    }

    #[inline]
    pub fn flip(&mut self, var: usize) {
        self.0[var] = !self.0[var];
    }

    /// Copy with `var` flipped.
    pub fn flipped(&self, var: usize) -> Self {
        let mut out = self.clone();
        out.flip(var);
        out
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn hamming(&self, other: &Assignment) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }
}

impl Index<usize> for Assignment {
    type Output = bool;

    #[inline]
    fn index(&self, var: usize) -> &bool {
        &self.0[var]
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Per-variable vote counts under some assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    pub to_one: Vec<u32>,
    pub to_zero: Vec<u32>,
}

impl VoteTally {
    pub fn zeros(n: usize) -> Self {
        VoteTally {
            to_one: vec![0; n],
            to_zero: vec![0; n],
        }
    }

    /// `votes_to_one - votes_to_zero`.
    #[inline]
    pub fn margin(&self, var: usize) -> i64 {
        self.to_one[var] as i64 - self.to_zero[var] as i64
    }

    /// Votes to change the current value minus votes to keep it. Equals the
    /// change in satisfied clauses caused by flipping `var`.
    #[inline]
    pub fn gain(&self, var: usize, current: bool) -> i64 {
        if current {
            -self.margin(var)
        } else {
            self.margin(var)
        }
    }
}

/// A 3-CNF over `n` variables; clause positions are meaningful and duplicate
/// clauses may occur at different positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    n: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVariables(n));
        }
        if let Some(c) = clauses.iter().find(|c| c.max_var() >= n) {
            return Err(Error::VariableOutOfRange {
                var: c.max_var() + 1,
                n,
            });
        }
        Ok(Formula { n, clauses })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Convenience constructor from DIMACS-style signed triples.
    pub fn from_dimacs_clauses(n: usize, clauses: &[[i64; 3]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|&c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, clauses)
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn density(&self) -> f64 {
        self.clauses.len() as f64 / self.n as f64
    }

    /// For each variable, the positions of the clauses that mention it.
    pub fn occurrences(&self) -> Vec<Vec<u32>> {
        let mut occ = vec![Vec::new(); self.n];
        for (pos, c) in self.clauses.iter().enumerate() {
            for v in c.vars() {
                occ[v].push(pos as u32);
            }
        }
        occ
    }

    fn check_len(&self, a: &Assignment) {
        assert_eq!(
            a.len(),
            self.n,
            "assignment length {} does not match formula with {} variables",
            a.len(),
            self.n
        );
    }

    pub fn sat_count(&self, a: &Assignment) -> usize {
        self.check_len(a);
        self.clauses.iter().filter(|c| c.is_satisfied(a)).count()
    }

    pub fn unsat_count(&self, a: &Assignment) -> usize {
        self.num_clauses() - self.sat_count(a)
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.unsat_count(a) == 0
    }

    pub fn compute_votes(&self, a: &Assignment) -> VoteTally {
        self.check_len(a);
        let mut tally = VoteTally::zeros(self.n);
        for c in &self.clauses {
            add_clause_votes(c, c.true_count(a), a, &mut tally, 1);
        }
        tally
    }

    /// Variables whose flip strictly increases the number of satisfied
    /// clauses, in ascending order.
    pub fn improving_set(&self, a: &Assignment) -> Vec<usize> {
        let tally = self.compute_votes(a);
        (0..self.n).filter(|&x| tally.gain(x, a[x]) > 0).collect()
    }

    pub fn is_local_minimum(&self, a: &Assignment) -> bool {
        self.improving_set(a).is_empty()
    }

    /// A local minimum that leaves at least one clause unsatisfied.
    pub fn is_proper_local_minimum(&self, a: &Assignment) -> bool {
        self.unsat_count(a) > 0 && self.is_local_minimum(a)
    }
}

/// Adds (`sign = 1`) or removes (`sign = -1`) the votes cast by clause `c`
/// given `true_count` true literals under `a`. A literal votes when the other
/// two literals are false, i.e. when `true_count - [literal true] == 0`.
#[inline]
pub(crate) fn add_clause_votes(
    c: &Clause,
    true_count: u8,
    a: &Assignment,
    tally: &mut VoteTally,
    sign: i32,
) {
    if true_count > 1 {
        return;
    }
    for &l in c.literals() {
        let own = l.eval(a) as u8;
        if true_count - own == 0 {
            let slot = if l.is_positive() {
                &mut tally.to_one[l.var()]
            } else {
                &mut tally.to_zero[l.var()]
            };
            *slot = (*slot as i32 + sign) as u32;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(l: [i64; 3]) -> Clause {
        Clause::from_dimacs(l).unwrap()
    }

    #[test]
    fn clause_types() {
        assert_eq!(cl([1, -2, -3]).clause_type(), ClauseType::Pnn);
        assert_eq!(cl([-1, -4, 5]).clause_type(), ClauseType::Pnn);
        assert_eq!(cl([1, 2, 3]).clause_type(), ClauseType::Ppp);
        assert_eq!(cl([-1, 2, 3]).clause_type(), ClauseType::Ppn);
        assert_eq!(cl([-1, -2, -3]).clause_type(), ClauseType::Nnn);
    }

    #[test]
    fn canonical_order_and_duplicates() {
        let c = cl([5, -1, 3]);
        assert_eq!(c.vars(), [0, 2, 4]);
        assert_eq!(c, cl([-1, 3, 5]));
        assert!(matches!(
            Clause::from_dimacs([1, 1, 2]),
            Err(Error::DuplicateVariable { var: 1 })
        ));
        assert!(matches!(
            Clause::from_dimacs([2, -2, 3]),
            Err(Error::DuplicateVariable { var: 2 })
        ));
    }

    #[test]
    fn satisfaction() {
        let c = cl([-1, -4, 5]);
        assert!(c.is_satisfied(&Assignment::all_ones(5)));
        let mut a = Assignment::all_ones(5);
        a.set(4, false);
        assert!(!c.is_satisfied(&a));
        assert!(!cl([1, 2, 3]).is_satisfied(&Assignment::all_zeros(3)));
    }

    #[test]
    fn sat_counts_duplicates() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        assert_eq!(f.sat_count(&Assignment::all_ones(3)), 1);
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(f.unsat_count(&Assignment::all_zeros(3)), 2);
        assert_eq!(f.sat_count(&Assignment::all_zeros(3)), 0);
    }

    #[test]
    #[should_panic(expected = "does not match")]
    fn sat_count_length_mismatch_panics() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        f.sat_count(&Assignment::all_ones(4));
    }

    #[test]
    fn votes_single_unsat_clause() {
        let f = Formula::from_dimacs_clauses(3, &[[1, 2, 3]]).unwrap();
        let t = f.compute_votes(&Assignment::all_zeros(3));
        assert_eq!(t.to_one, vec![1, 1, 1]);
        assert_eq!(t.to_zero, vec![0, 0, 0]);
        assert_eq!(f.improving_set(&Assignment::all_zeros(3)), vec![0, 1, 2]);
        assert!(!f.is_local_minimum(&Assignment::all_zeros(3)));
    }

    #[test]
    fn votes_sole_satisfier() {
        let f = Formula::from_dimacs_clauses(5, &[[-1, -4, 5]]).unwrap();
        let t = f.compute_votes(&Assignment::all_ones(5));
        assert_eq!(t.to_one, vec![0, 0, 0, 0, 1]);
        assert_eq!(t.to_zero, vec![0; 5]);
    }

    #[test]
    fn votes_empty_formula() {
        let f = Formula::empty(4).unwrap();
        let t = f.compute_votes(&Assignment::all_zeros(4));
        assert_eq!(t, VoteTally::zeros(4));
    }

    #[test]
    fn satisfying_assignment_is_non_proper_minimum() {
        let f = Formula::from_dimacs_clauses(4, &[[1, 2, 3], [-1, 2, 4], [1, -3, -4]]).unwrap();
        let a = Assignment::all_ones(4);
        assert!(f.is_satisfied_by(&a));
        assert!(f.is_local_minimum(&a));
        assert!(!f.is_proper_local_minimum(&a));
    }

    #[test]
    fn hamming_distance() {
        let ones = Assignment::all_ones(3);
        let zeros = Assignment::all_zeros(3);
        assert_eq!(ones.hamming(&ones).unwrap(), 0);
        assert_eq!(zeros.hamming(&ones).unwrap(), 3);
        assert_eq!(ones.hamming(&ones.flipped(1)).unwrap(), 1);
        assert!(ones.hamming(&Assignment::all_ones(4)).is_err());
    }

    #[test]
    fn too_few_variables_rejected() {
        assert!(matches!(Formula::empty(2), Err(Error::TooFewVariables(2))));
        assert!(matches!(
            Formula::from_dimacs_clauses(3, &[[1, 2, 4]]),
            Err(Error::VariableOutOfRange { var: 4, n: 3 })
        ));
    }

    #[test]
    fn transport_to_planted() {
        let planted = Assignment::new(vec![true, false, true]);
        let c = cl([1, 2, -3]).transported(&planted);
        assert_eq!(c, cl([1, -2, -3]));
        assert!(c.is_satisfied(&planted));
    }

    #[test]
    fn bits_roundtrip() {
        let a = Assignment::from_bits(5, 0b10110);
        assert_eq!(a.to_string(), "01101");
        assert_eq!(a.to_bits(), 0b10110);
    }
}
