//! Incrementally maintained search state.
//!
//! Per clause we keep the number of true literals; per variable the vote
//! tally; and the improving set as an indexed set supporting O(1) insert,
//! remove, membership and uniform sampling. Flipping `x` only touches the
//! clauses in `x`'s occurrence list and the variables they mention.

use rand::Rng as _;

use crate::cnf::{add_clause_votes, Assignment, Formula, VoteTally};
use crate::seed::Rng;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct IndexedSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

impl IndexedSet {
    pub fn new(universe: usize) -> Self {
        IndexedSet {
            items: Vec::new(),
            pos: vec![ABSENT; universe],
        }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.pos[x] != ABSENT
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        if self.pos[x] == ABSENT {
            self.pos[x] = self.items.len() as u32;
            self.items.push(x as u32);
        }
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        let p = self.pos[x];
        if p == ABSENT {
            return;
        }
        let last = *self.items.last().expect("non-empty");
        self.items.swap_remove(p as usize);
        if last as usize != x {
            self.pos[last as usize] = p;
        }
        self.pos[x] = ABSENT;
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn sample(&self, rng: &mut Rng) -> usize {
        self.items[rng.gen_range(0..self.items.len())] as usize
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.items.iter().map(|&x| x as usize).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone)]
pub struct SearchState<'f> {
    formula: &'f Formula,
    occ: Vec<Vec<u32>>,
    assignment: Assignment,
    true_count: Vec<u8>,
    votes: VoteTally,
    improving: IndexedSet,
    unsat: usize,
}

impl<'f> SearchState<'f> {
    pub fn new(formula: &'f Formula, assignment: Assignment) -> Self {
        let n = formula.num_vars();
        let occ = formula.occurrences();
        let true_count: Vec<u8> = formula
            .clauses()
            .iter()
            .map(|c| c.true_count(&assignment))
            .collect();
        let mut votes = VoteTally::zeros(n);
        for (c, &tc) in formula.clauses().iter().zip(&true_count) {
            add_clause_votes(c, tc, &assignment, &mut votes, 1);
        }
        let unsat = true_count.iter().filter(|&&t| t == 0).count();
        let mut improving = IndexedSet::new(n);
        for x in 0..n {
            if votes.gain(x, assignment[x]) > 0 {
                improving.insert(x);
            }
        }
        SearchState {
            formula,
            occ,
            assignment,
            true_count,
            votes,
            improving,
            unsat,
        }
    }

    #[inline]
    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn into_assignment(self) -> Assignment {
        self.assignment
    }

    #[inline]
    pub fn unsat(&self) -> usize {
        self.unsat
    }

    #[inline]
    pub fn margin(&self, x: usize) -> i64 {
        self.votes.margin(x)
    }

    #[inline]
    pub fn is_improving(&self, x: usize) -> bool {
        self.improving.contains(x)
    }

    #[inline]
    pub fn improving(&self) -> &IndexedSet {
        &self.improving
    }

    pub fn flip(&mut self, x: usize) {
        let clauses = self.formula.clauses();
        for &p in &self.occ[x] {
            let p = p as usize;
            add_clause_votes(
                &clauses[p],
                self.true_count[p],
                &self.assignment,
                &mut self.votes,
                -1,
            );
        }
        self.assignment.flip(x);
        let now = self.assignment[x];
        for &p in &self.occ[x] {
            let p = p as usize;
            let c = &clauses[p];
            let lit_true = c.literal_of(x).expect("occurrence list").holds_for(now);
            let before = self.true_count[p];
            let after = if lit_true { before + 1 } else { before - 1 };
            self.true_count[p] = after;
            match (before, after) {
                (0, _) => self.unsat -= 1,
                (_, 0) => self.unsat += 1,
                _ => {}
            }
            add_clause_votes(c, after, &self.assignment, &mut self.votes, 1);
        }
        for i in 0..self.occ[x].len() {
            let p = self.occ[x][i] as usize;
            for v in clauses[p].vars() {
                self.refresh(v);
            }
        }
        self.refresh(x);
    }

    #[inline]
    fn refresh(&mut self, v: usize) {
        if self.votes.gain(v, self.assignment[v]) > 0 {
            self.improving.insert(v);
        } else {
            self.improving.remove(v);
        }
    }

    /// Compares the maintained state against a from-scratch recomputation.
    pub fn check_consistency(&self) -> Result<(), String> {
        let f = self.formula;
        let votes = f.compute_votes(&self.assignment);
        if votes != self.votes {
            return Err("vote tally diverged from recomputation".into());
        }
        let u = f.improving_set(&self.assignment);
        if u != self.improving.sorted() {
            return Err(format!(
                "improving set diverged: maintained {:?}, recomputed {:?}",
                self.improving.sorted(),
                u
            ));
        }
        if f.unsat_count(&self.assignment) != self.unsat {
            return Err("unsatisfied-clause count diverged".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_assignment, sample, GeneratorSpec};
    use crate::seed::Seed;

    #[test]
    fn indexed_set_ops() {
        let mut s = IndexedSet::new(6);
        for x in [4, 1, 5, 1] {
            s.insert(x);
        }
        assert_eq!(s.sorted(), vec![1, 4, 5]);
        s.remove(4);
        s.remove(0);
        assert_eq!(s.sorted(), vec![1, 5]);
        assert!(s.contains(5) && !s.contains(4));
        s.remove(5);
        s.remove(1);
        assert!(s.is_empty());
    }

    #[test]
    fn random_flips_match_recomputation() {
        for trial in 0..200 {
            let seed = Seed::new(77, trial);
            let n = 3 + (trial as usize % 8);
            let m = trial as usize % 25;
            let spec = if trial % 2 == 0 {
                GeneratorSpec::uniform(n, m)
            } else {
                GeneratorSpec::planted(n, m)
            };
            let f = sample(&spec, seed).unwrap();
            let mut rng = seed.rng();
            let mut st = SearchState::new(&f, random_assignment(n, &mut rng));
            st.check_consistency().unwrap();
            for _ in 0..40 {
                st.flip(rng.gen_range(0..n));
                st.check_consistency().unwrap();
            }
        }
    }
}
