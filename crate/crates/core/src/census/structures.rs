//! Isolation, support clauses, caps and crowns.
//!
//! All counts are over clause occurrences: a duplicated clause contributes
//! once per position.

use serde::{Deserialize, Serialize};

use super::graph::PrimalGraph;
use crate::cnf::{Assignment, ClauseType, Formula};
use crate::error::{Error, Result};

/// For each variable, the positions of the `(+,−,−)` clauses in which it is
/// the positive literal.
pub fn pnn_positive_positions(f: &Formula) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); f.num_vars()];
    for (pos, c) in f.clauses().iter().enumerate() {
        if c.clause_type() == ClauseType::Pnn {
            let pos_lit = c.literals().iter().find(|l| l.is_positive()).expect("one positive");
            out[pos_lit.var()].push(pos);
        }
    }
    out
}

fn pnn_positive_count(f: &Formula, x: usize) -> usize {
    f.clauses()
        .iter()
        .filter(|c| c.clause_type() == ClauseType::Pnn)
        .filter(|c| c.literal_of(x).is_some_and(|l| l.is_positive()))
        .count()
}

/// `x` is positive in at most `k` clause occurrences of type `(+,−,−)`.
pub fn is_k_isolated(f: &Formula, x: usize, k: usize) -> bool {
    pnn_positive_count(f, x) <= k
}

/// Positions of clauses satisfied under `a` only by the literal `¬x`.
/// Requires `a[x] == 0`.
pub fn support_clauses(f: &Formula, a: &Assignment, x: usize) -> Result<Vec<usize>> {
    if a.len() != f.num_vars() {
        return Err(Error::LengthMismatch {
            expected: f.num_vars(),
            got: a.len(),
        });
    }
    if a[x] {
        return Err(Error::InvalidSpec(format!(
            "support clauses are defined for a 0-valued variable; x{} is 1",
            x + 1
        )));
    }
    Ok(f.clauses()
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.literal_of(x).is_some_and(|l| !l.is_positive()) && c.true_count(a) == 1
        })
        .map(|(p, _)| p)
        .collect())
}

/// Clauses `c1 = (x1 ∨ ¬x2 ∨ ¬x3)` at position `positions.0` and
/// `c2 = (¬x1 ∨ ¬x4 ∨ x5)` at `positions.1`, where `x1` and `x5` are
/// positive in no other `(+,−,−)` occurrence and `x2`, `x3` are positive in
/// at least one. `vars = [x1, x2, x3, x4, x5]` with `x2 < x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cap {
    pub vars: [usize; 5],
    pub positions: (usize, usize),
}

/// `c = (x1 ∨ x2 ∨ x3)`, `c1 = (¬x1 ∨ x4 ∨ x5)`, `c2 = (¬x2 ∨ x6 ∨ x7)`,
/// `c3 = (¬x3 ∨ x8 ∨ x9)` whose nine variables occur in no other clause.
/// `x1 < x2 < x3`, `x4 < x5`, `x6 < x7`, `x8 < x9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Crown {
    pub vars: [usize; 9],
    pub positions: [usize; 4],
}

pub fn find_caps(f: &Formula) -> Vec<Cap> {
    let pnn = pnn_positive_positions(f);
    let clauses = f.clauses();
    let mut caps = Vec::new();
    for (j, c2) in clauses.iter().enumerate() {
        if c2.clause_type() != ClauseType::Pnn {
            continue;
        }
        let lits = c2.literals();
        let x5 = lits.iter().find(|l| l.is_positive()).expect("one positive").var();
        if pnn[x5].len() != 1 {
            continue;
        }
        let negs: Vec<usize> = lits.iter().filter(|l| !l.is_positive()).map(|l| l.var()).collect();
        for (x1, x4) in [(negs[0], negs[1]), (negs[1], negs[0])] {
            if pnn[x1].len() != 1 {
                continue;
            }
            let i = pnn[x1][0];
            let c1 = &clauses[i];
            let mut inner = c1
                .literals()
                .iter()
                .filter(|l| !l.is_positive())
                .map(|l| l.var());
            let (x2, x3) = (inner.next().expect("two negatives"), inner.next().expect("two negatives"));
            if [x4, x5].iter().any(|v| *v == x2 || *v == x3) {
                continue;
            }
            if pnn[x2].is_empty() || pnn[x3].is_empty() {
                continue;
            }
            caps.push(Cap {
                vars: [x1, x2.min(x3), x2.max(x3), x4, x5],
                positions: (i, j),
            });
        }
    }
    caps.sort_unstable();
    caps
}

pub fn count_caps(f: &Formula) -> usize {
    find_caps(f).len()
}

/// Re-checks every cap condition by direct scans of the formula.
pub fn verify_cap(f: &Formula, cap: &Cap) -> bool {
    let [x1, x2, x3, x4, x5] = cap.vars;
    let (i, j) = cap.positions;
    let clauses = f.clauses();
    if i == j || i >= clauses.len() || j >= clauses.len() {
        return false;
    }
    let mut vs = cap.vars;
    vs.sort_unstable();
    if vs.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let lit = |pos: usize, v: usize| clauses[pos].literal_of(v).map(|l| l.is_positive());
    let shape = lit(i, x1) == Some(true)
        && lit(i, x2) == Some(false)
        && lit(i, x3) == Some(false)
        && lit(j, x1) == Some(false)
        && lit(j, x4) == Some(false)
        && lit(j, x5) == Some(true);
    shape
        && pnn_positive_count(f, x1) == 1
        && pnn_positive_count(f, x5) == 1
        && !is_k_isolated(f, x2, 0)
        && !is_k_isolated(f, x3, 0)
}

pub fn find_crowns(f: &Formula) -> Vec<Crown> {
    let occ = f.occurrences();
    let clauses = f.clauses();
    let mut crowns = Vec::new();
    'outer: for (p, c) in clauses.iter().enumerate() {
        if c.clause_type() != ClauseType::Ppp {
            continue;
        }
        let top = c.vars();
        let mut vars = [0usize; 9];
        let mut positions = [p, 0, 0, 0];
        vars[..3].copy_from_slice(&top);
        for (k, &x) in top.iter().enumerate() {
            if occ[x].len() != 2 {
                continue 'outer;
            }
            let q = if occ[x][0] as usize == p { occ[x][1] } else { occ[x][0] } as usize;
            if q == p {
                continue 'outer;
            }
            let leg = &clauses[q];
            if leg.clause_type() != ClauseType::Ppn || leg.literal_of(x).map(|l| l.is_positive()) != Some(false) {
                continue 'outer;
            }
            let mut outer = leg.literals().iter().filter(|l| l.is_positive()).map(|l| l.var());
            let (y, z) = (outer.next().expect("two positives"), outer.next().expect("two positives"));
            if occ[y].len() != 1 || occ[z].len() != 1 {
                continue 'outer;
            }
            positions[k + 1] = q;
            vars[3 + 2 * k] = y;
            vars[4 + 2 * k] = z;
        }
        crowns.push(Crown { vars, positions });
    }
    crowns
}

pub fn count_crowns(f: &Formula) -> usize {
    find_crowns(f).len()
}

/// Re-checks every crown condition by direct scans of the formula.
pub fn verify_crown(f: &Formula, crown: &Crown) -> bool {
    let clauses = f.clauses();
    if crown.positions.iter().any(|&p| p >= clauses.len()) {
        return false;
    }
    let mut ps = crown.positions;
    ps.sort_unstable();
    if ps.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let mut vs = crown.vars;
    vs.sort_unstable();
    if vs.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let v = crown.vars;
    let sign = |pos: usize, x: usize| clauses[pos].literal_of(x).map(|l| l.is_positive());
    let [pc, p1, p2, p3] = crown.positions;
    let shape = [v[0], v[1], v[2]].iter().all(|&x| sign(pc, x) == Some(true))
        && sign(p1, v[0]) == Some(false)
        && sign(p1, v[3]) == Some(true)
        && sign(p1, v[4]) == Some(true)
        && sign(p2, v[1]) == Some(false)
        && sign(p2, v[5]) == Some(true)
        && sign(p2, v[6]) == Some(true)
        && sign(p3, v[2]) == Some(false)
        && sign(p3, v[7]) == Some(true)
        && sign(p3, v[8]) == Some(true);
    if !shape {
        return false;
    }
    clauses.iter().enumerate().all(|(pos, c)| {
        crown.positions.contains(&pos) || c.vars().iter().all(|x| !crown.vars.contains(x))
    })
}

/// The proper local minimum a cap induces next to the all-ones assignment:
/// `x1 = x5 = 0`, every other variable 1. Clause `c1` is left unsatisfied;
/// `c2` is satisfied only by `¬x1` and holds `x1` at 0 against `c1`'s vote.
pub fn cap_minimum_assignment(f: &Formula, cap: &Cap) -> Assignment {
    let mut a = Assignment::all_ones(f.num_vars());
    a.set(cap.vars[0], false);
    a.set(cap.vars[4], false);
    a
}

/// All pairs `x < y` of `d1`-isolated variables at primal-graph distance at
/// most `d2`.
pub fn isolation_pair_scan(f: &Formula, d1: usize, d2: usize) -> Vec<(usize, usize)> {
    let g = PrimalGraph::new(f);
    isolation_pair_scan_with_graph(f, &g, d1, d2)
}

pub fn isolation_pair_scan_with_graph(
    f: &Formula,
    g: &PrimalGraph,
    d1: usize,
    d2: usize,
) -> Vec<(usize, usize)> {
    let pnn = pnn_positive_positions(f);
    let isolated: Vec<bool> = pnn.iter().map(|p| p.len() <= d1).collect();
    let mut pairs = Vec::new();
    for x in 0..f.num_vars() {
        if !isolated[x] {
            continue;
        }
        for (y, _) in g.ball(x, d2) {
            if y > x && isolated[y] {
                pairs.push((x, y));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// `rho^4 * n^(1 - (6/7) rho / ln n)`: the asymptotic order of the expected
/// cap count, up to an unstated constant and a `1 + o(1)` factor. For
/// scaling comparisons only; exact values come from
/// [`crate::oracle::cap_probability`].
pub fn expected_caps_paper(n: usize, rho: f64) -> f64 {
    let n = n as f64;
    rho.powi(4) * n.powf(1.0 - (6.0 / 7.0) * rho / n.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, cs: &[[i64; 3]]) -> Formula {
        Formula::from_dimacs_clauses(n, cs).unwrap()
    }

    /// c1, c2 and one `(+,−,−)` clause each for x2 and x3 on fresh variables.
    fn single_cap() -> Formula {
        f(9, &[[1, -2, -3], [-1, -4, 5], [2, -6, -7], [3, -8, -9]])
    }

    fn crown() -> Formula {
        f(9, &[[1, 2, 3], [-1, 4, 5], [-2, 6, 7], [-3, 8, 9]])
    }

    #[test]
    fn isolation_boundaries() {
        let g = f(6, &[[1, -2, -3], [1, -4, -5], [-1, 2, 6]]);
        assert!(is_k_isolated(&g, 5, 0));
        assert!(!is_k_isolated(&g, 0, 1));
        assert!(is_k_isolated(&g, 0, 2));
        // PPN occurrences do not count.
        assert!(is_k_isolated(&g, 1, 0));
        let dup = f(3, &[[1, -2, -3], [1, -2, -3]]);
        assert!(!is_k_isolated(&dup, 0, 1));
        assert!(is_k_isolated(&dup, 0, 2));
    }

    #[test]
    fn support_clause_examples() {
        let g = f(5, &[[-1, -4, 5]]);
        let a = Assignment::new(vec![false, true, true, true, false]);
        assert_eq!(support_clauses(&g, &a, 0).unwrap(), vec![0]);
        let b = Assignment::new(vec![false, true, true, true, true]);
        assert!(support_clauses(&g, &b, 0).unwrap().is_empty());
        let h = f(5, &[[1, 2, 3]]);
        assert!(support_clauses(&h, &Assignment::all_zeros(5), 0).unwrap().is_empty());
        assert!(support_clauses(&g, &Assignment::all_ones(5), 0).is_err());
    }

    #[test]
    fn hand_built_cap() {
        let g = single_cap();
        let caps = find_caps(&g);
        assert_eq!(caps.len(), 1);
        assert_eq!(caps[0].vars, [0, 1, 2, 3, 4]);
        assert_eq!(caps[0].positions, (0, 1));
        assert!(verify_cap(&g, &caps[0]));
        assert_eq!(count_caps(&Formula::empty(5).unwrap()), 0);
    }

    #[test]
    fn cap_needs_support_for_x2_x3() {
        let g = f(7, &[[1, -2, -3], [-1, -4, 5], [2, -6, -7]]);
        assert_eq!(count_caps(&g), 0);
    }

    #[test]
    fn cap_breaks_when_x1_not_isolated() {
        let g = f(11, &[[1, -2, -3], [-1, -4, 5], [2, -6, -7], [3, -8, -9], [1, -10, -11]]);
        assert_eq!(count_caps(&g), 0);
    }

    #[test]
    fn duplicated_cap_clause_counts_by_position() {
        // Duplicating c2 makes x5 positive in two (+,−,−) occurrences.
        let g = f(9, &[[1, -2, -3], [-1, -4, 5], [2, -6, -7], [3, -8, -9], [-1, -4, 5]]);
        assert_eq!(count_caps(&g), 0);
        // A second c2-shaped clause with a fresh x5' yields a second cap.
        let h = f(11, &[[1, -2, -3], [-1, -4, 5], [2, -6, -7], [3, -8, -9], [-1, -10, 11]]);
        let caps = find_caps(&h);
        assert_eq!(caps.len(), 2);
        assert!(caps.iter().all(|c| verify_cap(&h, c)));
    }

    #[test]
    fn cap_minimum_is_proper() {
        let g = single_cap();
        let cap = find_caps(&g)[0];
        let a = cap_minimum_assignment(&g, &cap);
        assert_eq!(a.zeros(), 2);
        assert!(g.is_proper_local_minimum(&a));
        assert!(!g.clauses()[cap.positions.0].is_satisfied(&a));
        assert_eq!(g.unsat_count(&a), 1);
    }

    /// A `(x1 ∨ x5 ∨ ¬y)` clause leaves the cap intact but is false under
    /// the cap minimum, so flipping `x1` gains.
    #[test]
    fn clause_with_positives_x1_x5_defeats_cap_minimum() {
        let g = f(
            10,
            &[[1, -2, -3], [-1, -4, 5], [2, -6, -7], [3, -8, -9], [1, 5, -10]],
        );
        let caps = find_caps(&g);
        assert_eq!(caps.len(), 1);
        let a = cap_minimum_assignment(&g, &caps[0]);
        assert_eq!(g.unsat_count(&a), 2);
        assert_eq!(g.improving_set(&a), vec![0, 4, 9]);
    }

    #[test]
    fn zeroing_x3_and_x5_is_not_a_minimum() {
        let g = single_cap();
        let mut a = Assignment::all_ones(9);
        a.set(2, false);
        a.set(4, false);
        assert!(!g.clauses()[1].is_satisfied(&a));
        assert!(!g.is_local_minimum(&a));
    }

    #[test]
    fn crown_detection() {
        let g = crown();
        let cs = find_crowns(&g);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].vars, [0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(cs[0].positions, [0, 1, 2, 3]);
        assert!(verify_crown(&g, &cs[0]));

        let spoiled = f(10, &[[1, 2, 3], [-1, 4, 5], [-2, 6, 7], [-3, 8, 9], [1, -10, 4]]);
        assert_eq!(count_crowns(&spoiled), 0);
        let outer = f(10, &[[1, 2, 3], [-1, 4, 5], [-2, 6, 7], [-3, 8, 9], [9, -10, 6]]);
        assert_eq!(count_crowns(&outer), 0);
    }

    #[test]
    fn crown_order_independent_of_positions() {
        let g = f(9, &[[-3, 8, 9], [-2, 6, 7], [1, 2, 3], [-1, 4, 5]]);
        let cs = find_crowns(&g);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].positions, [2, 3, 1, 0]);
        assert!(verify_crown(&g, &cs[0]));
    }

    #[test]
    fn isolation_pairs() {
        let g = f(3, &[[1, -2, -3]]);
        assert_eq!(isolation_pair_scan(&g, 1, 1), vec![(0, 1), (0, 2), (1, 2)]);
        let none = f(6, &[[1, 2, 3], [3, 4, 5], [5, 6, -1]]);
        let pairs = isolation_pair_scan(&none, 1, 1);
        let g2 = PrimalGraph::new(&none);
        let expect: Vec<(usize, usize)> = (0..6)
            .flat_map(|x| (x + 1..6).map(move |y| (x, y)))
            .filter(|&(x, y)| g2.distance(x, y).is_some_and(|d| d <= 1))
            .collect();
        assert_eq!(pairs, expect);
    }

    #[test]
    fn paper_cap_order() {
        let v = expected_caps_paper(1_000_000, 1.0);
        let direct = 1e6f64 * (-(6.0f64 / 7.0)).exp();
        assert!((v / direct - 1.0).abs() < 1e-12);
        assert!((v / 4.2437e5 - 1.0).abs() < 1e-3);
        assert!(expected_caps_paper(1000, 1e-6) < 1e-20);
        // log-linear in rho apart from the 4 ln(rho) term
        let n = 5000usize;
        let l = |r: f64| expected_caps_paper(n, r).ln() - 4.0 * r.ln();
        let slope = (l(2.0) - l(1.0)) / 1.0;
        assert!((slope + 6.0 / 7.0).abs() < 1e-9);
    }
}
