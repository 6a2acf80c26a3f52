//! Brute-force reference computations written directly from the definitions,
//! sharing no code with the library's evaluation or vote routines.

#![allow(dead_code)]

use lslab::cnf::Formula;

/// Clauses as signed DIMACS literals.
pub fn signed(f: &Formula) -> Vec<[i64; 3]> {
    f.clauses()
        .iter()
        .map(|c| {
            let l = c.literals();
            [l[0].to_dimacs(), l[1].to_dimacs(), l[2].to_dimacs()]
        })
        .collect()
}

fn lit_true(lit: i64, bits: u64) -> bool {
    let v = lit.unsigned_abs() - 1;
    let value = bits >> v & 1 == 1;
    value == (lit > 0)
}

pub fn sat(clauses: &[[i64; 3]], bits: u64) -> usize {
    clauses
        .iter()
        .filter(|c| c.iter().any(|&l| lit_true(l, bits)))
        .count()
}

/// Votes for `x -> 1` and `x -> 0` by the rule: a clause votes for the value
/// making its `x` literal true when its other two literals are false.
pub fn votes(clauses: &[[i64; 3]], bits: u64, x: usize) -> (i64, i64) {
    let mut to_one = 0;
    let mut to_zero = 0;
    for c in clauses {
        for (i, &l) in c.iter().enumerate() {
            if l.unsigned_abs() as usize - 1 != x {
                continue;
            }
            let others_false = c
                .iter()
                .enumerate()
                .all(|(j, &o)| j == i || !lit_true(o, bits));
            if others_false {
                if l > 0 {
                    to_one += 1;
                } else {
                    to_zero += 1;
                }
            }
        }
    }
    (to_one, to_zero)
}

/// No single flip strictly increases the satisfied count.
pub fn is_local_min(clauses: &[[i64; 3]], n: usize, bits: u64) -> bool {
    let here = sat(clauses, bits);
    (0..n).all(|v| sat(clauses, bits ^ (1 << v)) <= here)
}
