//! DIMACS CNF reader and writer restricted to 3-CNF with distinct variables
//! per clause.

use std::fmt::Write as _;
use std::path::Path;

use crate::cnf::{Clause, Formula, Literal};
use crate::error::{Error, Result};

pub fn read(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<(i64, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "duplicate header".into(),
                });
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let (n, _) = header.ok_or_else(|| Error::Parse {
            line: line_no,
            msg: "clause before \"p cnf\" header".into(),
        })?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad literal {tok:?}"),
            })?;
            if lit == 0 {
                clauses.push(finish_clause(&pending, n)?);
                pending.clear();
            } else {
                pending.push((lit, line_no));
            }
        }
    }

    let (n, m) = header.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing \"p cnf\" header".into(),
    })?;
    if let Some(&(_, line)) = pending.first() {
        return Err(Error::Parse {
            line,
            msg: "last clause is not terminated by 0".into(),
        });
    }
    if clauses.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} clauses, found {}", clauses.len()),
        });
    }
    Formula::new(n, clauses)
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let bad = || Error::Parse {
        line: line_no,
        msg: format!("malformed header {line:?}"),
    };
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
        return Err(bad());
    }
    let n = toks[2].parse().map_err(|_| bad())?;
    let m = toks[3].parse().map_err(|_| bad())?;
    Ok((n, m))
}

fn finish_clause(lits: &[(i64, usize)], n: usize) -> Result<Clause> {
    let line = lits.first().map_or(0, |&(_, l)| l);
    if lits.len() != 3 {
        return Err(Error::Width {
            line,
            width: lits.len(),
        });
    }
    let mut out = [Literal::positive(0); 3];
    for (slot, &(lit, _)) in out.iter_mut().zip(lits) {
        if lit.unsigned_abs() as usize > n {
            return Err(Error::VariableOutOfRange {
                var: lit.unsigned_abs() as usize,
                n,
            });
        }
        *slot = Literal::from_dimacs(lit).expect("nonzero");
    }
    Clause::new(out[0], out[1], out[2])
}

/// Writes `f` as DIMACS. Each entry of `comments` becomes a `c` line.
pub fn write_with_comments(f: &Formula, comments: &[String]) -> String {
    let mut out = String::with_capacity(16 * f.num_clauses() + 32);
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses());
    for c in f.clauses() {
        let [a, b, d] = c.literals();
        let _ = writeln!(
            out,
            "{} {} {} 0",
            a.to_dimacs(),
            b.to_dimacs(),
            d.to_dimacs()
        );
    }
    out
}

pub fn write(f: &Formula) -> String {
    write_with_comments(f, &[])
}

pub fn read_path(path: &Path) -> Result<Formula> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read(&text)
}
