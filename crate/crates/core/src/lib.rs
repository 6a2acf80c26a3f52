//! Random 3-CNF laboratory: formulas and votes, seeded generators, local
//! search solvers, structure census, exact oracles and experiment sweeps.

pub mod census;
pub mod cnf;
pub mod dimacs;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod oracle;
pub mod seed;
pub mod solver;
pub mod stats;

pub use cnf::{Assignment, Clause, ClauseType, Formula, Literal, VoteTally};
pub use error::{Error, Result};
pub use generate::{GeneratorConfig, GeneratorSpec, Mode};
pub use seed::{Purpose, Seed};
pub use solver::{RunOptions, RunTrace, SolverKind, Status};
