//! A small answer set programming toolkit.
//!
//! The crate parses a Clingo-compatible fragment (normal rules, strong
//! negation, cardinality-bounded choice rules, integrity constraints),
//! grounds it, enumerates stable models, and works with *instance-relative
//! irrelevance*: a mapping that removes atoms (maps them to truth) or
//! clusters several atoms into one is accepted for a program and a family of
//! instances when, on every instance, mapping the answer sets of the
//! original program gives exactly the answer sets of the mapped program.
//! Such mappings are verified, discovered greedily, and used to produce
//! shorter justification trees.
//!
//! ```
//! use aspirrel::syntax::{ground, parse_program, parse_ground_atom};
//! use aspirrel::solver::{solve, SolverConfig};
//!
//! let program = parse_program("a. b :- a, not c.").unwrap();
//! let gp = ground(&program, &Default::default()).unwrap();
//! let models = solve(&gp, &SolverConfig::default()).unwrap();
//! assert_eq!(models.render(&gp), vec![vec!["a".to_string(), "b".to_string()]]);
//! # let _ = parse_ground_atom("a");
//! ```

pub mod abstraction;
pub mod corpus;
pub mod error;
pub mod explain;
pub mod random;
pub mod solver;
pub mod syntax;

pub use error::{Error, Result};

/// Version tag carried by every JSON document the crate emits.
pub const SCHEMA_VERSION: u32 = 1;
