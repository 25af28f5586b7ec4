//! Subset repairs of inconsistent relational databases computed through Dung
//! argumentation frameworks.
//!
//! The crate is organised bottom-up:
//!
//! * [`relational`]: databases, functional and inclusion dependencies, and the
//!   repair predicate evaluated directly on tuples.
//! * [`af`]: argumentation frameworks and extension enumeration under the
//!   conflict-free, naive, admissible, preferred and stable semantics.
//! * [`translation`]: database instances to frameworks, including the
//!   pre-processing fixpoint for inclusion dependencies.
//! * [`reasoning`]: repair enumeration, existence, brave and cautious
//!   membership, and a brute-force oracle.
//! * [`reductions`]: SAT and ∀∃-QBF encodings into repair problems.
//! * [`io`]: CSV relations, dependency files, DIMACS/QDIMACS and APX.

pub mod af;
pub mod error;
pub mod generate;
mod graph;
pub mod io;
pub mod reasoning;
pub mod reductions;
pub mod relational;
pub mod translation;

#[doc(hidden)]
pub mod fixtures;

pub use error::{Error, Result};
