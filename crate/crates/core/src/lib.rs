//! Constructive zero-sum combinatorics over the naturals.
//!
//! * [`zerosum`]: Erdős–Ginzburg–Ziv solvers, colored partitions, the
//!   Davenport constant of a cyclic group.
//! * [`sets`]: symbolic subsets of `N` and bounded analyzers for thick,
//!   syndetic and piecewise syndetic structure.
//! * [`central`]: computable surrogates for a central set and its star set.
//! * [`config`]: level-by-level construction of zero-sum blocks whose
//!   translated chain sums stay inside a central surrogate, plus a
//!   certificate format and an independent verifier.

pub mod central;
pub mod config;
pub mod domain;
pub mod error;
pub mod sets;
pub mod zerosum;

pub use domain::{Budget, Coloring, InputSequence, Modulus, ZeroSumWitness};
pub use error::{Error, Result};
