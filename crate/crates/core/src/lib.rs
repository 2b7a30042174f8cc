//! Discrete covering theory of finite uniform spaces.
//!
//! Spaces carry a finite descending chain of entourages. On top of that the
//! crate builds Rips complexes and chain homotopy, decision procedures for
//! uniform covering maps, a classifier for group actions, the uniform
//! structures on function spaces and acting groups, and generalized paths.

pub mod actions;
pub mod convergence;
pub mod covering;
pub mod error;
pub mod generate;
pub mod genpaths;
pub mod io;
pub mod map;
pub mod par;
pub mod props;
pub mod relation;
pub mod rips;
pub mod space;
pub mod suite;
pub mod verdict;

pub use error::{Error, Result};
pub use map::{RawMap, UniformMap};
pub use relation::{RawRelation, SymRelation};
pub use space::{
    validate_space, Chain, EntourageChain, FiniteUniformSpace, Mode, RawSpace, ValidationError, Violation,
};
pub use verdict::{Counterexample, Status, TableRow, Verdict, Witness};
