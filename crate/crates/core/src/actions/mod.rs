//! Finite group actions: the classifier, orbit spaces, and the implication
//! lattice between action properties and covering properties of the projection.

pub mod classify;
pub mod group;
pub mod quotient;
pub mod theorems;

pub use classify::{classify_action, ActionReport};
pub use group::{GroupAction, RawAction, DEFAULT_GROUP_CAP};
pub use quotient::{orbit_space, QuotientResult};
pub use theorems::{action_checks, verify_action_theorems, ActionTheorems};
