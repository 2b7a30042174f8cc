//! Rips complexes, their first homology and fundamental group, and
//! E-homotopy of chains.

pub mod complex;
pub mod coset;
pub mod homology;
pub mod homotopy;
pub mod presentation;

pub use complex::{build_rips, induced_simplicial_map, RawComplex, RipsComplex, SimplicialMap, StarFailure};
pub use coset::{enumerate_cosets, CosetTable};
pub use homology::{h1, smith, AbelianInvariants, IntLattice};
pub use homotopy::{replay, Budgets, HomotopyContext, HomotopyVerdict, Move, MoveKind, Obstruction};
pub use presentation::{pi1_presentation, EdgePathGroup, Presentation, Word};
