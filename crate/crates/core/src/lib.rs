//! Desk-scale verification toolkit for higher Segal conditions.
//!
//! The crate covers the combinatorics of cyclic polytopes (Gale evenness, triangulations,
//! flips, the "lies below" order), explicit finite categories and strict limits, concrete
//! proto-exact categories, the higher Waldhausen and Segal constructions built from them,
//! and Hall-algebra structure constants.

pub mod backend;
pub mod category;
pub mod combinatorics;
pub mod error;
pub mod hall;
pub mod polytope;
pub mod segal_sum;
pub mod waldhausen;

pub use backend::{Backend, Mor, SequenceClass};
pub use category::{CatFunctor, EquivalenceReport, FinCategory};
pub use combinatorics::{MonotoneMap, Parity, SegalPoset, Side, SubsetOfN};
pub use error::{Error, Result};
pub use polytope::Triangulation;
