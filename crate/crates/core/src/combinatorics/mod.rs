//! Subsets of `[n]`, gap parity, Gale's evenness criterion, the lower/upper Segal posets,
//! and the face/degeneracy calculus of monotone maps.

mod monotone;
mod poset;
mod subset;

pub use monotone::{monotone_maps, simplex_degeneracies, simplex_faces, MonotoneMap};
pub use poset::{decompose_lower_poset, right_cone_of_lower, segal_poset, LowerPiece, SegalPoset, Side};
pub use subset::{classify_subset, embed_in_even, gale_facets, subsets_of_size, Parity, SubsetOfN};
