//! Cyclic polytopes `C([n], d)` in exact arithmetic: facet classification, triangulations,
//! elementary flips and the "lies below" order on simplices.

mod exact;
mod geometry;
mod order;
mod triangulation;

pub use exact::{det, feasible, moment_point, Constraint, MomentPoint, Rat, Rel};
pub use geometry::{
    facet_side_geometric, lies_below, proper_intersection_circuit, EmptyIntersection, FacetSide, MomentConfig,
};
pub use order::{
    below_order_check, below_relation, below_relation_variant, highest_simplex, lowest_simplex, BelowOrder,
    BelowVariant,
};
pub use triangulation::{
    canonical_triangulation, circuit_facets, enumerate_triangulations, enumerate_triangulations_with, flip,
    is_triangulation, EnumerationLimits, FlipEdge, FlipGraph, Triangulation, TriangulationCertificate,
};
