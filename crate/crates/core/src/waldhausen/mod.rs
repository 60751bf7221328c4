//! The higher Waldhausen constructions `S⟨k⟩`, `S^{≤k}`, `S^{≥k}`, `S^{≶k}` over a backend:
//! cells as diagrams on `Fun([k],[n])`, their enumeration up to isomorphism, Segal and
//! path-space functors with equivalence checks, Kan extensions, hyperplane functors, and
//! the counterexamples for non-stringent categories.

mod cell;
mod counterexample;
mod equivalence;
mod kan;
mod search;
mod shape;

use serde_json::{json, Map, Value};

pub use cell::{
    classify, degeneracy, dual_shape, dualize, face, hypercube_check, mirror, partial_sequence_ok, reindex,
    sequence_maps, validate, validate_all, CellFailure, Diagram, Restriction,
};
pub use counterexample::{
    acyclic_family, left_exact_family, witness_search, CompletionSearch, Refutation, WitnessSearch,
};
pub use equivalence::{
    check_functor, forced_obstruction, path_space_functor, segal_functor, segal_shapes, Construction, Obstruction,
    PathKind, ShapeFunctor, WaldhausenReport,
};
pub use kan::{forget_path, hyperplane_functor, kan_extend_left, kan_extend_right};
pub use search::{
    budget_from_env, enumerate_classes, find_iso, homs_between, invariant, search, Classes, Problem, SearchStats,
    Tables, DEFAULT_BUDGET,
};
pub use shape::{is_injective, Key, SeqConstraint, Shape, Variant};

use crate::backend::Backend;

/// Cell JSON: objects by node key and maps by `"src->dst"`.
pub fn cell_json(b: Backend, shape: &Shape, d: &Diagram) -> Value {
    let mut objects = Map::new();
    for v in 0..shape.num_nodes() {
        objects.insert(shape.key_string(v), json!(d.sizes[v]));
    }
    let mut arrows = Map::new();
    for (a, &(s, t)) in shape.arrows.iter().enumerate() {
        if d.sizes[s] > 0 && d.sizes[t] > 0 {
            arrows.insert(format!("{}->{}", shape.key_string(s), shape.key_string(t)), b.mor_json(&d.maps[a]));
        }
    }
    json!({
        "k": shape.k,
        "n": shape.ambient,
        "variant": shape.variant,
        "backend": b,
        "objects": objects,
        "arrows": arrows,
    })
}
