//! The two displayed families that are meant to lie in the right-hand side of a lower
//! 3-Segal map without lying in its essential image, built on the equivalent models
//! `P◁S⟨2⟩_4 ≃ S^{≤1}_4` and `P◁P▷S⟨3⟩_4 ≃ S^{≶1}_4`.
//!
//! Every node and Hasse arrow of `Fun([1],[4])` lies in one of the pieces `{0123}`,
//! `{0134}`, `{1234}`, so a preimage is unique if it exists, and it exists iff the glued
//! diagram satisfies the one sequence condition no piece sees, at `γ = (0,2,4)`.

use serde::Serialize;
use serde_json::Value;

use super::cell::{validate, CellFailure, Diagram};
use super::cell_json;
use super::equivalence::{forced_obstruction, segal_functor, Construction, Obstruction, ShapeFunctor};
use super::search::{search, Problem, Tables};
use super::shape::{Shape, Variant};
use crate::backend::{Backend, Mor};
use crate::combinatorics::Side;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CompletionSearch {
    pub size_bound: usize,
    /// Entry bound for the infinite hom-sets of FreeAb.
    pub entry_bound: i64,
    pub visited: u64,
    pub preimage: Option<Value>,
}

/// Exhaustive search of the fiber product for any element with a forced obstruction.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSearch {
    pub size_bound: usize,
    pub entry_bound: i64,
    pub visited: u64,
    pub elements: u64,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    pub example: String,
    pub backend: Backend,
    pub parameters: Value,
    pub functor: String,
    pub fiber_product_valid: bool,
    /// First failed condition of the glued family inside its pieces.
    pub fiber_product_failure: Option<CellFailure>,
    pub obstruction: Option<Obstruction>,
    pub completion: CompletionSearch,
    pub preimage_exists: bool,
    /// True when the family is a valid element without a preimage.
    pub refuted: bool,
    pub witness_search: Option<WitnessSearch>,
    pub glued: Value,
}

/// Diagram on the grid `Fun([1],[4])` from object sizes and nonzero elementary maps keyed
/// by `"ij"` node names; maps out of or into zero objects are zero. The displayed family is
/// its restriction to the pieces.
fn staircase(b: Backend, shape: &Shape, sizes: &[(&str, usize)], maps: &[(&str, &str, Mor)]) -> Result<Diagram> {
    let node = |name: &str| -> Result<usize> {
        let key: Vec<u8> = name.bytes().map(|c| c - b'0').collect();
        shape.node(&key).ok_or_else(|| Error::Internal(format!("node {name} missing")))
    };
    let mut d = Diagram::zero(shape);
    for &(name, z) in sizes {
        d.sizes[node(name)?] = z as u8;
    }
    for (a, &(s, t)) in shape.arrows.iter().enumerate() {
        d.maps[a] = b.zero(d.sizes[s] as usize, d.sizes[t] as usize);
    }
    for (s, t, m) in maps {
        let (u, v) = (node(s)?, node(t)?);
        let a = *shape.arrow_index.get(&(u, v)).ok_or_else(|| Error::Internal(format!("arrow {s}->{t} missing")))?;
        if d.sizes[u] as usize != m.cols() || d.sizes[v] as usize != m.rows() {
            return Err(Error::Internal(format!("map {s}->{t} has the wrong shape")));
        }
        d.maps[a] = *m;
    }
    Ok(d)
}

fn lower_3_segal(variant: Variant) -> Result<ShapeFunctor> {
    segal_functor(Construction { k: 1, variant }, None, 4, 3, Side::Lower)
}

/// Searches for a cell of the big grid restricting to `glued`.
fn complete(f: &ShapeFunctor, t: &Tables, glued: &Diagram, budget: u64) -> Result<(Option<Diagram>, u64)> {
    let mut p = Problem::free(&f.source, t.bound);
    for (tn, &sn) in f.restriction.node_map.iter().enumerate() {
        p.fixed_sizes[sn] = Some(glued.sizes[tn]);
    }
    for (a, path) in f.restriction.arrow_paths.iter().enumerate() {
        if let [single] = path.as_slice() {
            p.fixed_maps[*single] = Some(glued.maps[a]);
        } else if !path.is_empty() {
            let start = f.restriction.node_map[f.target.arrows[a].0];
            p.chains.push((start, path.clone(), glued.maps[a]));
        }
    }
    let mut found = None;
    let stats = search(&p, t, budget, &mut |d| {
        found = Some(d.clone());
        false
    })?;
    Ok((found, stats.visited))
}

fn refute(
    example: &str,
    b: Backend,
    parameters: Value,
    f: &ShapeFunctor,
    glued: &Diagram,
    entry_bound: i64,
    budget: u64,
) -> Result<Refutation> {
    let failure = validate(b, &f.target, glued).err();
    let obstruction = forced_obstruction(f, b, glued);
    let bound = glued.sizes.iter().copied().max().unwrap_or(0) as usize;
    let t = Tables::new(b, bound, entry_bound)?;
    let (preimage, visited) = complete(f, &t, glued, budget)?;
    let valid = failure.is_none();
    let exists = preimage.is_some();
    Ok(Refutation {
        example: example.into(),
        backend: b,
        parameters,
        functor: f.label.clone(),
        fiber_product_valid: valid,
        fiber_product_failure: failure,
        obstruction,
        completion: CompletionSearch {
            size_bound: bound,
            entry_bound,
            visited,
            preimage: preimage.as_ref().map(|d| cell_json(b, &f.source, d)),
        },
        preimage_exists: exists,
        refuted: valid && !exists,
        witness_search: None,
        glued: cell_json(b, &f.target, glued),
    })
}

/// The family built from `A --(1,f)--> A⊕B --(0,1)--> B` with `A = B` of rank one and
/// `C = ker f`, on the left-exact model of `P◁S⟨2⟩_4`.
pub fn left_exact_family(b: Backend, f_scalar: i64, budget: u64) -> Result<Refutation> {
    if b == Backend::F1 {
        return Err(Error::InvalidArguments("the family needs an additive backend".into()));
    }
    let f = lower_3_segal(Variant::LeftExact)?;
    let fm = b.reduce(Mor::from_rows(1, &[vec![f_scalar]]));
    let c = b.kernel(&fm).ok_or_else(|| Error::ConstructionFailure("f has no kernel".into()))?;
    let cz = c.cols();
    let graph = b.reduce(Mor::from_rows(1, &[vec![1], vec![fm.get(0, 0)]]));
    let incl = Mor::from_rows(1, &[vec![1], vec![0]]);
    let proj = Mor::from_rows(2, &[vec![0, 1]]);
    let id = |n: usize| b.identity(n);
    let display = staircase(
        b,
        &f.source,
        &[("02", cz), ("03", cz), ("04", 1), ("12", 1), ("13", 1), ("14", 2), ("24", 1), ("34", 1)],
        &[
            ("02", "03", id(cz)),
            ("03", "04", c),
            ("02", "12", c),
            ("03", "13", c),
            ("04", "14", graph),
            ("12", "13", id(1)),
            ("13", "14", incl),
            ("14", "24", proj),
            ("24", "34", id(1)),
        ],
    )?;
    let glued = f.apply(b, &display);
    let params = serde_json::json!({ "A": 1, "B": 1, "f": fm.get(0, 0), "C": cz });
    refute("left_exact", b, params, &f, &glued, 2, budget)
}

/// The family with `A ⊕ A` and the maps `(1,0)`, `(1,1)`, `(0,1)` on the acyclic model of
/// `P◁P▷S⟨3⟩_4`; `rank = 0` is the zero control.
pub fn acyclic_family(b: Backend, rank: usize, budget: u64) -> Result<Refutation> {
    if rank > 1 {
        return Err(Error::InvalidArguments("the family is built for A of rank 0 or 1".into()));
    }
    let f = lower_3_segal(Variant::Acyclic)?;
    let glued = if rank == 0 {
        Diagram::zero(&f.target)
    } else {
        let display = staircase(
            b,
            &f.source,
            &[("03", 1), ("04", 1), ("12", 1), ("13", 2), ("14", 1), ("23", 1)],
            &[
                ("03", "04", b.identity(1)),
                ("03", "13", Mor::from_rows(1, &[vec![0], vec![1]])),
                ("04", "14", b.identity(1)),
                ("12", "13", Mor::from_rows(1, &[vec![1], vec![0]])),
                ("13", "14", Mor::from_rows(2, &[vec![1, 1]])),
                ("13", "23", Mor::from_rows(2, &[vec![0, 1]])),
            ],
        )?;
        f.apply(b, &display)
    };
    let params = serde_json::json!({ "A": rank, "k": 3 });
    refute("acyclic", b, params, &f, &glued, 1, budget)
}

/// Enumerates every element of the lower 3-Segal fiber product of the model of variant
/// `variant` within the bounds and returns the first one with a forced obstruction.
pub fn witness_search(
    b: Backend,
    variant: Variant,
    size_bound: usize,
    entry_bound: i64,
    budget: u64,
) -> Result<WitnessSearch> {
    let f = lower_3_segal(variant)?;
    let t = Tables::new(b, size_bound, entry_bound)?;
    let p = Problem::free(&f.target, size_bound);
    let mut witness = None;
    let stats = search(&p, &t, budget, &mut |d| {
        if forced_obstruction(&f, b, d).is_some() {
            witness = Some(cell_json(b, &f.target, d));
            return false;
        }
        true
    })?;
    Ok(WitnessSearch { size_bound, entry_bound, visited: stats.visited, elements: stats.emitted, witness })
}
