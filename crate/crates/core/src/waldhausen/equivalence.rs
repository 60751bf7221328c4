//! Segal maps and path-space forgetful functors of Waldhausen constructions, and the
//! decision of whether such a restriction functor is an equivalence on bounded slices.
//!
//! Full faithfulness is certified stagewise. The nodes outside the image are added one at
//! a time, and at each stage the restriction of natural transformations must be bijective.
//! That holds for a pair `(X, Y)` when `X_β` is the colimit of `X` over the present nodes
//! below `β` or `Y_β` is the limit of `Y` over the present nodes above `β` (tested as a
//! bijection on elements). Pairs without such a certificate are decided by enumerating
//! natural transformations on both sides.

use serde::Serialize;
use serde_json::Value;

use super::cell::{limit_bijective, partial_sequence_ok, Diagram, Restriction};
use super::cell_json;
use super::search::{enumerate_classes, homs_between, Tables};
use super::shape::{Key, Shape, Variant};
use crate::backend::{Backend, Mor};
use crate::category::Reindexing;
use crate::combinatorics::{segal_poset, Side};
use crate::error::{Error, Result};

/// A Waldhausen-type construction: `S⟨k⟩` is `(k, Exact)`, `S^{≤k}` is `(k, LeftExact)`,
/// `S^{≥k}` is `(k, RightExact)`, `S^{≶k}` is `(k, Acyclic)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub k: usize,
    pub variant: Variant,
}

impl Construction {
    pub fn pair(k: usize) -> Construction {
        Construction { k, variant: Variant::Exact }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Left,
    Right,
    Double,
}

/// A restriction functor between cell categories.
pub struct ShapeFunctor {
    pub label: String,
    pub source: Shape,
    pub target: Shape,
    pub restriction: Restriction,
}

impl ShapeFunctor {
    pub fn apply(&self, b: Backend, d: &Diagram) -> Diagram {
        self.restriction.apply(b, &self.target, d)
    }
}

/// Source grid and union target of a Segal map of `X = S^{(variant)}⟨k⟩`, optionally
/// reindexed (path spaces, edgewise subdivision), at level `n`.
pub fn segal_shapes(
    c: Construction,
    reindexing: Option<Reindexing>,
    n: usize,
    d: usize,
    side: Side,
) -> Result<(Shape, Shape)> {
    let level = reindexing.map_or(n, |r| r.level(n));
    let poset = segal_poset(n, d, side)?;
    let pieces: Vec<_> = poset.maximal.iter().map(|i| reindexing.map_or_else(|| i.clone(), |r| r.subset(i))).collect();
    let source = Shape::grid(c.k, level, c.variant)?;
    let target = Shape::union(c.k, level, &pieces, c.variant)?;
    Ok((source, target))
}

pub fn segal_functor(
    c: Construction,
    reindexing: Option<Reindexing>,
    n: usize,
    d: usize,
    side: Side,
) -> Result<ShapeFunctor> {
    let (source, target) = segal_shapes(c, reindexing, n, d, side)?;
    let restriction = Restriction::new(&source, &target, |k| k.to_vec())?;
    let side_s = match side {
        Side::Lower => "lower",
        Side::Upper => "upper",
    };
    let r = reindexing.map_or(String::new(), |r| format!(" of {r:?}"));
    Ok(ShapeFunctor {
        label: format!("{side_s} {d}-Segal map{r} of S^({},{}) at n={n}", c.k, c.variant),
        source,
        target,
        restriction,
    })
}

/// The forgetful functor from a path space of `S⟨k⟩` at level `n`:
/// left `A ↦ A_{[0]⊕−}` onto `S^{≤k−1}_n`, right `A ↦ A_{−⊕[0]}` onto `S^{≥k−1}_n`, double
/// `A ↦ A_{[0]⊕−⊕[0]}` onto `S^{≶k−2}_n`.
pub fn path_space_functor(k: usize, n: usize, kind: PathKind) -> Result<ShapeFunctor> {
    let (drop, level, variant) = match kind {
        PathKind::Left => (1, n + 1, Variant::LeftExact),
        PathKind::Right => (1, n + 1, Variant::RightExact),
        PathKind::Double => (2, n + 2, Variant::Acyclic),
    };
    if k < drop {
        return Err(Error::InvalidArguments(format!("{kind:?} path space needs k >= {drop}")));
    }
    let source = Shape::grid(k, level, Variant::Exact)?;
    let target = Shape::grid(k - drop, n, variant)?;
    let top = level as u8;
    let restriction = Restriction::new(&source, &target, |beta| -> Key {
        let shifted = beta.iter().map(|&x| x + 1);
        match kind {
            PathKind::Left => std::iter::once(0).chain(shifted).collect(),
            PathKind::Right => beta.iter().copied().chain(std::iter::once(top)).collect(),
            PathKind::Double => std::iter::once(0).chain(shifted).chain(std::iter::once(top)).collect(),
        }
    })?;
    Ok(ShapeFunctor { label: format!("{kind:?} path space of S<{k}> at n={n}"), source, target, restriction })
}

#[derive(Clone, Debug, Serialize)]
pub struct WaldhausenReport {
    pub functor: String,
    pub backend: Backend,
    pub bound: usize,
    pub source_classes: usize,
    pub target_classes: usize,
    pub essentially_surjective: bool,
    /// A target cell outside the essential image.
    pub es_witness: Option<Value>,
    pub fully_faithful: bool,
    /// Two source cells on which the functor is not bijective on morphisms.
    pub ff_witness: Option<(Value, Value)>,
    pub certified_pairs: usize,
    pub enumerated_pairs: usize,
    pub verdict: bool,
}

/// Cap on natural transformations enumerated per uncertified pair.
const HOM_CAP: usize = 2_000_000;

/// Decides whether the functor is an equivalence between the slices of cells with all
/// objects of size at most `bound` (the source slice is the preimage of the target slice;
/// subquotient closure makes both the same size condition).
pub fn check_functor(f: &ShapeFunctor, b: Backend, bound: usize, budget: u64) -> Result<WaldhausenReport> {
    if !b.is_finite() {
        return Err(Error::InvalidArguments(
            "equivalence checks need finite hom-sets; FreeAb is supported only for counterexample searches".into(),
        ));
    }
    let t = Tables::new(b, bound, 1)?;
    let src = enumerate_classes(&f.source, &t, bound, budget)?;
    let tgt = enumerate_classes(&f.target, &t, bound, budget)?;
    let mut hit: Vec<Option<usize>> = vec![None; tgt.len()];
    let mut ff_witness = None;
    let images: Vec<Diagram> = src.reps.iter().map(|x| f.apply(b, x)).collect();
    for (i, fx) in images.iter().enumerate() {
        let j = tgt
            .find(&t, &f.target, fx)
            .ok_or_else(|| Error::Internal(format!("{}: image of a source cell is not a target cell", f.label)))?;
        match hit[j] {
            Some(other) if ff_witness.is_none() => {
                ff_witness = Some((cell_json(b, &f.source, &src.reps[other]), cell_json(b, &f.source, &src.reps[i])));
            }
            None => hit[j] = Some(i),
            _ => {}
        }
    }
    let es_witness = hit.iter().position(|h| h.is_none()).map(|j| cell_json(b, &f.target, &tgt.reps[j]));

    let cert = Certificates::new(f, b, &src.reps)?;
    let (mut certified, mut enumerated) = (0usize, 0usize);
    if ff_witness.is_none() {
        'pairs: for (i, x) in src.reps.iter().enumerate() {
            for (j, y) in src.reps.iter().enumerate() {
                if cert.certified(i, j) {
                    certified += 1;
                    continue;
                }
                enumerated += 1;
                if !hom_bijective(f, &t, x, y, &images[i], &images[j])? {
                    ff_witness = Some((cell_json(b, &f.source, x), cell_json(b, &f.source, y)));
                    break 'pairs;
                }
            }
        }
    }
    let (es, ff) = (es_witness.is_none(), ff_witness.is_none());
    Ok(WaldhausenReport {
        functor: f.label.clone(),
        backend: b,
        bound,
        source_classes: src.len(),
        target_classes: tgt.len(),
        essentially_surjective: es,
        es_witness,
        fully_faithful: ff,
        ff_witness,
        certified_pairs: certified,
        enumerated_pairs: enumerated,
        verdict: es && ff,
    })
}

fn hom_bijective(f: &ShapeFunctor, t: &Tables, x: &Diagram, y: &Diagram, fx: &Diagram, fy: &Diagram) -> Result<bool> {
    let source_homs = homs_between(t, &f.source, x, y, HOM_CAP)?;
    let target_homs = homs_between(t, &f.target, fx, fy, HOM_CAP)?;
    let mut restricted: Vec<Vec<Mor>> =
        source_homs.iter().map(|phi| f.restriction.node_map.iter().map(|&v| phi[v]).collect()).collect();
    restricted.sort();
    restricted.dedup();
    Ok(restricted.len() == source_homs.len() && source_homs.len() == target_homs.len())
}

/// Per-stage limit/colimit flags for every source representative.
struct Certificates {
    /// Whether every comparable pair of covered nodes is joined by a path of the target.
    path_full: bool,
    lan: Vec<Vec<bool>>,
    ran: Vec<Vec<bool>>,
}

struct Stage {
    beta: usize,
    above: Vec<usize>,
    above_edges: Vec<(usize, usize)>,
    below: Vec<usize>,
    below_edges: Vec<(usize, usize)>,
}

fn covering_pairs(shape: &Shape, nodes: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &u) in nodes.iter().enumerate() {
        for (j, &v) in nodes.iter().enumerate() {
            if u < v && shape.le(u, v) && !nodes.iter().any(|&w| w != u && w != v && shape.le(u, w) && shape.le(w, v)) {
                out.push((i, j));
            }
        }
    }
    out
}

impl Certificates {
    fn new(f: &ShapeFunctor, b: Backend, reps: &[Diagram]) -> Result<Certificates> {
        let s = &f.source;
        let n = s.num_nodes();
        let mut covered = vec![false; n];
        let mut target_of = vec![None; n];
        for (tn, &sn) in f.restriction.node_map.iter().enumerate() {
            covered[sn] = true;
            target_of[sn] = Some(tn);
        }
        let mut path_full = true;
        for u in 0..n {
            for v in 0..n {
                if u != v && covered[u] && covered[v] && !s.zero[u] && !s.zero[v] && s.le(u, v) {
                    let (tu, tv) = (target_of[u].expect("covered"), target_of[v].expect("covered"));
                    if f.target.path(tu, tv).is_none() {
                        path_full = false;
                    }
                }
            }
        }
        let mut present: Vec<bool> = (0..n).map(|v| covered[v] || s.zero[v]).collect();
        let mut stages = Vec::new();
        let missing: Vec<usize> = (0..n).rev().filter(|&v| !present[v]).collect();
        for beta in missing {
            let above: Vec<usize> = (0..n).filter(|&c| present[c] && c != beta && s.le(beta, c)).collect();
            // descending, so transposed edges run from earlier to later positions
            let below: Vec<usize> = (0..n).rev().filter(|&c| present[c] && c != beta && s.le(c, beta)).collect();
            let above_edges = covering_pairs(s, &above);
            let below_edges = covering_pairs(s, &below).into_iter().map(|(i, j)| (j, i)).collect::<Vec<_>>();
            stages.push(Stage { beta, above, above_edges, below, below_edges });
            present[beta] = true;
        }
        let mut lan = Vec::with_capacity(reps.len());
        let mut ran = Vec::with_capacity(reps.len());
        for d in reps {
            let mut l = Vec::with_capacity(stages.len());
            let mut r = Vec::with_capacity(stages.len());
            for st in &stages {
                let z = |v: usize| d.sizes[v] as usize;
                let map = |u: usize, v: usize| d.between(b, s, u, v).expect("grid path");
                let objs: Vec<usize> = st.above.iter().map(|&c| z(c)).collect();
                let cone: Vec<Mor> = st.above.iter().map(|&c| map(st.beta, c)).collect();
                let edges: Vec<(usize, usize, Mor)> =
                    st.above_edges.iter().map(|&(i, j)| (i, j, map(st.above[i], st.above[j]))).collect();
                r.push(limit_bijective(b, z(st.beta), &objs, &cone, &edges).unwrap_or(false));
                // colimit below β, as the limit of the transposed diagram
                let objs: Vec<usize> = st.below.iter().map(|&c| z(c)).collect();
                let cone: Vec<Mor> = st.below.iter().map(|&c| b.transpose(&map(c, st.beta))).collect();
                let edges: Vec<(usize, usize, Mor)> =
                    st.below_edges.iter().map(|&(i, j)| (i, j, b.transpose(&map(st.below[j], st.below[i])))).collect();
                l.push(limit_bijective(b, z(st.beta), &objs, &cone, &edges).unwrap_or(false));
            }
            lan.push(l);
            ran.push(r);
        }
        Ok(Certificates { path_full, lan, ran })
    }

    fn certified(&self, x: usize, y: usize) -> bool {
        self.path_full && self.lan[x].iter().zip(&self.ran[y]).all(|(&l, &r)| l || r)
    }
}

/// A sequence of the big grid whose objects and maps are all determined by the glued
/// family and which violates the exactness condition: no preimage can exist.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    pub gamma: String,
    /// Index of the map (in `A_{d_{k+1}γ} → … → A_{d_0γ}` order) where the check fails.
    pub step: usize,
    pub maps: Vec<Option<Mor>>,
}

/// Searches the sequences of the source grid for one whose determined part already fails
/// (non-admissible map, missing end condition, or failed short exactness between two
/// determined maps). `glued` is a cell on the union target of `f`.
pub fn forced_obstruction(f: &ShapeFunctor, b: Backend, glued: &Diagram) -> Option<Obstruction> {
    let s = &f.source;
    let mut target_of = vec![None; s.num_nodes()];
    for (tn, &sn) in f.restriction.node_map.iter().enumerate() {
        target_of[sn] = Some(tn);
    }
    let k1 = s.k + 1;
    for seq in &s.sequences {
        let maps: Vec<Option<Mor>> = (0..k1)
            .map(|t| {
                let (u, v) = (target_of[seq.nodes[t]]?, target_of[seq.nodes[t + 1]]?);
                glued.between(b, &f.target, u, v)
            })
            .collect();
        for t in 0..k1 {
            let Some(cur) = &maps[t] else { continue };
            let prev = if t > 0 { maps[t - 1].as_ref() } else { None };
            if !partial_sequence_ok(b, s.variant, k1, prev, cur, t) {
                let gamma = seq.gamma.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
                return Some(Obstruction { gamma, step: t, maps });
            }
        }
    }
    None
}
