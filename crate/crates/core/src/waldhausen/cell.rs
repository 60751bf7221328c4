//! Cells: backend-valued diagrams on a [`Shape`], their validation, reindexing, duality and
//! the hypercube description of exactness.

use serde::Serialize;

use super::shape::{is_injective, Key, Shape, Variant};
use crate::backend::{factor_admissible, is_short_exact, Backend, Mor, SequenceClass};
use crate::combinatorics::MonotoneMap;
use crate::error::{Error, Result};

/// Object sizes per node and one morphism per Hasse arrow of the shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    pub sizes: Vec<u8>,
    pub maps: Vec<Mor>,
}

impl Diagram {
    pub fn zero(shape: &Shape) -> Diagram {
        Diagram { sizes: vec![0; shape.num_nodes()], maps: vec![Mor::zero(0, 0); shape.num_arrows()] }
    }

    /// Composite along an arrow chain starting at `start`.
    pub fn along(&self, b: Backend, start: usize, chain: &[usize]) -> Mor {
        let mut m = b.identity(self.sizes[start] as usize);
        for &a in chain {
            m = b.compose(&self.maps[a], &m);
        }
        m
    }

    /// The map `u → v`, or `None` when the shape has no path.
    pub fn between(&self, b: Backend, shape: &Shape, u: usize, v: usize) -> Option<Mor> {
        shape.path(u, v).map(|p| self.along(b, u, &p))
    }

    pub fn is_zero(&self) -> bool {
        self.sizes.iter().all(|&s| s == 0)
    }
}

/// The first reason a diagram is not a cell of its shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum CellFailure {
    Malformed { reason: String },
    NonzeroDegenerate { node: String },
    NotMorphism { from: String, to: String },
    NotCommuting { from: String, to: String },
    Sequence { gamma: String, class: SequenceClass },
}

fn key_str(k: &[u8]) -> String {
    k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

/// The maps of the sequence of a `(k+1)`-simplex.
pub fn sequence_maps(b: Backend, shape: &Shape, d: &Diagram, seq: usize) -> Vec<Mor> {
    let s = &shape.sequences[seq];
    s.steps.iter().enumerate().map(|(t, chain)| d.along(b, s.nodes[t], chain)).collect()
}

/// Classifies a sequence with the backend's admissibility; same verdicts as
/// `sequence_classify`, written out to share the partial checks used by the search.
pub fn classify(b: Backend, maps: &[Mor]) -> SequenceClass {
    crate::backend::sequence_classify(b, maps)
}

/// All failures, in a canonical order (structure first, then sequences in shape order).
pub fn validate_all(b: Backend, shape: &Shape, d: &Diagram) -> Vec<CellFailure> {
    let mut out = Vec::new();
    if d.sizes.len() != shape.num_nodes() || d.maps.len() != shape.num_arrows() {
        out.push(CellFailure::Malformed {
            reason: format!(
                "expected {} objects and {} arrows, got {} and {}",
                shape.num_nodes(),
                shape.num_arrows(),
                d.sizes.len(),
                d.maps.len()
            ),
        });
        return out;
    }
    for v in 0..shape.num_nodes() {
        if shape.zero[v] && d.sizes[v] != 0 {
            out.push(CellFailure::NonzeroDegenerate { node: shape.key_string(v) });
        }
    }
    for (a, &(s, t)) in shape.arrows.iter().enumerate() {
        let m = &d.maps[a];
        if m.cols() != d.sizes[s] as usize || m.rows() != d.sizes[t] as usize || !b.is_morphism(m) {
            out.push(CellFailure::NotMorphism { from: shape.key_string(s), to: shape.key_string(t) });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (lhs, rhs) in &shape.relations {
        let start = shape.arrows[lhs[0]].0;
        if d.along(b, start, lhs) != d.along(b, start, rhs) {
            let end = shape.arrows[*lhs.last().expect("non-empty relation")].1;
            out.push(CellFailure::NotCommuting { from: shape.key_string(start), to: shape.key_string(end) });
        }
    }
    for (i, s) in shape.sequences.iter().enumerate() {
        let class = classify(b, &sequence_maps(b, shape, d, i));
        if !shape.variant.accepts(&class) {
            out.push(CellFailure::Sequence { gamma: key_str(&s.gamma), class });
        }
    }
    out
}

pub fn validate(b: Backend, shape: &Shape, d: &Diagram) -> std::result::Result<(), CellFailure> {
    match validate_all(b, shape, d).into_iter().next() {
        None => Ok(()),
        Some(f) => Err(f),
    }
}

/// The checks available once the first `t+1` maps of a sequence are known (maps `0..=t`):
/// admissibility of map `t`, the end conditions, and short exactness at the object between
/// maps `t−1` and `t`. Returns false on a violation.
pub fn partial_sequence_ok(b: Backend, variant: Variant, k1: usize, prev: Option<&Mor>, cur: &Mor, t: usize) -> bool {
    let Some((epi, _mono)) = factor_admissible(b, cur) else {
        return false;
    };
    if t == 0 && variant.needs_left() && !b.is_adm_mono(cur) {
        return false;
    }
    if t + 1 == k1 && variant.needs_right() && !b.is_adm_epi(cur) {
        return false;
    }
    if let Some(p) = prev {
        let Some((_, mono_in)) = factor_admissible(b, p) else {
            return false;
        };
        if !is_short_exact(b, &mono_in, &epi) {
            return false;
        }
    }
    true
}

/// A functor between shapes induced by a map on node keys, sending each target arrow to a
/// path between the images. Cells pull back along it.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub node_map: Vec<usize>,
    pub arrow_paths: Vec<Vec<usize>>,
}

impl Restriction {
    pub fn new(source: &Shape, target: &Shape, f: impl Fn(&[u8]) -> Key) -> Result<Restriction> {
        let node_map = target
            .nodes
            .iter()
            .map(|key| {
                let image = f(key);
                source.node(&image).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "node {} maps to {} outside the source shape",
                        key_str(key),
                        key_str(&image)
                    ))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let arrow_paths = target
            .arrows
            .iter()
            .map(|&(s, t)| {
                source.path(node_map[s], node_map[t]).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "arrow {} → {} has no image path",
                        target.key_string(s),
                        target.key_string(t)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Restriction { node_map, arrow_paths })
    }

    pub fn apply(&self, b: Backend, target: &Shape, d: &Diagram) -> Diagram {
        let sizes: Vec<u8> = self.node_map.iter().map(|&v| d.sizes[v]).collect();
        let maps =
            self.arrow_paths.iter().zip(&target.arrows).map(|(p, &(s, _))| d.along(b, self.node_map[s], p)).collect();
        Diagram { sizes, maps }
    }

    /// Whether each target node has a distinct image.
    pub fn is_injective_on_nodes(&self) -> bool {
        let mut v = self.node_map.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// Pulls a cell on `Fun([k],[n])` back along `θ: [m] → [n]`, giving a cell on `Fun([k],[m])`.
pub fn reindex(b: Backend, shape: &Shape, d: &Diagram, theta: &MonotoneMap) -> Result<(Shape, Diagram)> {
    if theta.target_len() != shape.ambient {
        return Err(Error::InvalidArguments("operator codomain does not match the cell".into()));
    }
    let m = theta.source_len();
    let target = Shape::grid(shape.k, m, shape.variant)?;
    let vals = theta.values().to_vec();
    let r = Restriction::new(shape, &target, |key| key.iter().map(|&x| vals[x as usize] as u8).collect())?;
    let out = r.apply(b, &target, d);
    Ok((target, out))
}

pub fn face(b: Backend, shape: &Shape, d: &Diagram, i: usize) -> Result<(Shape, Diagram)> {
    let n = shape.ambient;
    if n == 0 || i > n {
        return Err(Error::InvalidArguments(format!("face {i} of a level-{n} cell")));
    }
    let vals: Vec<usize> = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
    reindex(b, shape, d, &MonotoneMap::new(n, vals)?)
}

pub fn degeneracy(b: Backend, shape: &Shape, d: &Diagram, j: usize) -> Result<(Shape, Diagram)> {
    let n = shape.ambient;
    if j > n {
        return Err(Error::InvalidArguments(format!("degeneracy {j} of a level-{n} cell")));
    }
    let vals: Vec<usize> = (0..=n + 1).map(|x| if x <= j { x } else { x - 1 }).collect();
    reindex(b, shape, d, &MonotoneMap::new(n, vals)?)
}

/// `β ↦ (N − β_k, …, N − β_0)`.
pub fn mirror(key: &[u8], n: usize) -> Key {
    key.iter().rev().map(|&v| n as u8 - v).collect()
}

/// The shape of dual cells: mirrored pieces and the dual variant.
pub fn dual_shape(shape: &Shape) -> Result<Shape> {
    let n = shape.ambient;
    let pieces = shape
        .pieces
        .iter()
        .map(|p| crate::combinatorics::SubsetOfN::new(n, p.members().iter().map(|&v| n - v).collect()))
        .collect::<Result<Vec<_>>>()?;
    Shape::union(shape.k, n, &pieces, shape.variant.dual())
}

/// The cell over the opposite backend (identified with the backend by transposition),
/// reindexed along the duality of `Δ`.
pub fn dualize(b: Backend, shape: &Shape, dual: &Shape, d: &Diagram) -> Diagram {
    let n = shape.ambient;
    let sizes = dual.nodes.iter().map(|key| d.sizes[shape.index[&mirror(key, n)]]).collect();
    let maps = dual
        .arrows
        .iter()
        .map(|&(s, t)| {
            let (ms, mt) = (shape.index[&mirror(&dual.nodes[t], n)], shape.index[&mirror(&dual.nodes[s], n)]);
            let a = shape.arrow_index[&(ms, mt)];
            b.transpose(&d.maps[a])
        })
        .collect();
    Diagram { sizes, maps }
}

/// Whether the canonical map `apex → lim` of a finite diagram of finite objects is a
/// bijection on elements. `cone[c]` is the map from the apex to `objects[c]`; `edges` are
/// `(from, to, map)` between positions with `from < to`.
pub(crate) fn limit_bijective(
    b: Backend,
    apex: usize,
    objects: &[usize],
    cone: &[Mor],
    edges: &[(usize, usize, Mor)],
) -> Option<bool> {
    let apex_elems = b.elements(apex)?;
    let elems: Vec<Vec<Mor>> = objects.iter().map(|&s| b.elements(s)).collect::<Option<_>>()?;
    // a node is free when nothing earlier maps into it
    let n = objects.len();
    let mut incoming: Vec<Vec<(usize, &Mor)>> = vec![Vec::new(); n];
    for (f, t, m) in edges {
        incoming[*t].push((*f, m));
    }
    let mut count = 0usize;
    let mut cur: Vec<Option<Mor>> = vec![None; n];
    fn rec(
        b: Backend,
        i: usize,
        elems: &[Vec<Mor>],
        incoming: &[Vec<(usize, &Mor)>],
        cur: &mut Vec<Option<Mor>>,
        count: &mut usize,
    ) {
        if i == elems.len() {
            *count += 1;
            return;
        }
        if let Some(&(f, m)) = incoming[i].first() {
            let v = b.compose(m, cur[f].as_ref().expect("earlier node assigned"));
            if incoming[i].iter().all(|&(g, mm)| b.compose(mm, cur[g].as_ref().expect("assigned")) == v) {
                cur[i] = Some(v);
                rec(b, i + 1, elems, incoming, cur, count);
            }
        } else {
            for e in &elems[i] {
                cur[i] = Some(*e);
                rec(b, i + 1, elems, incoming, cur, count);
            }
        }
        cur[i] = None;
    }
    rec(b, 0, &elems, &incoming, &mut cur, &mut count);
    if count != apex_elems.len() {
        return Some(false);
    }
    let mut images: Vec<Vec<Mor>> = apex_elems.iter().map(|x| cone.iter().map(|m| b.compose(m, x)).collect()).collect();
    images.sort();
    images.dedup();
    Some(images.len() == apex_elems.len())
}

/// The hypercube description: `A_β` is the limit of the cube `β < β' ≤ β + 1` for every
/// eligible non-degenerate `β` (left exactness), and dually the colimit (right exactness).
/// Returns `None` for backends without finite element sets.
pub fn hypercube_check(b: Backend, shape: &Shape, d: &Diagram, variant: Variant) -> Option<bool> {
    let n = shape.ambient;
    let k = shape.k;
    if variant.needs_left() {
        for (v, beta) in shape.nodes.iter().enumerate() {
            let eligible = is_injective(beta) && (0..=k).all(|i| (beta[k - i] as usize) < n - i);
            if eligible && !cube_limit(b, shape, d, v)? {
                return Some(false);
            }
        }
    }
    if variant.needs_right() {
        let dual = dual_shape(shape).ok()?;
        let dd = dualize(b, shape, &dual, d);
        for (v, beta) in dual.nodes.iter().enumerate() {
            let eligible = is_injective(beta) && (0..=k).all(|i| (beta[k - i] as usize) < n - i);
            if eligible && !cube_limit(b, &dual, &dd, v)? {
                return Some(false);
            }
        }
    }
    Some(true)
}

fn cube_limit(b: Backend, shape: &Shape, d: &Diagram, v: usize) -> Option<bool> {
    let beta = &shape.nodes[v];
    let k = shape.k;
    let mut corners = Vec::new();
    for mask in 1u32..(1 << (k + 1)) {
        let c: Key = beta.iter().enumerate().map(|(i, &x)| x + ((mask >> i) & 1) as u8).collect();
        if c.windows(2).all(|w| w[0] <= w[1]) && c.iter().all(|&x| (x as usize) <= shape.ambient) {
            if let Some(u) = shape.node(&c) {
                corners.push(u);
            }
        }
    }
    corners.sort_unstable();
    let objects: Vec<usize> = corners.iter().map(|&u| d.sizes[u] as usize).collect();
    let cone: Vec<Mor> = corners.iter().map(|&u| d.between(b, shape, v, u).expect("grid path")).collect();
    let mut edges = Vec::new();
    for (i, &u) in corners.iter().enumerate() {
        for (j, &w) in corners.iter().enumerate().skip(i + 1) {
            if shape.le(u, w) {
                edges.push((i, j, d.between(b, shape, u, w).expect("grid path")));
            }
        }
    }
    limit_bijective(b, d.sizes[v] as usize, &objects, &cone, &edges)
}
