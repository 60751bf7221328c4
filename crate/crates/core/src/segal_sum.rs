//! The `k`-dimensional Segal construction `S_⊕⟨k⟩(D) = Sh(S^k, D)`: sheaves on the pointed
//! sphere cells `S^k_n = Δ^k_n / ∂Δ^k_n`, stored as stalk tuples, with direct images along
//! the simplicial structure and the Segal-map check against `L([n], 2k−1)`.
//!
//! A stalk of a direct image is the direct sum of the stalks over its fiber, indexed by the
//! fiber's sphere cells. With that indexing direct images compose strictly; assembled into
//! plain matrices (summands in canonical cell order) they compose strictly only when the
//! fibers of the composite are concatenations of the intermediate fibers in order, which
//! [`order_compatible`] tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use serde_json::Value;

use crate::backend::{Backend, Mor, MAX_SIZE};
use crate::category::{
    inclusion, is_equivalence, limit_over_poset, CatFunctor, EquivalenceReport, FinCategory, Overlap,
};
use crate::combinatorics::{monotone_maps, segal_poset, MonotoneMap, Side, SubsetOfN};
use crate::error::{Error, Result};

/// The non-base elements of `S^k_n`: surjective monotone maps `[n] ↠ [k]` in lexicographic
/// order. The basepoint is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereCell {
    pub k: usize,
    pub n: usize,
    pub elements: Vec<MonotoneMap>,
    index: HashMap<Vec<usize>, usize>,
}

impl SphereCell {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, alpha: &[usize]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn key(&self, i: usize) -> String {
        format!("{:?}", self.elements[i])
    }
}

pub fn sphere_cells(k: usize, n: usize) -> SphereCell {
    let elements: Vec<MonotoneMap> = monotone_maps(n, k).into_iter().filter(|a| a.is_surjective()).collect();
    let index = elements.iter().enumerate().map(|(i, a)| (a.values().to_vec(), i)).collect();
    SphereCell { k, n, elements, index }
}

/// A map of finite pointed sets on non-base elements; `None` is the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointedMap {
    pub target_len: usize,
    pub values: Vec<Option<usize>>,
}

impl PointedMap {
    pub fn identity(n: usize) -> PointedMap {
        PointedMap { target_len: n, values: (0..n).map(Some).collect() }
    }

    pub fn source_len(&self) -> usize {
        self.values.len()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &PointedMap) -> Result<PointedMap> {
        if first.target_len != self.source_len() {
            return Err(Error::InvalidArguments("composition of incompatible pointed maps".into()));
        }
        Ok(PointedMap {
            target_len: self.target_len,
            values: first.values.iter().map(|v| v.and_then(|x| self.values[x])).collect(),
        })
    }

    /// Non-base elements mapping to `t`, in increasing order.
    pub fn fiber(&self, t: usize) -> Vec<usize> {
        (0..self.source_len()).filter(|&s| self.values[s] == Some(t)).collect()
    }

    pub fn image(&self, u: &BTreeSet<usize>) -> BTreeSet<usize> {
        u.iter().filter_map(|&s| self.values[s]).collect()
    }
}

/// `U ↦ ρ^{-1}(U ∖ {*}) ∐ {*}`; pointed subsets are given by their non-base elements.
pub fn rho_preimage(rho: &PointedMap, u: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..rho.source_len()).filter(|&s| rho.values[s].is_some_and(|t| u.contains(&t))).collect()
}

/// `θ^*: S^k_n → S^k_m`, `α ↦ α∘θ` (the basepoint when `α∘θ` is not surjective).
pub fn sphere_map(k: usize, theta: &MonotoneMap) -> PointedMap {
    let (source, target) = (sphere_cells(k, theta.target_len()), sphere_cells(k, theta.source_len()));
    let values = source
        .elements
        .iter()
        .map(|a| target.position(&theta.values().iter().map(|&t| a.values()[t]).collect::<Vec<_>>()))
        .collect();
    PointedMap { target_len: target.len(), values }
}

/// `ρ_I: S^k_n → S^k_I` for a nonempty `I ⊆ [n]`.
pub fn restriction_map(k: usize, i: &SubsetOfN) -> PointedMap {
    sphere_map(k, &inclusion(i))
}

/// `ρ_{J ⊆ I}: S^k_I → S^k_J` for `J ⊆ I`.
fn relative_restriction(k: usize, i: &SubsetOfN, j: &SubsetOfN) -> PointedMap {
    let pos: Vec<usize> = j.members().iter().map(|v| i.members().iter().position(|w| w == v).expect("J ⊆ I")).collect();
    sphere_map(k, &MonotoneMap::new(i.len() - 1, pos).expect("positions are increasing"))
}

/// Whether the fibers of `outer ∘ inner` are the concatenations, in the order of `outer`'s
/// source, of the fibers of `inner`: then assembled block matrices compose strictly.
pub fn order_compatible(outer: &PointedMap, inner: &PointedMap) -> bool {
    let Ok(composite) = outer.after(inner) else {
        return false;
    };
    (0..composite.target_len).all(|g| {
        let via: Vec<usize> = outer.fiber(g).into_iter().flat_map(|b| inner.fiber(b)).collect();
        via == composite.fiber(g)
    })
}

/// `I_α = ⋃_{α_i < α_{i+1}} {i, i+1}`.
pub fn i_alpha(alpha: &MonotoneMap) -> SubsetOfN {
    let v = alpha.values();
    let members: BTreeSet<usize> = (0..v.len() - 1).filter(|&i| v[i] < v[i + 1]).flat_map(|i| [i, i + 1]).collect();
    SubsetOfN::new(v.len() - 1, members.into_iter().collect()).expect("jump positions lie in [n]")
}

/// Elements `α` and subsets `I` of `L([n], 2k−1)` for which `I ⊇ I_α` disagrees with
/// `ρ_I^×(ρ_I({*,α})) = {*,α}`; empty when the characterization holds.
pub fn fiber_isolation_violations(k: usize, n: usize) -> Result<Vec<(String, Vec<usize>)>> {
    let cells = sphere_cells(k, n);
    let poset = segal_poset(n, 2 * k - 1, Side::Lower)?;
    let mut out = Vec::new();
    for i in &poset.all_elements {
        let rho = restriction_map(k, i);
        for (a, alpha) in cells.elements.iter().enumerate() {
            let contains = i_alpha(alpha).is_subset_of(i);
            let single = BTreeSet::from([a]);
            let isolated = rho_preimage(&rho, &rho.image(&single)) == single;
            if contains != isolated {
                out.push((cells.key(a), i.members().to_vec()));
            }
        }
    }
    Ok(out)
}

/// A sheaf on `S^k_n`, stored by its stalks (object sizes in canonical cell order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sheaf {
    pub k: usize,
    pub n: usize,
    pub stalks: Vec<usize>,
}

impl Sheaf {
    pub fn zero(k: usize, n: usize) -> Sheaf {
        Sheaf { k, n, stalks: vec![0; sphere_cells(k, n).len()] }
    }

    /// `F(U) = ⊕_{u ∈ U∖{*}} F({*,u})`.
    pub fn section(&self, u: &BTreeSet<usize>) -> usize {
        u.iter().map(|&a| self.stalks[a]).sum()
    }

    /// The restriction `F(U) → F(V)` for `V ⊆ U`: the projection onto the summands of `V`.
    pub fn section_restriction(&self, u: &BTreeSet<usize>, v: &BTreeSet<usize>) -> Result<Mor> {
        if !v.is_subset(u) {
            return Err(Error::InvalidArguments("restriction needs V ⊆ U".into()));
        }
        let mut m = Mor::zero(0, 0);
        for &a in u {
            let z = self.stalks[a];
            let block = if v.contains(&a) { Mor::identity(z) } else { Mor::zero(0, z) };
            m = m.direct_sum(&block);
        }
        Ok(m)
    }

    /// `ρ_* F`: stalkwise sums over the fibers of `ρ`.
    pub fn direct_image(&self, rho: &PointedMap, m: usize) -> Result<Sheaf> {
        if rho.source_len() != self.stalks.len() {
            return Err(Error::InvalidArguments("pointed map does not start at the sheaf's cell".into()));
        }
        let mut stalks = vec![0; rho.target_len];
        for (a, v) in rho.values.iter().enumerate() {
            if let Some(t) = v {
                stalks[*t] += self.stalks[a];
            }
        }
        Ok(Sheaf { k: self.k, n: m, stalks })
    }

    pub fn to_json(&self) -> Value {
        let cells = sphere_cells(self.k, self.n);
        let stalks: BTreeMap<String, usize> = (0..cells.len()).map(|a| (cells.key(a), self.stalks[a])).collect();
        serde_json::json!({ "k": self.k, "n": self.n, "stalks": stalks })
    }
}

/// `ρ_* φ` for a stalkwise morphism `φ: F → G`: block-diagonal over each fiber, summands in
/// canonical cell order.
pub fn direct_image_mor(rho: &PointedMap, phi: &[Mor]) -> Vec<Mor> {
    (0..rho.target_len).map(|t| rho.fiber(t).iter().fold(Mor::zero(0, 0), |acc, &a| acc.direct_sum(&phi[a]))).collect()
}

fn tuples(len: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..=bound).map(move |z| [t.clone(), vec![z]].concat())).collect();
    }
    out
}

/// The category with the given stalk tuples as objects and stalkwise morphisms.
fn cells_on(b: Backend, objects: &[Vec<usize>]) -> Result<(FinCategory, Vec<Vec<Mor>>)> {
    if !b.is_finite() {
        return Err(Error::InvalidArguments(format!("{b} has infinite hom-sets")));
    }
    if objects.iter().flatten().any(|&z| z > MAX_SIZE) {
        return Err(Error::ResourceLimit(format!("stalks exceed the largest object size {MAX_SIZE}")));
    }
    let hom = |x: &Vec<usize>, y: &Vec<usize>| -> Vec<Vec<Mor>> {
        x.iter().zip(y).fold(vec![Vec::new()], |acc, (&s, &t)| {
            let h = b.homs(s, t).expect("finite backend");
            acc.into_iter().flat_map(|p| h.iter().map(move |m| [p.clone(), vec![*m]].concat())).collect()
        })
    };
    let compose = |g: &Vec<Mor>, f: &Vec<Mor>| g.iter().zip(f).map(|(g, f)| b.compose(g, f)).collect();
    let identity = |x: &Vec<usize>| x.iter().map(|&z| b.identity(z)).collect();
    FinCategory::from_concrete_with_values(objects, hom, compose, identity)
}

/// `Sh(S^k_n, D)` restricted to stalks of size at most `bound`.
pub fn cells_category(b: Backend, k: usize, n: usize, bound: usize) -> Result<FinCategory> {
    Ok(cells_on(b, &tuples(sphere_cells(k, n).len(), bound))?.0)
}

/// A materialized level: objects, the category and the concrete morphisms.
struct Level {
    objects: Vec<Vec<usize>>,
    cat: FinCategory,
    morphisms: HashMap<(usize, usize, Vec<Mor>), usize>,
    values: Vec<Vec<Mor>>,
}

impl Level {
    fn new(b: Backend, objects: Vec<Vec<usize>>) -> Result<Level> {
        let (cat, values) = cells_on(b, &objects)?;
        let morphisms = values.iter().enumerate().map(|(i, v)| ((cat.src(i), cat.dst(i), v.clone()), i)).collect();
        Ok(Level { objects, cat, morphisms, values })
    }

    fn functor_to(&self, target: &Level, rho: &PointedMap) -> Result<CatFunctor> {
        let obj: HashMap<&Vec<usize>, usize> = target.objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let image = |o: &Vec<usize>| {
            let mut s = vec![0; rho.target_len];
            for (a, v) in rho.values.iter().enumerate() {
                if let Some(t) = v {
                    s[*t] += o[a];
                }
            }
            obj.get(&s).copied().ok_or_else(|| Error::Internal(format!("direct image {s:?} outside the target level")))
        };
        let on_objects = self.objects.iter().map(image).collect::<Result<Vec<_>>>()?;
        let on_morphisms = (0..self.values.len())
            .map(|f| {
                let key =
                    (on_objects[self.cat.src(f)], on_objects[self.cat.dst(f)], direct_image_mor(rho, &self.values[f]));
                target
                    .morphisms
                    .get(&key)
                    .copied()
                    .ok_or_else(|| Error::Internal("direct image of a morphism is missing".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CatFunctor { on_objects, on_morphisms })
    }
}

/// The Segal map of `S_⊕⟨k⟩(D)` against the lower or upper `d`-Segal poset of `[n]`,
/// materialized as explicit finite categories and a strict limit. Pieces have stalks at most
/// `bound`; the source is their preimage. Only feasible at tiny bounds.
pub fn materialized_segal_check(
    b: Backend,
    k: usize,
    n: usize,
    d: usize,
    side: Side,
    bound: usize,
) -> Result<EquivalenceReport> {
    let poset = segal_poset(n, d, side)?;
    let rhos: Vec<PointedMap> = poset.maximal.iter().map(|i| restriction_map(k, i)).collect();
    let overlaps = poset.pairwise_intersections();
    for (a, c, j) in &overlaps {
        for p in [*a, *c] {
            if !order_compatible(&relative_restriction(k, &poset.maximal[p], j), &rhos[p]) {
                return Err(Error::InvalidArguments(format!(
                    "direct images into {:?} do not compose strictly as matrices",
                    j.members()
                )));
            }
        }
    }
    let pieces: Vec<Level> = poset
        .maximal
        .iter()
        .map(|i| Level::new(b, tuples(sphere_cells(k, i.len() - 1).len(), bound)))
        .collect::<Result<_>>()?;
    let source_objects: Vec<Vec<usize>> = tuples(sphere_cells(k, n).len(), bound)
        .into_iter()
        .filter(|o| {
            let f = Sheaf { k, n, stalks: o.clone() };
            rhos.iter()
                .zip(&poset.maximal)
                .all(|(r, i)| f.direct_image(r, i.len() - 1).expect("matching cell").stalks.iter().all(|&z| z <= bound))
        })
        .collect();
    let source = Level::new(b, source_objects)?;
    let mut overlap_data = Vec::new();
    for (a, c, j) in &overlaps {
        let (ra, rc) = (relative_restriction(k, &poset.maximal[*a], j), relative_restriction(k, &poset.maximal[*c], j));
        let widest = (0..ra.target_len).map(|g| ra.fiber(g).len().max(rc.fiber(g).len())).max().unwrap_or(0);
        let cell = Level::new(b, tuples(ra.target_len, bound * widest))?;
        let fa = pieces[*a].functor_to(&cell, &ra)?;
        let fc = pieces[*c].functor_to(&cell, &rc)?;
        overlap_data.push((*a, *c, cell, fa, fc));
    }
    let overlap_refs: Vec<Overlap<'_>> = overlap_data
        .iter()
        .map(|(a, c, cell, fa, fc)| Overlap { a: *a, b: *c, cell: &cell.cat, from_a: fa, from_b: fc })
        .collect();
    let cats: Vec<&FinCategory> = pieces.iter().map(|p| &p.cat).collect();
    let limit = limit_over_poset(&cats, &overlap_refs)?;
    let restrict: Vec<CatFunctor> =
        pieces.iter().zip(&rhos).map(|(p, r)| source.functor_to(p, r)).collect::<Result<_>>()?;
    let obj_index: HashMap<&Vec<usize>, usize> = limit.object_tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mor_index: HashMap<&Vec<usize>, usize> =
        limit.morphism_tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let lookup = |index: &HashMap<&Vec<usize>, usize>, t: Vec<usize>| {
        index.get(&t).copied().ok_or_else(|| Error::Internal("restriction leaves the limit".into()))
    };
    let on_objects = (0..source.cat.num_objects())
        .map(|s| lookup(&obj_index, restrict.iter().map(|r| r.on_objects[s]).collect()))
        .collect::<Result<Vec<_>>>()?;
    let on_morphisms = (0..source.cat.num_morphisms())
        .map(|f| lookup(&mor_index, restrict.iter().map(|r| r.on_morphisms[f]).collect()))
        .collect::<Result<Vec<_>>>()?;
    let functor = CatFunctor { on_objects, on_morphisms };
    functor.validate(&source.cat, &limit.category)?;
    Ok(is_equivalence(&source.cat, &limit.category, &functor))
}

#[derive(Clone, Debug, Serialize)]
pub struct SumSegalReport {
    pub backend: Backend,
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub side: Side,
    pub bound: usize,
    pub pieces: Vec<Vec<usize>>,
    /// Objects of the bounded strict limit (compatible stalk families).
    pub limit_objects: u64,
    /// Limit objects in the image of the Segal map.
    pub image_objects: u64,
    /// Off-diagonal blocks `(α, α′)` of morphisms between direct images that no overlap forces
    /// to vanish; each gives a limit morphism outside the image.
    pub free_blocks: Vec<(String, String)>,
    /// Cells whose diagonal blocks in different pieces are not tied together by overlaps.
    pub untied_cells: Vec<String>,
    /// For the lower `(2k−1)`-Segal poset: every limit object has components
    /// `G_I(ρ_I α) = F_α` at all pieces `I ⊇ I_α`, which form exactly the fiber `{α}`.
    pub stalk_decomposition: Option<bool>,
    pub equivalence: EquivalenceReport,
    pub verdict: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// A stalk tuple `f` with `Σ_{α ∈ fibers[v]} f_α = g_v` for every variable `v`: equations
/// with one unknown are propagated, the remaining unknowns searched. Cells in no fiber are 0.
fn solve(fibers: &[Vec<usize>], cells: usize, g: &[usize], bound: usize, visited: &mut u64) -> Option<Vec<usize>> {
    let mut f: Vec<Option<usize>> = vec![None; cells];
    let seen: BTreeSet<usize> = fibers.iter().flatten().copied().collect();
    for al in (0..cells).filter(|al| !seen.contains(al)) {
        f[al] = Some(0);
    }
    loop {
        let mut progress = false;
        for (v, fib) in fibers.iter().enumerate() {
            let unknown: Vec<usize> = fib.iter().copied().filter(|&al| f[al].is_none()).collect();
            let known: usize = fib.iter().filter_map(|&al| f[al]).sum();
            match unknown.as_slice() {
                [] if known != g[v] => return None,
                [al] => {
                    let z = g[v].checked_sub(known).filter(|&z| z <= bound)?;
                    f[*al] = Some(z);
                    progress = true;
                }
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    let free: Vec<usize> = (0..cells).filter(|&al| f[al].is_none()).collect();
    let mut out: Vec<usize> = f.iter().map(|z| z.unwrap_or(0)).collect();
    let combos = (bound + 1).checked_pow(free.len() as u32)?;
    for mut c in 0..combos {
        for &al in &free {
            out[al] = c % (bound + 1);
            c /= bound + 1;
        }
        *visited += 1;
        if fibers.iter().zip(g).all(|(fib, &z)| fib.iter().map(|&al| out[al]).sum::<usize>() == z) {
            return Some(out);
        }
    }
    None
}

/// The Segal map of `S_⊕⟨k⟩(D)` against the `d`-Segal poset on `side`, over the bounded slice
/// where every component stalk has size at most `bound`.
///
/// Essential surjectivity enumerates the compatible stalk-size families (objects of the
/// strict limit; the category is skeletal) and solves for a preimage. Full faithfulness is
/// decided on blocks: a limit morphism between direct images is, at each piece and stalk, a
/// block matrix indexed by pairs of cells in the fiber, and the overlap equations identify
/// blocks across pieces or force them to zero. The map is fully faithful iff every
/// off-diagonal block is forced to zero and every cell's diagonal blocks are tied into one.
pub fn sum_segal_check(
    b: Backend,
    k: usize,
    n: usize,
    d: usize,
    side: Side,
    bound: usize,
    budget: u64,
) -> Result<SumSegalReport> {
    if !b.is_finite() {
        return Err(Error::InvalidArguments(format!("S_⊕ needs a backend with finite hom-sets, not {b}")));
    }
    if k == 0 {
        return Err(Error::InvalidArguments("S_⊕⟨k⟩ needs k >= 1".into()));
    }
    let poset = segal_poset(n, d, side)?;
    let cells = sphere_cells(k, n);
    let rhos: Vec<PointedMap> = poset.maximal.iter().map(|i| restriction_map(k, i)).collect();
    let intersections = poset.pairwise_intersections();
    let overlaps: Vec<(usize, usize, PointedMap)> =
        intersections.iter().map(|(a, c, j)| (*a, *c, restriction_map(k, j))).collect();

    // objects: variables (piece, stalk), equations per overlap stalk
    let offsets: Vec<usize> = rhos
        .iter()
        .scan(0, |acc, r| {
            let o = *acc;
            *acc += r.target_len;
            Some(o)
        })
        .collect();
    let nvars = rhos.iter().map(|r| r.target_len).sum::<usize>();
    let mut equations: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (a, c, j) in &intersections {
        let (ra, rc) = (relative_restriction(k, &poset.maximal[*a], j), relative_restriction(k, &poset.maximal[*c], j));
        for g in 0..ra.target_len {
            let vars = |p: usize, r: &PointedMap| r.fiber(g).into_iter().map(|beta| offsets[p] + beta).collect();
            equations.push((vars(*a, &ra), vars(*c, &rc)));
        }
    }
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); nvars];
    for (e, (l, r)) in equations.iter().enumerate() {
        if let Some(&last) = l.iter().chain(r).max() {
            due[last].push(e);
        }
    }
    let fibers: Vec<Vec<usize>> = rhos.iter().flat_map(|r| (0..r.target_len).map(|t| r.fiber(t))).collect();
    let lower_odd = side == Side::Lower && d + 1 == 2 * k;
    let containing: Vec<Vec<usize>> = cells
        .elements
        .iter()
        .map(|alpha| {
            let ia = i_alpha(alpha);
            (0..rhos.len()).filter(|&p| ia.is_subset_of(&poset.maximal[p])).collect()
        })
        .collect();

    let mut g = vec![0usize; nvars];
    let mut limit_objects = 0u64;
    let mut image_objects = 0u64;
    let mut visited = 0u64;
    let mut es_witness = None;
    let mut decomposition = true;
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    // depth-first over variables; (index, value to try)
    while let Some((v, z)) = stack.pop() {
        if v == nvars {
            limit_objects += 1;
            let found = solve(&fibers, cells.len(), &g, bound, &mut visited);
            match found {
                Some(f) => {
                    image_objects += 1;
                    if lower_odd {
                        for (al, ps) in containing.iter().enumerate() {
                            decomposition &= !ps.is_empty();
                            for &p in ps {
                                let t = rhos[p].values[al];
                                decomposition &=
                                    t.is_some_and(|t| rhos[p].fiber(t) == [al] && g[offsets[p] + t] == f[al]);
                            }
                        }
                    }
                }
                None if es_witness.is_none() => {
                    let family: Vec<Value> = poset
                        .maximal
                        .iter()
                        .enumerate()
                        .map(|(p, i)| {
                            let s = Sheaf {
                                k,
                                n: i.len() - 1,
                                stalks: g[offsets[p]..offsets[p] + rhos[p].target_len].to_vec(),
                            };
                            serde_json::json!({ "piece": i.members(), "sheaf": s.to_json() })
                        })
                        .collect();
                    es_witness = Some(Value::Array(family).to_string());
                }
                None => {}
            }
            continue;
        }
        if z > bound {
            continue;
        }
        visited += 1;
        if visited > budget {
            return Err(Error::ResourceLimit(format!("limit enumeration exceeded {budget} steps")));
        }
        stack.push((v, z + 1));
        g[v] = z;
        let ok = due[v].iter().all(|&e| {
            let (l, r) = &equations[e];
            l.iter().map(|&x| g[x]).sum::<usize>() == r.iter().map(|&x| g[x]).sum::<usize>()
        });
        if ok {
            stack.push((v + 1, 0));
        }
    }

    // morphisms: blocks (piece, α, α′) with α, α′ in one fiber of the piece; node 0 is zero
    let mut blocks: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (p, r) in rhos.iter().enumerate() {
        for t in 0..r.target_len {
            let fib = r.fiber(t);
            for &x in &fib {
                for &y in &fib {
                    let id = blocks.len() + 1;
                    blocks.insert((p, x, y), id);
                }
            }
        }
    }
    let mut uf = UnionFind((0..=blocks.len()).collect());
    for (a, c, rj) in &overlaps {
        for t in 0..rj.target_len {
            let fib = rj.fiber(t);
            for &x in &fib {
                for &y in &fib {
                    let ea = blocks.get(&(*a, x, y)).copied().unwrap_or(0);
                    let ec = blocks.get(&(*c, x, y)).copied().unwrap_or(0);
                    uf.union(ea, ec);
                }
            }
        }
    }
    let zero = uf.find(0);
    let mut free_blocks = BTreeSet::new();
    let mut diagonal: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cells.len()];
    let mut keys: Vec<_> = blocks.iter().map(|(&key, &id)| (key, id)).collect();
    keys.sort_unstable();
    for ((_, x, y), id) in keys {
        let root = uf.find(id);
        if x == y {
            diagonal[x].insert(root);
        } else if root != zero {
            free_blocks.insert((x, y));
        }
    }
    let untied: Vec<usize> = (0..cells.len()).filter(|&al| diagonal[al].len() != 1).collect();
    let unit = |al: usize| {
        let mut s = Sheaf::zero(k, n);
        s.stalks[al] = 1;
        s.to_json().to_string()
    };
    let ff_witness = if bound == 0 {
        None
    } else if let Some(&(x, y)) = free_blocks.iter().next() {
        Some((unit(x), unit(y)))
    } else {
        untied.first().map(|&al| (unit(al), unit(al)))
    };
    let equivalence = EquivalenceReport::new(es_witness, ff_witness);
    let stalk_decomposition = lower_odd.then_some(decomposition);
    let verdict = equivalence.verdict && stalk_decomposition != Some(false);
    Ok(SumSegalReport {
        backend: b,
        k,
        n,
        d,
        side,
        bound,
        pieces: poset.maximal.iter().map(|i| i.members().to_vec()).collect(),
        limit_objects,
        image_objects,
        free_blocks: free_blocks.into_iter().map(|(x, y)| (cells.key(x), cells.key(y))).collect(),
        untied_cells: untied.into_iter().map(|al| cells.key(al)).collect(),
        stalk_decomposition,
        equivalence,
        verdict,
    })
}

/// The lower `(2k−1)`-Segal map of `S_⊕⟨k⟩(D)` at level `n`.
pub fn segal_check_sum(b: Backend, k: usize, n: usize, bound: usize, budget: u64) -> Result<SumSegalReport> {
    if k == 0 || n + 1 < 2 * k {
        return Err(Error::InvalidArguments(format!("the lower (2k−1)-Segal map needs n >= 2k−1, got k={k}, n={n}")));
    }
    sum_segal_check(b, k, n, 2 * k - 1, Side::Lower, bound, budget)
}
