//! Depth-first search over cells: enumeration up to isomorphism, completion of partially
//! fixed cells, and isomorphism search between cells.
//!
//! Nodes are assigned in lexicographic order, which extends the grid order, so every Hasse
//! arrow is decided together with its target. Path equations and the partial sequence
//! checks fire as soon as their last arrow is assigned. Within a free node the incoming maps
//! are normalized to the lexicographic minimum of their orbit under the node's
//! automorphisms; processing nodes in order shows every isomorphism class keeps a
//! representative.

use std::collections::HashMap;

use super::cell::{partial_sequence_ok, Diagram};
use super::shape::Shape;
use crate::backend::{Backend, Mor};
use crate::error::{Error, Result};

/// Default cap on visited search states; overridden by `SEGAL_LAB_MAX_CELLS`.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

pub fn budget_from_env() -> u64 {
    std::env::var("SEGAL_LAB_MAX_CELLS").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Hom-sets and automorphism groups up to a size bound.
pub struct Tables {
    pub b: Backend,
    pub bound: usize,
    homs: Vec<Vec<Vec<Mor>>>,
    auts: Vec<Vec<Mor>>,
}

impl Tables {
    /// `entry_bound` truncates infinite hom-sets (FreeAb); ignored for finite backends.
    pub fn new(b: Backend, bound: usize, entry_bound: i64) -> Result<Tables> {
        if bound > crate::backend::MAX_SIZE {
            return Err(Error::InvalidArguments(format!("size bound {bound} exceeds {}", crate::backend::MAX_SIZE)));
        }
        let homs: Vec<Vec<Vec<Mor>>> =
            (0..=bound).map(|s| (0..=bound).map(|t| b.homs_bounded(s, t, entry_bound)).collect()).collect();
        let auts = (0..=bound)
            .map(|s| {
                let mut a: Vec<Mor> = homs[s][s].iter().filter(|m| b.is_iso(m)).copied().collect();
                // identity first so the orbit test can skip it
                a.sort_by_key(|m| *m != b.identity(s));
                a
            })
            .collect();
        Ok(Tables { b, bound, homs, auts })
    }

    pub fn homs(&self, s: usize, t: usize) -> &[Mor] {
        &self.homs[s][t]
    }

    pub fn auts(&self, s: usize) -> &[Mor] {
        &self.auts[s]
    }
}

/// A search instance: free or fixed sizes and maps, plus chain equations with prescribed
/// composites.
pub struct Problem<'a> {
    pub shape: &'a Shape,
    pub fixed_sizes: Vec<Option<u8>>,
    pub fixed_maps: Vec<Option<Mor>>,
    /// `(start node, arrow chain, required composite)`.
    pub chains: Vec<(usize, Vec<usize>, Mor)>,
    /// Upper bound for free sizes (at most the table bound).
    pub size_bound: usize,
    /// Whether to apply orbit normalization at free nodes.
    pub normalize: bool,
}

impl<'a> Problem<'a> {
    pub fn free(shape: &'a Shape, size_bound: usize) -> Problem<'a> {
        Problem {
            shape,
            fixed_sizes: vec![None; shape.num_nodes()],
            fixed_maps: vec![None; shape.num_arrows()],
            chains: Vec::new(),
            size_bound,
            normalize: true,
        }
    }
}

pub struct SearchStats {
    pub visited: u64,
    pub emitted: u64,
}

struct Plan {
    /// Position of each arrow in its target's incoming list.
    rel_at: Vec<Vec<Vec<usize>>>,
    chain_at: Vec<Vec<Vec<usize>>>,
    seq_at: Vec<Vec<(usize, usize)>>,
    normalize: Vec<bool>,
}

fn plan(p: &Problem<'_>) -> Plan {
    let s = p.shape;
    let n = s.num_nodes();
    let mut pos = vec![0usize; s.num_arrows()];
    for v in 0..n {
        for (j, &a) in s.in_arrows[v].iter().enumerate() {
            pos[a] = j;
        }
    }
    let trigger = |arrows: &mut dyn Iterator<Item = usize>| -> (usize, usize) {
        arrows.map(|a| (s.arrows[a].1, pos[a])).max().expect("non-empty chain")
    };
    let mut rel_at: Vec<Vec<Vec<usize>>> = (0..n).map(|v| vec![Vec::new(); s.in_arrows[v].len()]).collect();
    for (r, (l, rr)) in s.relations.iter().enumerate() {
        let (v, j) = trigger(&mut l.iter().chain(rr.iter()).copied());
        rel_at[v][j].push(r);
    }
    let mut chain_at: Vec<Vec<Vec<usize>>> = (0..n).map(|v| vec![Vec::new(); s.in_arrows[v].len()]).collect();
    for (c, (_, chain, _)) in p.chains.iter().enumerate() {
        if chain.is_empty() {
            continue;
        }
        let (v, j) = trigger(&mut chain.iter().copied());
        chain_at[v][j].push(c);
    }
    let mut seq_at = vec![Vec::new(); n];
    for (q, seq) in s.sequences.iter().enumerate() {
        for t in 0..seq.steps.len() {
            seq_at[seq.nodes[t + 1]].push((q, t));
        }
    }
    let mut normalize = vec![p.normalize; n];
    for v in 0..n {
        if p.fixed_sizes[v].is_some() || s.zero[v] {
            normalize[v] = false;
        }
    }
    for (a, m) in p.fixed_maps.iter().enumerate() {
        if m.is_some() {
            normalize[s.arrows[a].0] = false;
            normalize[s.arrows[a].1] = false;
        }
    }
    for (start, chain, _) in &p.chains {
        normalize[*start] = false;
        if let Some(&last) = chain.last() {
            normalize[s.arrows[last].1] = false;
        }
    }
    Plan { rel_at, chain_at, seq_at, normalize }
}

struct Dfs<'a, 'b> {
    p: &'a Problem<'b>,
    t: &'a Tables,
    plan: Plan,
    d: Diagram,
    budget: u64,
    stats: SearchStats,
    emit: &'a mut dyn FnMut(&Diagram) -> bool,
    stopped: bool,
}

impl Dfs<'_, '_> {
    fn node(&mut self, v: usize) -> Result<()> {
        if self.stopped {
            return Ok(());
        }
        self.stats.visited += 1;
        if self.stats.visited > self.budget {
            return Err(Error::ResourceLimit(format!(
                "cell search exceeded {} states (set SEGAL_LAB_MAX_CELLS to raise)",
                self.budget
            )));
        }
        let s = self.p.shape;
        if v == s.num_nodes() {
            self.stats.emitted += 1;
            if !(self.emit)(&self.d) {
                self.stopped = true;
            }
            return Ok(());
        }
        let sizes: Vec<u8> = if s.zero[v] {
            vec![0]
        } else if let Some(z) = self.p.fixed_sizes[v] {
            vec![z]
        } else {
            (0..=self.p.size_bound.min(self.t.bound) as u8).collect()
        };
        for z in sizes {
            self.d.sizes[v] = z;
            self.arrow(v, 0)?;
            if self.stopped {
                break;
            }
        }
        Ok(())
    }

    fn arrow(&mut self, v: usize, j: usize) -> Result<()> {
        let s = self.p.shape;
        let ins = &s.in_arrows[v];
        if j == ins.len() {
            if self.plan.normalize[v] && !self.orbit_minimal(v) {
                return Ok(());
            }
            if !self.sequences_ok(v) {
                return Ok(());
            }
            return self.node(v + 1);
        }
        let a = ins[j];
        let u = s.arrows[a].0;
        let (su, sv) = (self.d.sizes[u] as usize, self.d.sizes[v] as usize);
        let fixed = self.p.fixed_maps[a];
        let cands: Vec<Mor> = match fixed {
            Some(m) => {
                if m.cols() != su || m.rows() != sv {
                    return Ok(());
                }
                vec![m]
            }
            None => self.t.homs(su, sv).to_vec(),
        };
        for m in cands {
            self.d.maps[a] = m;
            if self.relations_ok(v, j) && self.chains_ok(v, j) {
                self.arrow(v, j + 1)?;
                if self.stopped {
                    break;
                }
            }
        }
        Ok(())
    }

    fn relations_ok(&self, v: usize, j: usize) -> bool {
        let s = self.p.shape;
        let b = self.t.b;
        self.plan.rel_at[v][j].iter().all(|&r| {
            let (l, rr) = &s.relations[r];
            let start = s.arrows[l[0]].0;
            self.d.along(b, start, l) == self.d.along(b, start, rr)
        })
    }

    fn chains_ok(&self, v: usize, j: usize) -> bool {
        let b = self.t.b;
        self.plan.chain_at[v][j].iter().all(|&c| {
            let (start, chain, want) = &self.p.chains[c];
            self.d.along(b, *start, chain) == *want
        })
    }

    fn sequences_ok(&self, v: usize) -> bool {
        let s = self.p.shape;
        let b = self.t.b;
        let k1 = s.k + 1;
        self.plan.seq_at[v].iter().all(|&(q, t)| {
            let seq = &s.sequences[q];
            let cur = self.d.along(b, seq.nodes[t], &seq.steps[t]);
            let prev = (t > 0).then(|| self.d.along(b, seq.nodes[t - 1], &seq.steps[t - 1]));
            partial_sequence_ok(b, s.variant, k1, prev.as_ref(), &cur, t)
        })
    }

    fn orbit_minimal(&self, v: usize) -> bool {
        let s = self.p.shape;
        let b = self.t.b;
        let ins = &s.in_arrows[v];
        if ins.is_empty() {
            return true;
        }
        let z = self.d.sizes[v] as usize;
        for g in self.t.auts(z).iter().skip(1) {
            for &a in ins {
                let cur = &self.d.maps[a];
                let moved = b.compose(g, cur);
                match moved.cmp(cur) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }
}

/// Runs the search, calling `emit` on every solution until it returns false.
pub fn search(p: &Problem<'_>, t: &Tables, budget: u64, emit: &mut dyn FnMut(&Diagram) -> bool) -> Result<SearchStats> {
    let plan = plan(p);
    let mut d = Diagram::zero(p.shape);
    for (a, m) in p.fixed_maps.iter().enumerate() {
        if let Some(m) = m {
            d.maps[a] = *m;
        }
    }
    let mut dfs = Dfs { p, t, plan, d, budget, stats: SearchStats { visited: 0, emitted: 0 }, emit, stopped: false };
    dfs.node(0)?;
    Ok(dfs.stats)
}

/// An isomorphism `x ≅ y` (components per node), optionally forced to be the identity on
/// the nodes flagged in `fixed`.
pub fn find_iso(t: &Tables, shape: &Shape, x: &Diagram, y: &Diagram, fixed: Option<&[bool]>) -> Option<Vec<Mor>> {
    if x.sizes != y.sizes {
        return None;
    }
    let mut phi: Vec<Mor> = x.sizes.iter().map(|&z| t.b.identity(z as usize)).collect();
    fn rec(
        t: &Tables,
        shape: &Shape,
        x: &Diagram,
        y: &Diagram,
        fixed: Option<&[bool]>,
        phi: &mut Vec<Mor>,
        v: usize,
    ) -> bool {
        if v == shape.num_nodes() {
            return true;
        }
        let z = x.sizes[v] as usize;
        let ident = [t.b.identity(z)];
        let cands: &[Mor] = if z == 0 || fixed.is_some_and(|f| f[v]) { &ident } else { t.auts(z) };
        for g in cands {
            let ok = shape.in_arrows[v].iter().all(|&a| {
                let u = shape.arrows[a].0;
                t.b.compose(g, &x.maps[a]) == t.b.compose(&y.maps[a], &phi[u])
            });
            if ok {
                phi[v] = *g;
                if rec(t, shape, x, y, fixed, phi, v + 1) {
                    return true;
                }
            }
        }
        false
    }
    rec(t, shape, x, y, fixed, &mut phi, 0).then_some(phi)
}

/// Sizes and ranks of all maps: an isomorphism invariant.
pub fn invariant(b: Backend, d: &Diagram) -> Vec<u8> {
    let mut v = d.sizes.clone();
    v.extend(d.maps.iter().map(|m| b.rank(m) as u8));
    v
}

/// Isomorphism classes with invariant buckets.
pub struct Classes {
    pub reps: Vec<Diagram>,
    buckets: HashMap<Vec<u8>, Vec<usize>>,
}

impl Classes {
    pub fn new() -> Classes {
        Classes { reps: Vec::new(), buckets: HashMap::new() }
    }

    pub fn find(&self, t: &Tables, shape: &Shape, d: &Diagram) -> Option<usize> {
        let key = invariant(t.b, d);
        self.buckets.get(&key)?.iter().copied().find(|&i| find_iso(t, shape, &self.reps[i], d, None).is_some())
    }

    /// Adds `d` unless isomorphic to a known class; returns its class index and whether it
    /// was new.
    pub fn insert(&mut self, t: &Tables, shape: &Shape, d: &Diagram) -> (usize, bool) {
        let key = invariant(t.b, d);
        let bucket = self.buckets.entry(key).or_default();
        if let Some(&i) = bucket.iter().find(|&&i| find_iso(t, shape, &self.reps[i], d, None).is_some()) {
            return (i, false);
        }
        self.reps.push(d.clone());
        bucket.push(self.reps.len() - 1);
        (self.reps.len() - 1, true)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

impl Default for Classes {
    fn default() -> Self {
        Classes::new()
    }
}

/// All cells of `shape` with every object of size at most `bound`, up to isomorphism.
pub fn enumerate_classes(shape: &Shape, t: &Tables, bound: usize, budget: u64) -> Result<Classes> {
    let p = Problem::free(shape, bound);
    let mut classes = Classes::new();
    search(&p, t, budget, &mut |d| {
        classes.insert(t, shape, d);
        true
    })?;
    Ok(classes)
}

/// All natural transformations `x → y` (components per node), up to `cap` of them.
pub fn homs_between(t: &Tables, shape: &Shape, x: &Diagram, y: &Diagram, cap: usize) -> Result<Vec<Vec<Mor>>> {
    let mut out = Vec::new();
    let mut phi: Vec<Mor> = x.sizes.iter().zip(&y.sizes).map(|(&a, &b)| Mor::zero(b as usize, a as usize)).collect();
    fn rec(
        t: &Tables,
        shape: &Shape,
        x: &Diagram,
        y: &Diagram,
        phi: &mut Vec<Mor>,
        v: usize,
        out: &mut Vec<Vec<Mor>>,
        cap: usize,
    ) -> Result<()> {
        if v == shape.num_nodes() {
            if out.len() >= cap {
                return Err(Error::ResourceLimit(format!("more than {cap} natural transformations")));
            }
            out.push(phi.clone());
            return Ok(());
        }
        let (sx, sy) = (x.sizes[v] as usize, y.sizes[v] as usize);
        for g in t.homs(sx, sy) {
            let ok = shape.in_arrows[v].iter().all(|&a| {
                let u = shape.arrows[a].0;
                t.b.compose(g, &x.maps[a]) == t.b.compose(&y.maps[a], &phi[u])
            });
            if ok {
                phi[v] = *g;
                rec(t, shape, x, y, phi, v + 1, out, cap)?;
            }
        }
        Ok(())
    }
    rec(t, shape, x, y, &mut phi, 0, &mut out, cap)?;
    Ok(out)
}
