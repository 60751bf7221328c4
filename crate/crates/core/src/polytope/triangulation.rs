//! Triangulations of `C([n], d)`: validity, enumeration, elementary flips and the flip graph.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::exact::{det, rat, rat_i, Rat};
use super::geometry::{proper_intersection_circuit, MomentConfig};
use crate::combinatorics::{gale_facets, subsets_of_size, Side, SubsetOfN};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangulation {
    pub n: usize,
    pub d: usize,
    pub simplices: Vec<SubsetOfN>,
}

impl Triangulation {
    /// Builds a triangulation candidate with sorted, deduplicated simplices (not validated).
    pub fn new(n: usize, d: usize, mut simplices: Vec<SubsetOfN>) -> Result<Self> {
        for s in &simplices {
            if s.len() != d + 1 || s.members().iter().any(|&v| v > n) {
                return invalid(format!("{s} is not a {}-subset of [{n}]", d + 1));
            }
        }
        let simplices: Vec<SubsetOfN> = {
            for s in simplices.iter_mut() {
                *s = s.with_ambient(n)?;
            }
            let set: BTreeSet<SubsetOfN> = simplices.into_iter().collect();
            set.into_iter().collect()
        };
        Ok(Self { n, d, simplices })
    }

    pub fn contains(&self, s: &SubsetOfN) -> bool {
        self.simplices.binary_search(s).is_ok()
    }
}

pub fn canonical_triangulation(n: usize, d: usize, side: Side) -> Result<Triangulation> {
    let (lower, upper) = gale_facets(n, d)?;
    let simplices = match side {
        Side::Lower => lower,
        Side::Upper => upper,
    };
    Triangulation::new(n, d, simplices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulationCertificate {
    pub valid: bool,
    /// `d!` times the summed simplex volumes.
    pub volume_sum: String,
    /// `d!` times the volume of `C([n], d)`.
    pub target_volume: String,
    pub improper_pairs: Vec<(SubsetOfN, SubsetOfN)>,
}

fn cyclic_volume(cfg: &MomentConfig) -> BigInt {
    let (lower, _) = gale_facets(cfg.n, cfg.d).expect("n >= d checked by caller");
    lower.iter().map(|s| cfg.scaled_volume(s)).sum()
}

pub fn is_triangulation(t: &Triangulation) -> Result<TriangulationCertificate> {
    if t.n < t.d {
        return invalid(format!("C([{}],{}) is degenerate", t.n, t.d));
    }
    let cfg = MomentConfig::new(t.n, t.d);
    let volume_sum: BigInt = t.simplices.iter().map(|s| cfg.scaled_volume(s)).sum();
    let target = cyclic_volume(&cfg);
    let mut improper_pairs = Vec::new();
    for (a, x) in t.simplices.iter().enumerate() {
        for y in &t.simplices[a + 1..] {
            if !cfg.proper_intersection_lp(x, y) {
                improper_pairs.push((x.clone(), y.clone()));
            }
        }
    }
    Ok(TriangulationCertificate {
        valid: volume_sum == target && improper_pairs.is_empty() && !t.simplices.is_empty(),
        volume_sum: volume_sum.to_string(),
        target_volume: target.to_string(),
        improper_pairs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_n: usize,
    pub max_d: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_n: 7, max_d: 3 }
    }
}

pub fn enumerate_triangulations(n: usize, d: usize) -> Result<Vec<Triangulation>> {
    enumerate_triangulations_with(n, d, EnumerationLimits::default())
}

/// Generic interior points, one per candidate simplex, avoiding every hyperplane spanned by
/// `d` of the configuration points; each lies in the interior of exactly one simplex of any
/// triangulation.
fn witness_points(cfg: &MomentConfig, simplices: &[SubsetOfN]) -> Vec<Vec<Rat>> {
    let d = cfg.d;
    let hyperplanes = subsets_of_size(cfg.n, d);
    let on_some_hyperplane = |x: &[Rat]| {
        hyperplanes.iter().any(|h| {
            let m = h.members();
            let base: Vec<Rat> = cfg.point(m[0]).iter().map(rat).collect();
            let mut rows: Vec<Vec<Rat>> =
                m[1..].iter().map(|&v| cfg.point(v).iter().zip(&base).map(|(a, b)| rat(a) - b).collect()).collect();
            rows.push(x.iter().zip(&base).map(|(a, b)| a - b).collect());
            rational_det(rows).is_zero()
        })
    };
    simplices
        .iter()
        .map(|s| {
            let mut salt: i64 = 0;
            loop {
                let weights: Vec<Rat> = (0..=d)
                    .map(|i| rat_i(1000 + 37 * (i as i64 + 1) * (i as i64 + 2) + 13 * salt * (i as i64 + 1)))
                    .collect();
                let total: Rat = weights.iter().cloned().sum();
                let mut x = vec![Rat::zero(); d];
                for (w, &v) in weights.iter().zip(s.members()) {
                    for (c, p) in x.iter_mut().zip(cfg.point(v)) {
                        *c += w * rat(p);
                    }
                }
                for c in x.iter_mut() {
                    *c /= &total;
                }
                if !on_some_hyperplane(&x) {
                    return x;
                }
                salt += 1;
            }
        })
        .collect()
}

fn rational_det(rows: Vec<Vec<Rat>>) -> Rat {
    let denom: BigInt = rows.iter().flatten().fold(BigInt::one(), |acc, r| num_integer::lcm(acc, r.denom().clone()));
    let scaled: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|x| (x * Rat::from_integer(denom.clone())).to_integer()).collect()).collect();
    let k = rows.len() as u32;
    Rat::new(det(scaled), denom.pow(k))
}

/// All triangulations of `C([n], d)`, by exact-cover search over witness points with
/// pairwise-compatibility pruning; every solution is re-validated by volume.
pub fn enumerate_triangulations_with(n: usize, d: usize, limits: EnumerationLimits) -> Result<Vec<Triangulation>> {
    if n < d || d == 0 {
        return invalid(format!("enumeration needs n >= d >= 1, got n={n}, d={d}"));
    }
    if n > limits.max_n || d > limits.max_d {
        return Err(Error::ResourceLimit(format!(
            "enumeration bounded by n <= {}, d <= {}; got n={n}, d={d}",
            limits.max_n, limits.max_d
        )));
    }
    let cfg = MomentConfig::new(n, d);
    let simplices = subsets_of_size(n, d + 1);
    let witnesses = witness_points(&cfg, &simplices);
    let covers: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            witnesses
                .iter()
                .enumerate()
                .filter(|(_, x)| cfg.barycentric(s, x).is_some_and(|bc| bc.iter().all(|c| c.is_positive())))
                .map(|(w, _)| w)
                .collect()
        })
        .collect();
    let by_witness: Vec<Vec<usize>> =
        (0..witnesses.len()).map(|w| (0..simplices.len()).filter(|&s| covers[s].contains(&w)).collect()).collect();
    let compatible: Vec<Vec<bool>> = simplices
        .iter()
        .map(|a| simplices.iter().map(|b| a == b || proper_intersection_circuit(a, b, d)).collect())
        .collect();
    let target = cyclic_volume(&cfg);
    let volumes: Vec<BigInt> = simplices.iter().map(|s| cfg.scaled_volume(s)).collect();

    struct Search<'a> {
        covers: &'a [Vec<usize>],
        by_witness: &'a [Vec<usize>],
        compatible: &'a [Vec<bool>],
        covered: Vec<bool>,
        chosen: Vec<usize>,
        found: Vec<Vec<usize>>,
    }
    fn go(s: &mut Search<'_>) {
        let Some(w) = s.covered.iter().position(|c| !c) else {
            s.found.push(s.chosen.clone());
            return;
        };
        for &cand in &s.by_witness[w] {
            if !s.chosen.iter().all(|&c| s.compatible[c][cand]) || s.covers[cand].iter().any(|&x| s.covered[x]) {
                continue;
            }
            for &x in &s.covers[cand] {
                s.covered[x] = true;
            }
            s.chosen.push(cand);
            go(s);
            s.chosen.pop();
            for &x in &s.covers[cand] {
                s.covered[x] = false;
            }
        }
    }
    let mut search = Search {
        covers: &covers,
        by_witness: &by_witness,
        compatible: &compatible,
        covered: vec![false; witnesses.len()],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    go(&mut search);
    let mut out = BTreeSet::new();
    for sol in search.found {
        let vol: BigInt = sol.iter().map(|&i| volumes[i].clone()).sum();
        if vol != target {
            return Err(Error::Internal(format!("exact cover with wrong volume at n={n}, d={d}")));
        }
        out.insert(Triangulation::new(n, d, sol.iter().map(|&i| simplices[i].clone()).collect())?);
    }
    Ok(out.into_iter().collect())
}

/// The lower and upper facets of the `(d+1)`-polytope on the vertex set `I` (Gale, relabelled).
pub fn circuit_facets(i: &SubsetOfN, d: usize) -> Result<(Vec<SubsetOfN>, Vec<SubsetOfN>)> {
    if i.len() != d + 2 {
        return invalid(format!("flip needs a {}-subset, got {i}", d + 2));
    }
    let (lo, up) = gale_facets(d + 1, d)?;
    let relabel = |f: &SubsetOfN| SubsetOfN::new(i.ambient(), f.members().iter().map(|&p| i.members()[p]).collect());
    Ok((lo.iter().map(relabel).collect::<Result<_>>()?, up.iter().map(relabel).collect::<Result<_>>()?))
}

/// Replaces the lower facets of `I` by its upper facets.
pub fn flip(t: &Triangulation, i: &SubsetOfN) -> Result<Triangulation> {
    if i.members().iter().any(|&v| v > t.n) {
        return invalid(format!("{i} is not a subset of [{}]", t.n));
    }
    let i = i.with_ambient(t.n)?;
    let (lower, upper) = circuit_facets(&i, t.d)?;
    if let Some(missing) = lower.iter().find(|f| !t.contains(f)) {
        return Err(Error::NotFlippable(format!("lower facet {missing} of {i} is not in the triangulation")));
    }
    let mut simplices: Vec<SubsetOfN> = t.simplices.iter().filter(|s| !lower.contains(s)).cloned().collect();
    simplices.extend(upper);
    Triangulation::new(t.n, t.d, simplices)
}

#[derive(Clone, Debug, Serialize)]
pub struct FlipEdge {
    pub from: usize,
    pub to: usize,
    pub circuit: SubsetOfN,
}

/// Increasing flips between the enumerated triangulations.
#[derive(Clone, Debug, Serialize)]
pub struct FlipGraph {
    pub n: usize,
    pub d: usize,
    pub nodes: Vec<Triangulation>,
    pub edges: Vec<FlipEdge>,
}

impl FlipGraph {
    pub fn build(n: usize, d: usize) -> Result<Self> {
        let nodes = enumerate_triangulations(n, d)?;
        let index: BTreeMap<&Triangulation, usize> = nodes.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut edges = Vec::new();
        for (from, t) in nodes.iter().enumerate() {
            for c in subsets_of_size(n, d + 2) {
                if let Ok(next) = flip(t, &c) {
                    let to = *index.get(&next).ok_or_else(|| {
                        Error::Internal(format!("flip of triangulation {from} along {c} left the enumeration"))
                    })?;
                    edges.push(FlipEdge { from, to, circuit: c });
                }
            }
        }
        Ok(Self { n, d, nodes, edges })
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.edges.iter().all(|e| e.to != v)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.edges.iter().all(|e| e.from != v)).collect()
    }

    pub fn index_of(&self, t: &Triangulation) -> Option<usize> {
        self.nodes.iter().position(|x| x == t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let adjacency: Vec<Vec<usize>> =
            (0..self.nodes.len()).map(|v| self.edges.iter().filter(|e| e.from == v).map(|e| e.to).collect()).collect();
        serde_json::json!({
            "n": self.n,
            "d": self.d,
            "nodes": self.nodes,
            "adjacency": adjacency,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph flips {\n");
        for (i, t) in self.nodes.iter().enumerate() {
            let label: Vec<String> = t.simplices.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("  t{i} [label=\"{}\"];\n", label.join(" ")));
        }
        for e in &self.edges {
            out.push_str(&format!("  t{} -> t{} [label=\"{}\"];\n", e.from, e.to, e.circuit));
        }
        out.push_str("}\n");
        out
    }
}
