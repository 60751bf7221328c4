//! Materialized simplicial finite categories, their reindexings (path spaces, edgewise
//! subdivision) and Segal maps into strict limits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{is_equivalence, limit_over_poset, CatFunctor, EquivalenceReport, FinCategory, Overlap};
use crate::combinatorics::{segal_poset, MonotoneMap, Side, SubsetOfN};
use crate::error::{Error, Result};

/// Endofunctors of `Δ` along which simplicial objects are pulled back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reindexing {
    /// `[n] ↦ [0] ⊕ [n]`.
    PathLeft,
    /// `[n] ↦ [n] ⊕ [0]`.
    PathRight,
    /// `[n] ↦ [0] ⊕ [n] ⊕ [0]`.
    DoublePath,
    /// `[n] ↦ [n]^op ⊕ [n]`, so that level `n` sits at `2n + 1`.
    Edgewise,
}

impl Reindexing {
    pub fn level(self, n: usize) -> usize {
        match self {
            Reindexing::PathLeft | Reindexing::PathRight => n + 1,
            Reindexing::DoublePath => n + 2,
            Reindexing::Edgewise => 2 * n + 1,
        }
    }

    /// The image of `θ: [m] → [n]` under the endofunctor.
    pub fn operator(self, theta: &MonotoneMap) -> MonotoneMap {
        let (m, n, v) = (theta.source_len(), theta.target_len(), theta.values());
        let values: Vec<usize> = match self {
            Reindexing::PathLeft => std::iter::once(0).chain(v.iter().map(|x| x + 1)).collect(),
            Reindexing::PathRight => v.iter().copied().chain(std::iter::once(n + 1)).collect(),
            Reindexing::DoublePath => {
                std::iter::once(0).chain(v.iter().map(|x| x + 1)).chain(std::iter::once(n + 2)).collect()
            }
            Reindexing::Edgewise => (0..=m).map(|j| n - v[m - j]).chain(v.iter().map(|x| n + 1 + x)).collect(),
        };
        MonotoneMap::new(self.level(n), values).expect("reindexed operator is monotone")
    }

    /// Image of a subset `I ⊆ [n]` (as the inclusion `[|I|−1] → [n]`).
    pub fn subset(self, i: &SubsetOfN) -> SubsetOfN {
        let incl = MonotoneMap::new(i.ambient(), i.members().to_vec()).expect("subset is monotone");
        self.operator(&incl).image()
    }
}

/// The inclusion `[|I|−1] → [n]` of a nonempty subset.
pub fn inclusion(i: &SubsetOfN) -> MonotoneMap {
    MonotoneMap::new(i.ambient(), i.members().to_vec()).expect("subset is monotone")
}

/// Levels `0..=top` of a simplicial finite category with face and degeneracy functors.
#[derive(Clone, Debug)]
pub struct SimplicialFinCategory {
    pub levels: Vec<FinCategory>,
    /// `faces[n][i]: X_n → X_{n−1}` (empty at level 0).
    pub faces: Vec<Vec<CatFunctor>>,
    /// `degeneracies[n][j]: X_n → X_{n+1}` (empty at the top level).
    pub degeneracies: Vec<Vec<CatFunctor>>,
}

impl SimplicialFinCategory {
    /// The constant simplicial category on `e`, materialized up to level `top`.
    pub fn constant(e: &FinCategory, top: usize) -> SimplicialFinCategory {
        let id = CatFunctor::identity(e);
        SimplicialFinCategory {
            levels: vec![e.clone(); top + 1],
            faces: (0..=top).map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }]).collect(),
            degeneracies: (0..=top).map(|n| vec![id.clone(); if n == top { 0 } else { n + 1 }]).collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// `X(θ): X_n → X_m` for `θ: [m] → [n]`, via its epi–mono factorization.
    pub fn apply(&self, theta: &MonotoneMap) -> Result<CatFunctor> {
        let (m, n) = (theta.source_len(), theta.target_len());
        if n > self.top() || m > self.top() {
            return Err(Error::InvalidArguments(format!("operator {theta:?} leaves the materialized levels")));
        }
        // X(δ) for the image inclusion: delete missing vertices from the top down
        let image = theta.values().iter().copied().collect::<std::collections::BTreeSet<_>>();
        let mut f = CatFunctor::identity(&self.levels[n]);
        let mut level = n;
        for v in (0..=n).rev().filter(|v| !image.contains(v)) {
            f = self.faces[level][v].after(&f);
            level -= 1;
        }
        // X(σ) for the surjection onto the image: a degeneracy per repeated value
        let mut vals: Vec<usize> = theta.values().to_vec();
        let mut repeats = Vec::new();
        while let Some(t) = (0..vals.len().saturating_sub(1)).find(|&t| vals[t] == vals[t + 1]) {
            repeats.push(t);
            vals.remove(t + 1);
        }
        // θ = θ' ∘ σ_{t₁} with θ' having one fewer repeat, so X(θ) = s_{t₁} ∘ X(θ')
        for &t in repeats.iter().rev() {
            f = self.degeneracies[level][t].after(&f);
            level += 1;
        }
        debug_assert_eq!(level, m);
        Ok(f)
    }

    /// Pullback along a reindexing, materialized for all levels that fit.
    pub fn reindex(&self, r: Reindexing) -> Result<SimplicialFinCategory> {
        let top = (0..=self.top())
            .take_while(|&n| r.level(n) <= self.top())
            .last()
            .ok_or_else(|| Error::InvalidArguments("not enough materialized levels to reindex".into()))?;
        let mut out = SimplicialFinCategory { levels: Vec::new(), faces: Vec::new(), degeneracies: Vec::new() };
        for n in 0..=top {
            out.levels.push(self.levels[r.level(n)].clone());
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n).map(|i| self.apply(&r.operator(&coface(n, i)))).collect::<Result<_>>()?
            };
            out.faces.push(faces);
            let degens = if n == top {
                Vec::new()
            } else {
                (0..=n).map(|j| self.apply(&r.operator(&codegeneracy(n, j)))).collect::<Result<_>>()?
            };
            out.degeneracies.push(degens);
        }
        Ok(out)
    }

    /// Validates every functor and the simplicial identities on all materialized levels.
    pub fn check_simplicial_identities(&self) -> Result<()> {
        let top = self.top();
        for n in 0..=top {
            for (i, f) in self.faces[n].iter().enumerate() {
                f.validate(&self.levels[n], &self.levels[n - 1])
                    .map_err(|e| Error::InvalidInput(format!("face d_{i} at level {n}: {e}")))?;
            }
            for (j, s) in self.degeneracies[n].iter().enumerate() {
                s.validate(&self.levels[n], &self.levels[n + 1])
                    .map_err(|e| Error::InvalidInput(format!("degeneracy s_{j} at level {n}: {e}")))?;
            }
        }
        let fail = |what: String| Err(Error::InvalidInput(format!("simplicial identity fails: {what}")));
        for n in 2..=top {
            for i in 0..=n {
                for j in i + 1..=n {
                    // d_i d_j = d_{j−1} d_i on X_n
                    if self.faces[n - 1][i].after(&self.faces[n][j])
                        != self.faces[n - 1][j - 1].after(&self.faces[n][i])
                    {
                        return fail(format!("d_{i} d_{j} at level {n}"));
                    }
                }
            }
        }
        for n in 0..top {
            let id = CatFunctor::identity(&self.levels[n]);
            for j in 0..=n {
                let s = &self.degeneracies[n][j];
                for i in 0..=n + 1 {
                    let lhs = self.faces[n + 1][i].after(s);
                    let ok = if i == j || i == j + 1 {
                        lhs == id
                    } else if i < j {
                        lhs == self.degeneracies[n - 1][j - 1].after(&self.faces[n][i])
                    } else {
                        lhs == self.degeneracies[n - 1][j].after(&self.faces[n][i - 1])
                    };
                    if !ok {
                        return fail(format!("d_{i} s_{j} at level {n}"));
                    }
                }
                for i in j..=n {
                    if n + 1 >= top {
                        break;
                    }
                    // s_{i+1} s_j = s_j s_i for j ≤ i
                    let lhs = self.degeneracies[n + 1][i + 1].after(s);
                    let rhs = self.degeneracies[n + 1][j].after(&self.degeneracies[n][i]);
                    if lhs != rhs {
                        return fail(format!("s_{} s_{j} at level {n}", i + 1));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `δ_i: [n−1] → [n]`, skipping `i`.
pub fn coface(n: usize, i: usize) -> MonotoneMap {
    MonotoneMap::new(n, (0..=n).filter(|&v| v != i).collect()).expect("coface")
}

/// `σ_j: [n+1] → [n]`, hitting `j` twice.
pub fn codegeneracy(n: usize, j: usize) -> MonotoneMap {
    MonotoneMap::new(n, (0..=n + 1).map(|v| if v <= j { v } else { v - 1 }).collect()).expect("codegeneracy")
}

/// The Segal map `X_n → lim_{I ∈ L} X_I` for the lower or upper poset of `[n]`, checked for
/// being an equivalence of explicit finite categories.
pub fn segal_map_check(x: &SimplicialFinCategory, n: usize, d: usize, side: Side) -> Result<EquivalenceReport> {
    if n > x.top() {
        return Err(Error::InvalidArguments(format!("level {n} is not materialized")));
    }
    let poset = segal_poset(n, d, side)?;
    let cells: Vec<&FinCategory> = poset.maximal.iter().map(|m| &x.levels[m.len() - 1]).collect();
    let restrict: Vec<CatFunctor> = poset.maximal.iter().map(|m| x.apply(&inclusion(m))).collect::<Result<_>>()?;
    let mut overlap_data = Vec::new();
    for (a, b, j) in poset.pairwise_intersections() {
        let within = |m: &SubsetOfN| {
            let pos: Vec<usize> =
                j.members().iter().map(|v| m.members().iter().position(|w| w == v).unwrap()).collect();
            MonotoneMap::new(m.len() - 1, pos).expect("positions are increasing")
        };
        let fa = x.apply(&within(&poset.maximal[a]))?;
        let fb = x.apply(&within(&poset.maximal[b]))?;
        overlap_data.push((a, b, j.len() - 1, fa, fb));
    }
    let overlaps: Vec<Overlap<'_>> = overlap_data
        .iter()
        .map(|(a, b, lvl, fa, fb)| Overlap { a: *a, b: *b, cell: &x.levels[*lvl], from_a: fa, from_b: fb })
        .collect();
    let limit = limit_over_poset(&cells, &overlaps)?;
    let obj_index: HashMap<&Vec<usize>, usize> = limit.object_tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let source = &x.levels[n];
    let on_objects = (0..source.num_objects())
        .map(|s| {
            let t: Vec<usize> = restrict.iter().map(|r| r.on_objects[s]).collect();
            obj_index.get(&t).copied().ok_or_else(|| Error::Internal("restriction leaves the limit".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mor_index: HashMap<&Vec<usize>, usize> =
        limit.morphism_tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let on_morphisms = (0..source.num_morphisms())
        .map(|f| {
            let t: Vec<usize> = restrict.iter().map(|r| r.on_morphisms[f]).collect();
            mor_index.get(&t).copied().ok_or_else(|| Error::Internal("restriction leaves the limit".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let functor = CatFunctor { on_objects, on_morphisms };
    functor.validate(source, &limit.category)?;
    Ok(is_equivalence(source, &limit.category, &functor))
}

#[cfg(test)]
mod tests {
    use super::super::tests::f1_upto;
    use super::*;

    #[test]
    fn reindexing_levels_and_subsets() {
        assert_eq!(Reindexing::PathLeft.level(0), 1);
        assert_eq!(Reindexing::DoublePath.level(1), 3);
        assert_eq!(Reindexing::Edgewise.level(0), 1);
        let i = SubsetOfN::new(4, vec![0, 2, 4]).unwrap();
        assert_eq!(Reindexing::PathLeft.subset(&i).members(), &[0, 1, 3, 5]);
        assert_eq!(Reindexing::PathRight.subset(&i).members(), &[0, 2, 4, 5]);
        let j = SubsetOfN::new(2, vec![0, 2]).unwrap();
        // mirror image {2, 0} followed by {3, 5}
        assert_eq!(Reindexing::Edgewise.subset(&j).members(), &[0, 2, 3, 5]);
        // edgewise faces skip n−i and n+1+i
        assert_eq!(Reindexing::Edgewise.operator(&coface(2, 0)).values(), &[0, 1, 4, 5]);
    }

    #[test]
    fn constant_object_is_segal() {
        let e = f1_upto(1);
        let x = SimplicialFinCategory::constant(&e, 4);
        x.check_simplicial_identities().unwrap();
        for n in 0..=4 {
            for d in 0..=n.min(3) {
                for side in [Side::Lower, Side::Upper] {
                    if segal_poset(n, d, side).is_ok() {
                        assert!(segal_map_check(&x, n, d, side).unwrap().verdict, "n={n} d={d} {side:?}");
                    }
                }
            }
        }
        for r in [Reindexing::PathLeft, Reindexing::PathRight, Reindexing::DoublePath, Reindexing::Edgewise] {
            x.reindex(r).unwrap().check_simplicial_identities().unwrap();
        }
    }
}
