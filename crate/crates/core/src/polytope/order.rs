//! The "lies below" relation on `d`-simplices of `Δⁿ` and its transitive closure.

use serde::Serialize;

use super::geometry::{facet_missing_is_upper, EmptyIntersection, MomentConfig};
use super::triangulation::Triangulation;
use crate::combinatorics::{gale_facets, subsets_of_size, SubsetOfN};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct BelowOrder {
    pub n: usize,
    pub d: usize,
    pub variant: BelowVariant,
    pub simplices: Vec<SubsetOfN>,
    /// Pairs `(a, b)` of indices with `simplices[a] ≺ simplices[b]`.
    pub relation: Vec<(usize, usize)>,
    /// A directed cycle of the relation, if its transitive closure fails antisymmetry.
    pub cycle: Option<Vec<SubsetOfN>>,
}

impl BelowOrder {
    pub fn is_partial_order(&self) -> bool {
        self.cycle.is_none()
    }
}

/// Which relation on `d`-simplices is being ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BelowVariant {
    /// Intersection contained in the upper boundary of the first and the lower boundary of the
    /// second simplex.
    Boundary(EmptyIntersection),
    /// The boundary condition restricted to simplices sharing a common facet.
    SharedFacet,
}

pub fn below_relation(n: usize, d: usize, convention: EmptyIntersection) -> Result<BelowOrder> {
    below_relation_variant(n, d, BelowVariant::Boundary(convention))
}

pub fn below_relation_variant(n: usize, d: usize, variant: BelowVariant) -> Result<BelowOrder> {
    if d == 0 || n < d {
        return Err(Error::InvalidArguments(format!("below order needs n >= d >= 1, got n={n}, d={d}")));
    }
    if d > 3 || n > 7 {
        return Err(Error::ResourceLimit(format!("below order bounded by d <= 3, n <= 7; got n={n}, d={d}")));
    }
    let cfg = MomentConfig::new(n, d);
    let simplices = subsets_of_size(n, d + 1);
    let mut relation = Vec::new();
    for (a, x) in simplices.iter().enumerate() {
        for (b, y) in simplices.iter().enumerate() {
            let hit = a != b
                && match variant {
                    BelowVariant::Boundary(e) => cfg.lies_below(x, y, e)?,
                    BelowVariant::SharedFacet => {
                        x.intersection(y).len() == d && cfg.lies_below(x, y, EmptyIntersection::Excluded)?
                    }
                };
            if hit {
                relation.push((a, b));
            }
        }
    }
    let cycle = find_cycle(simplices.len(), &relation).map(|c| c.into_iter().map(|i| simplices[i].clone()).collect());
    Ok(BelowOrder { n, d, variant, simplices, relation, cycle })
}

/// Computes `≺` on intersecting simplices and checks that its transitive closure is antisymmetric;
/// a found cycle is returned in the report rather than as an error.
pub fn below_order_check(n: usize, d: usize) -> Result<BelowOrder> {
    below_relation(n, d, EmptyIntersection::Excluded)
}

fn find_cycle(nv: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); nv];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; nv];
    let mut parent = vec![usize::MAX; nv];
    for root in 0..nv {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    1 => {
                        let mut cyc = vec![w];
                        let mut u = v;
                        while u != w {
                            cyc.push(u);
                            u = parent[u];
                        }
                        cyc.reverse();
                        return Some(cyc);
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Facets of the simplex `i` on the chosen side, relabelled into `[n]`.
fn simplex_facets(i: &SubsetOfN, d: usize, upper: bool) -> Vec<SubsetOfN> {
    (0..=d).filter(|&p| facet_missing_is_upper(d, p) == upper).map(|p| i.without(i.members()[p])).collect()
}

/// A simplex of `t` whose lower facets all lie in the lower boundary of `C([n], d)`.
pub fn lowest_simplex(t: &Triangulation) -> Option<SubsetOfN> {
    boundary_simplex(t, false)
}

/// A simplex of `t` whose upper facets all lie in the upper boundary of `C([n], d)`.
pub fn highest_simplex(t: &Triangulation) -> Option<SubsetOfN> {
    boundary_simplex(t, true)
}

fn boundary_simplex(t: &Triangulation, upper: bool) -> Option<SubsetOfN> {
    if t.d == 0 {
        return t.simplices.first().cloned();
    }
    // facets of C([n], d) are the d-subsets classified by Gale in dimension d − 1
    let (lo, up) = gale_facets(t.n, t.d - 1).ok()?;
    let boundary = if upper { up } else { lo };
    t.simplices.iter().find(|s| simplex_facets(s, t.d, upper).iter().all(|f| boundary.contains(f))).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::triangulation::enumerate_triangulations;

    fn s(n: usize, m: &[usize]) -> SubsetOfN {
        SubsetOfN::new(n, m.to_vec()).unwrap()
    }

    fn related(o: &BelowOrder, a: &SubsetOfN, b: &SubsetOfN) -> bool {
        let ia = o.simplices.iter().position(|x| x == a).unwrap();
        let ib = o.simplices.iter().position(|x| x == b).unwrap();
        o.relation.contains(&(ia, ib))
    }

    #[test]
    fn chain_on_the_line() {
        let o = below_order_check(3, 1).unwrap();
        assert!(o.is_partial_order());
        assert!(related(&o, &s(3, &[0, 1]), &s(3, &[1, 2])));
        assert!(related(&o, &s(3, &[1, 2]), &s(3, &[2, 3])));
    }

    #[test]
    fn triangles_in_the_plane() {
        let o = below_order_check(3, 2).unwrap();
        assert!(o.is_partial_order());
        assert!(related(&o, &s(3, &[0, 1, 2]), &s(3, &[0, 2, 3])));
    }

    #[test]
    fn vacuous_reading_creates_two_cycles() {
        let o = below_relation(3, 1, EmptyIntersection::Vacuous).unwrap();
        assert!(!o.is_partial_order());
        assert!(related(&o, &s(3, &[0, 1]), &s(3, &[2, 3])));
        assert!(related(&o, &s(3, &[2, 3]), &s(3, &[0, 1])));
    }

    #[test]
    fn every_triangulation_has_extreme_simplices() {
        for d in 1..=3 {
            for n in d..=6 {
                for t in enumerate_triangulations(n, d).unwrap() {
                    assert!(lowest_simplex(&t).is_some(), "{t:?}");
                    assert!(highest_simplex(&t).is_some(), "{t:?}");
                }
            }
        }
    }
}
