//! Exact predicates on simplices spanned by moment-curve points.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{det, feasible, moment_point, rat, rat_i, solve, Constraint, Rat, Rel};
use crate::combinatorics::{subsets_of_size, SubsetOfN};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FacetSide {
    LowerFacet,
    UpperFacet,
    NotAFacet,
}

/// The points `γ_d(0), …, γ_d(n)` in `ℝ^d`.
#[derive(Clone, Debug)]
pub struct MomentConfig {
    pub n: usize,
    pub d: usize,
    points: Vec<Vec<BigInt>>,
    rpoints: Vec<Vec<Rat>>,
}

/// How `lies_below` treats simplices with empty intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmptyIntersection {
    /// Empty intersection satisfies the inclusion (set-theoretic reading).
    Vacuous,
    /// Only intersecting simplices can be related.
    Excluded,
}

impl MomentConfig {
    pub fn new(n: usize, d: usize) -> Self {
        let points: Vec<Vec<BigInt>> = (0..=n).map(|t| moment_point(t as i64, d).coords).collect();
        let rpoints = points.iter().map(|p| p.iter().map(rat).collect()).collect();
        Self { n, d, points, rpoints }
    }

    pub fn point(&self, t: usize) -> &[BigInt] {
        &self.points[t]
    }

    fn check_simplex(&self, s: &SubsetOfN) -> Result<()> {
        if s.len() != self.d + 1 || s.members().iter().any(|&v| v > self.n) {
            return invalid(format!("{s} is not a {}-simplex of [{}]", self.d, self.n));
        }
        Ok(())
    }

    /// `d! · vol(conv γ_d(S))` as an exact integer.
    pub fn scaled_volume(&self, s: &SubsetOfN) -> BigInt {
        let m = s.members();
        let base = &self.points[m[0]];
        let rows: Vec<Vec<BigInt>> =
            m[1..].iter().map(|&v| self.points[v].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        det(rows).abs()
    }

    /// Barycentric coordinates of `x` with respect to the simplex `s`.
    pub fn barycentric(&self, s: &SubsetOfN, x: &[Rat]) -> Option<Vec<Rat>> {
        let m = s.members();
        let k = m.len();
        // rows: coordinate equations plus the affine constraint
        let mut a = vec![vec![Rat::zero(); k]; self.d + 1];
        let mut b = vec![Rat::zero(); self.d + 1];
        for (col, &v) in m.iter().enumerate() {
            for row in 0..self.d {
                a[row][col] = self.rpoints[v][row].clone();
            }
            a[self.d][col] = rat_i(1);
        }
        b[..self.d].clone_from_slice(&x[..self.d]);
        b[self.d] = rat_i(1);
        solve(a, b)
    }

    /// Linear system describing `{(λ, μ) : Σλ_i p_i = Σμ_j p_j, λ, μ in the standard simplices}`.
    fn intersection_system(&self, i: &SubsetOfN, j: &SubsetOfN) -> (usize, Vec<Constraint>) {
        let (a, b) = (i.members(), j.members());
        let nv = a.len() + b.len();
        let mut cons = Vec::with_capacity(nv + self.d + 2);
        for v in 0..nv {
            let mut c = vec![Rat::zero(); nv];
            c[v] = rat_i(1);
            cons.push(Constraint::new(c, Rel::Ge, Rat::zero()));
        }
        let mut sl = vec![Rat::zero(); nv];
        let mut sm = vec![Rat::zero(); nv];
        for v in 0..a.len() {
            sl[v] = rat_i(1);
        }
        for v in 0..b.len() {
            sm[a.len() + v] = rat_i(1);
        }
        cons.push(Constraint::new(sl, Rel::Eq, rat_i(1)));
        cons.push(Constraint::new(sm, Rel::Eq, rat_i(1)));
        for row in 0..self.d {
            let mut c = vec![Rat::zero(); nv];
            for (v, &p) in a.iter().enumerate() {
                c[v] = self.rpoints[p][row].clone();
            }
            for (v, &p) in b.iter().enumerate() {
                c[a.len() + v] = -self.rpoints[p][row].clone();
            }
            cons.push(Constraint::new(c, Rel::Eq, Rat::zero()));
        }
        (nv, cons)
    }

    fn feasible_with_positive(&self, i: &SubsetOfN, j: &SubsetOfN, var: Option<usize>) -> bool {
        let (nv, mut cons) = self.intersection_system(i, j);
        if let Some(v) = var {
            let mut c = vec![Rat::zero(); nv];
            c[v] = rat_i(1);
            cons.push(Constraint::new(c, Rel::Gt, Rat::zero()));
        }
        feasible(nv, &cons)
    }

    pub fn intersects(&self, i: &SubsetOfN, j: &SubsetOfN) -> bool {
        self.feasible_with_positive(i, j, None)
    }

    /// Proper intersection by exact linear feasibility: the intersection is `conv(I ∩ J)` iff no
    /// intersection point puts positive weight on an unshared vertex.
    pub fn proper_intersection_lp(&self, i: &SubsetOfN, j: &SubsetOfN) -> bool {
        let off = i.len();
        let bad_i = i.members().iter().enumerate().filter(|(_, v)| !j.contains(**v)).map(|(p, _)| p);
        let bad_j = j.members().iter().enumerate().filter(|(_, v)| !i.contains(**v)).map(|(p, _)| off + p);
        let bad: Vec<usize> = bad_i.chain(bad_j).collect();
        bad.into_iter().all(|v| !self.feasible_with_positive(i, j, Some(v)))
    }

    /// `lies_below` decided entirely by linear feasibility.
    pub fn lies_below_lp(&self, i: &SubsetOfN, j: &SubsetOfN, empty: EmptyIntersection) -> bool {
        if !self.intersects(i, j) {
            return empty == EmptyIntersection::Vacuous;
        }
        let off = i.len();
        let in_upper_of_i = (0..=self.d)
            .filter(|&p| facet_missing_is_upper(self.d, p))
            .any(|p| !self.feasible_with_positive(i, j, Some(p)));
        in_upper_of_i
            && (0..=self.d)
                .filter(|&p| !facet_missing_is_upper(self.d, p))
                .any(|p| !self.feasible_with_positive(i, j, Some(off + p)))
    }

    /// Whether `|Δ^I| ≺ |Δ^J|`: the intersection lies in the upper boundary of `I` and the
    /// lower boundary of `J`.
    ///
    /// Properly intersecting pairs meet in the common face `conv(I ∩ J)`, which lies in the
    /// facet opposite `v` exactly when `v ∉ J`; only improper pairs need linear feasibility.
    pub fn lies_below(&self, i: &SubsetOfN, j: &SubsetOfN, empty: EmptyIntersection) -> Result<bool> {
        self.check_simplex(i)?;
        self.check_simplex(j)?;
        if !proper_intersection_circuit(i, j, self.d) {
            return Ok(self.lies_below_lp(i, j, empty));
        }
        if i.intersection(j).is_empty() {
            return Ok(empty == EmptyIntersection::Vacuous);
        }
        let upper_i = i.members().iter().enumerate().any(|(p, v)| facet_missing_is_upper(self.d, p) && !j.contains(*v));
        let lower_j =
            j.members().iter().enumerate().any(|(p, v)| !facet_missing_is_upper(self.d, p) && !i.contains(*v));
        Ok(upper_i && lower_j)
    }

    /// Classifies `conv γ_d(I)`, `|I| = d`, as a lower/upper facet of `C([n], d)` by the side on
    /// which the remaining points lie relative to its hyperplane.
    pub fn facet_side(&self, i: &SubsetOfN) -> Result<FacetSide> {
        let m = i.members();
        if m.len() != self.d || m.iter().any(|&v| v > self.n) || self.n < self.d {
            return invalid(format!("{i} is not a facet candidate of C([{}],{})", self.n, self.d));
        }
        let base = &self.points[m[0]];
        let diff = |p: &[BigInt]| -> Vec<BigInt> { p.iter().zip(base).map(|(a, b)| a - b).collect() };
        let rows: Vec<Vec<BigInt>> = m[1..].iter().map(|&v| diff(&self.points[v])).collect();
        let orient = |q: Vec<BigInt>| {
            let mut r = rows.clone();
            r.push(q);
            det(r)
        };
        let mut up = vec![BigInt::zero(); self.d];
        up[self.d - 1] = BigInt::from(1);
        let reference = orient(up);
        if reference.is_zero() {
            return Err(Error::Internal(format!("vertical hyperplane through {i}")));
        }
        let (mut above, mut below) = (0usize, 0usize);
        for t in (0..=self.n).filter(|t| !i.contains(*t)) {
            let s = orient(diff(&self.points[t]));
            if s.is_zero() {
                return Err(Error::Internal(format!("point {t} lies on the hyperplane through {i}")));
            }
            if s.sign() == reference.sign() {
                above += 1;
            } else {
                below += 1;
            }
        }
        Ok(match (above, below) {
            (_, 0) => FacetSide::LowerFacet,
            (0, _) => FacetSide::UpperFacet,
            _ => FacetSide::NotAFacet,
        })
    }
}

/// Within a `d`-simplex, the facet opposite the vertex in position `p` is upper iff `d − p` is odd.
pub fn facet_missing_is_upper(d: usize, p: usize) -> bool {
    (d - p) % 2 == 1
}

/// Proper intersection by the circuit criterion: two simplices on the moment curve in `ℝ^d`
/// meet improperly iff some `d+2` of their vertices, alternately signed, have the positive
/// part inside one and the negative part inside the other.
pub fn proper_intersection_circuit(i: &SubsetOfN, j: &SubsetOfN, d: usize) -> bool {
    let mut union: Vec<usize> = i.members().to_vec();
    union.extend_from_slice(j.members());
    union.sort_unstable();
    union.dedup();
    let n = *union.last().unwrap_or(&0);
    let u = SubsetOfN::new(n, union).expect("bounded");
    for pick in subsets_of_size(u.len().saturating_sub(1), d + 2) {
        let z: Vec<usize> = pick.members().iter().map(|&p| u.members()[p]).collect();
        let fits = |first: &SubsetOfN, second: &SubsetOfN| {
            z.iter().enumerate().all(|(p, v)| if p % 2 == 0 { first.contains(*v) } else { second.contains(*v) })
        };
        if fits(i, j) || fits(j, i) {
            return false;
        }
    }
    true
}

pub fn facet_side_geometric(i: &SubsetOfN, n: usize, d: usize) -> Result<FacetSide> {
    if i.len() != d + 1 || n < d + 1 {
        return invalid(format!("need a {}-subset of [{n}] with n >= {}", d + 1, d + 1));
    }
    MomentConfig::new(n, d + 1).facet_side(i)
}

pub fn lies_below(i: &SubsetOfN, j: &SubsetOfN, n: usize, d: usize) -> Result<bool> {
    MomentConfig::new(n, d).lies_below(i, j, EmptyIntersection::Vacuous)
}
