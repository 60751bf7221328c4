use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::subset::{gale_facets, SubsetOfN};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            other => invalid(format!("unknown side {other:?}")),
        }
    }
}

/// The downward closure of the even (lower) or odd (upper) `(d+1)`-subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalPoset {
    pub n: usize,
    pub d: usize,
    pub side: Side,
    pub maximal: Vec<SubsetOfN>,
    #[serde(skip)]
    pub all_elements: Vec<SubsetOfN>,
}

impl SegalPoset {
    pub fn contains(&self, s: &SubsetOfN) -> bool {
        self.maximal.iter().any(|m| s.is_subset_of(m))
    }

    /// Pairwise intersections of distinct maximal elements (nonempty ones only).
    pub fn pairwise_intersections(&self) -> Vec<(usize, usize, SubsetOfN)> {
        let mut out = Vec::new();
        for a in 0..self.maximal.len() {
            for b in a + 1..self.maximal.len() {
                let j = self.maximal[a].intersection(&self.maximal[b]);
                if !j.is_empty() {
                    out.push((a, b, j));
                }
            }
        }
        out
    }
}

pub fn segal_poset(n: usize, d: usize, side: Side) -> Result<SegalPoset> {
    let (lower, upper) = gale_facets(n, d)?;
    let maximal = match side {
        Side::Lower => lower,
        Side::Upper => upper,
    };
    let mut closure = BTreeSet::new();
    for m in &maximal {
        closure.extend(m.nonempty_subsets());
    }
    Ok(SegalPoset { n, d, side, maximal, all_elements: closure.into_iter().collect() })
}

/// One piece `U([i−1], d−1) ⊕ {i}` of the decomposition of `L([n], d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerPiece {
    pub top: usize,
    pub inner: SegalPoset,
}

impl LowerPiece {
    /// Maximal elements of the piece as subsets of `[n]`.
    pub fn shifted_maximal(&self, n: usize) -> Vec<SubsetOfN> {
        self.inner
            .maximal
            .iter()
            .map(|m| {
                let mut v = m.members().to_vec();
                v.push(self.top);
                SubsetOfN::new(n, v).expect("piece stays inside [n]")
            })
            .collect()
    }
}

pub fn decompose_lower_poset(n: usize, d: usize) -> Result<Vec<LowerPiece>> {
    if d == 0 || n < d {
        return invalid(format!("decomposition needs n >= d >= 1, got n={n}, d={d}"));
    }
    (d..=n).map(|i| Ok(LowerPiece { top: i, inner: segal_poset(i - 1, d - 1, Side::Upper)? })).collect()
}

/// `{I ∪ {n} : I maximal in L([n−1], d−1)}`, which coincides with `max U([n], d)` for even `d`.
pub fn right_cone_of_lower(n: usize, d: usize) -> Result<Vec<SubsetOfN>> {
    if n == 0 || d == 0 {
        return invalid("right cone needs n, d >= 1");
    }
    let inner = segal_poset(n - 1, d - 1, Side::Lower)?;
    let mut out: Vec<SubsetOfN> = inner
        .maximal
        .iter()
        .map(|m| {
            let mut v = m.members().to_vec();
            v.push(n);
            SubsetOfN::new(n, v).unwrap()
        })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::subset::subsets_of_size;

    fn sets(n: usize, v: &[&[usize]]) -> Vec<SubsetOfN> {
        let mut out: Vec<_> = v.iter().map(|m| SubsetOfN::new(n, m.to_vec()).unwrap()).collect();
        out.sort();
        out
    }

    #[test]
    fn lower_one_segal_is_the_spine() {
        let p = segal_poset(4, 1, Side::Lower).unwrap();
        assert_eq!(p.maximal, sets(4, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4]]));
    }

    #[test]
    fn upper_three_is_fan_of_triangles() {
        for n in 3..=8 {
            let p = segal_poset(n, 3, Side::Upper).unwrap();
            let expected: Vec<Vec<usize>> = (1..n - 1).map(|i| vec![0, i, i + 1, n]).collect();
            let refs: Vec<&[usize]> = expected.iter().map(|v| v.as_slice()).collect();
            assert_eq!(p.maximal, sets(n, &refs));
        }
    }

    #[test]
    fn lower_three_on_five() {
        let p = segal_poset(5, 3, Side::Lower).unwrap();
        let want = sets(5, &[&[0, 1, 2, 3], &[0, 1, 3, 4], &[0, 1, 4, 5], &[1, 2, 4, 5], &[2, 3, 4, 5], &[1, 2, 3, 4]]);
        assert_eq!(p.maximal, want);
    }

    #[test]
    fn decomposition_pieces() {
        let pieces = decompose_lower_poset(5, 3).unwrap();
        let last = pieces.iter().find(|p| p.top == 5).unwrap();
        let mut got = last.shifted_maximal(5);
        got.sort();
        assert_eq!(got, sets(5, &[&[0, 1, 4, 5], &[1, 2, 4, 5], &[2, 3, 4, 5]]));
        let single = decompose_lower_poset(3, 3).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].shifted_maximal(3), sets(3, &[&[0, 1, 2, 3]]));
        for n in 1..=8 {
            for d in 1..=4.min(n) {
                let mut all: Vec<SubsetOfN> = Vec::new();
                for p in decompose_lower_poset(n, d).unwrap() {
                    all.extend(p.shifted_maximal(n));
                }
                let count = all.len();
                all.sort();
                all.dedup();
                assert_eq!(all.len(), count, "pieces overlap at n={n} d={d}");
                assert_eq!(all, segal_poset(n, d, Side::Lower).unwrap().maximal, "n={n} d={d}");
            }
        }
        // brute force: the even 3-subsets of [4] are 012, 023, 034
        let brute: Vec<_> = subsets_of_size(4, 3).into_iter().filter(|s| s.classify().is_even()).collect();
        assert_eq!(brute, sets(4, &[&[0, 1, 2], &[0, 2, 3], &[0, 3, 4]]));
        assert_eq!(
            decompose_lower_poset(4, 2).unwrap().iter().map(|p| p.inner.maximal.len()).sum::<usize>(),
            brute.len()
        );
    }

    #[test]
    fn right_cone_bijection_for_even_d() {
        for d in [2usize, 4] {
            for n in d..=8 {
                let up = segal_poset(n, d, Side::Upper).unwrap().maximal;
                assert_eq!(right_cone_of_lower(n, d).unwrap(), up, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn only_epsilon_is_uncovered() {
        for k in 1..=3 {
            let n = 2 * k;
            let p = segal_poset(n, 2 * k - 1, Side::Lower).unwrap();
            let uncovered: Vec<_> = subsets_of_size(n, k + 1).into_iter().filter(|s| !p.contains(s)).collect();
            let eps: Vec<usize> = (0..=k).map(|i| 2 * i).collect();
            assert_eq!(uncovered, vec![SubsetOfN::new(n, eps).unwrap()]);
        }
    }

    #[test]
    fn closure_is_downward_closed() {
        let p = segal_poset(5, 2, Side::Upper).unwrap();
        for e in &p.all_elements {
            for s in e.nonempty_subsets() {
                assert!(p.all_elements.binary_search(&s).is_ok());
            }
        }
    }
}
