use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{invalid, Result};

/// A subset of the ordinal `[n] = {0, …, n}`, stored as a sorted member list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetOfN {
    n: usize,
    members: Vec<usize>,
}

/// Gap parity classification of a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
    Neither,
    /// No gaps at all: the subset is the whole ordinal and satisfies both conditions vacuously.
    Both,
}

impl Parity {
    pub fn is_even(self) -> bool {
        matches!(self, Parity::Even | Parity::Both)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Odd | Parity::Both)
    }
}

impl SubsetOfN {
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m > n) {
            return invalid(format!("member exceeds ambient {n}: {members:?}"));
        }
        Ok(Self { n, members })
    }

    /// Builds a subset from members already known to be valid.
    pub(crate) fn from_sorted(n: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&m| m <= n));
        Self { n, members }
    }

    pub fn full(n: usize) -> Self {
        Self::from_sorted(n, (0..=n).collect())
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubsetOfN) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn gaps(&self) -> Vec<usize> {
        (0..=self.n).filter(|&j| !self.contains(j)).collect()
    }

    /// Number of members strictly above `j`.
    pub fn count_above(&self, j: usize) -> usize {
        self.members.iter().filter(|&&i| i > j).count()
    }

    pub fn classify(&self) -> Parity {
        let gaps = self.gaps();
        if gaps.is_empty() {
            return Parity::Both;
        }
        let even = gaps.iter().all(|&j| self.count_above(j).is_multiple_of(2));
        let odd = gaps.iter().all(|&j| self.count_above(j) % 2 == 1);
        match (even, odd) {
            (true, _) => Parity::Even,
            (_, true) => Parity::Odd,
            _ => Parity::Neither,
        }
    }

    pub fn has_adjacent_pair(&self) -> bool {
        self.members.windows(2).any(|w| w[1] == w[0] + 1)
    }

    pub fn with(&self, v: usize) -> SubsetOfN {
        let mut m = self.members.clone();
        m.push(v);
        SubsetOfN::new(self.n.max(v), m).expect("bounded member")
    }

    pub fn without(&self, v: usize) -> SubsetOfN {
        SubsetOfN::from_sorted(self.n, self.members.iter().copied().filter(|&m| m != v).collect())
    }

    pub fn with_ambient(&self, n: usize) -> Result<SubsetOfN> {
        SubsetOfN::new(n, self.members.clone())
    }

    pub fn intersection(&self, other: &SubsetOfN) -> SubsetOfN {
        SubsetOfN::from_sorted(self.n, self.members.iter().copied().filter(|&m| other.contains(m)).collect())
    }

    /// All nonempty subsets, in canonical order.
    pub fn nonempty_subsets(&self) -> Vec<SubsetOfN> {
        let k = self.members.len();
        let mut out = Vec::with_capacity((1usize << k) - 1);
        for mask in 1u64..(1u64 << k) {
            let members = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| self.members[b]).collect();
            out.push(SubsetOfN::from_sorted(self.n, members));
        }
        out.sort();
        out
    }

    pub fn bitmask(&self) -> u64 {
        self.members.iter().fold(0u64, |acc, &m| acc | 1u64 << m)
    }
}

impl fmt::Debug for SubsetOfN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members)
    }
}

impl fmt::Display for SubsetOfN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SubsetOfN {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsetOfN {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(d)?;
        let n = members.iter().copied().max().unwrap_or(0);
        SubsetOfN::new(n, members).map_err(serde::de::Error::custom)
    }
}

/// All `size`-element subsets of `[n]` in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<SubsetOfN> {
    let mut out = Vec::new();
    if size > n + 1 {
        return out;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(SubsetOfN::from_sorted(n, cur.clone()));
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n + 1 - size + i {
                cur[i] += 1;
                for j in i + 1..size {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn classify_subset(i: &SubsetOfN) -> Parity {
    i.classify()
}

/// Even and odd `(d+1)`-subsets of `[n]`: the lower and upper facets of `C([n], d+1)`.
pub fn gale_facets(n: usize, d: usize) -> Result<(Vec<SubsetOfN>, Vec<SubsetOfN>)> {
    if n < d {
        return invalid(format!("gale_facets needs n >= d, got n={n}, d={d}"));
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for s in subsets_of_size(n, d + 1) {
        let p = s.classify();
        if p.is_even() {
            lower.push(s.clone());
        }
        if p.is_odd() {
            upper.push(s);
        }
    }
    Ok((lower, upper))
}

/// Returns an even `2k`-subset of `[n]` containing `gamma`, if any.
///
/// For simplices with two adjacent vertices the superset is produced by induction on `n`:
/// the largest missing vertex `m` is swapped in for `n`, and the recursive answer is
/// swapped back. Otherwise the lexicographically first even superset is returned.
pub fn embed_in_even(gamma: &SubsetOfN, n: usize, k: usize) -> Result<Option<SubsetOfN>> {
    if gamma.len() != k + 1 {
        return invalid(format!("expected {} vertices, got {}", k + 1, gamma.len()));
    }
    if n < 2 * k {
        return invalid(format!("need n >= 2k, got n={n}, k={k}"));
    }
    if gamma.members().iter().any(|&v| v > n) {
        return invalid(format!("{gamma} is not a subset of [{n}]"));
    }
    let gamma = SubsetOfN::from_sorted(n, gamma.members().to_vec());
    if gamma.has_adjacent_pair() {
        if let Some(found) = embed_inductive(&gamma, n, k) {
            return Ok(Some(found));
        }
    }
    Ok(subsets_of_size(n, 2 * k).into_iter().find(|s| s.classify().is_even() && gamma.is_subset_of(s)))
}

fn embed_inductive(gamma: &SubsetOfN, n: usize, k: usize) -> Option<SubsetOfN> {
    if n == 2 * k {
        // drop an even vertex outside gamma; what remains has only the even gap
        let j = (0..=n).step_by(2).find(|&j| !gamma.contains(j))?;
        return Some(SubsetOfN::full(n).without(j));
    }
    if !gamma.contains(n) {
        let inner = SubsetOfN::from_sorted(n - 1, gamma.members().to_vec());
        return embed_inductive(&inner, n - 1, k).map(|s| SubsetOfN::from_sorted(n, s.members().to_vec()));
    }
    let m = *gamma.gaps().last()?;
    if m == 0 {
        return None;
    }
    let shifted = gamma.with(m).without(n);
    let shifted = SubsetOfN::from_sorted(n - 1, shifted.members().to_vec());
    let inner = embed_inductive(&shifted, n - 1, k)?;
    let lifted = SubsetOfN::from_sorted(n, inner.members().to_vec()).without(m).with(n);
    debug_assert!(lifted.classify().is_even() && gamma.is_subset_of(&lifted));
    Some(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, m: &[usize]) -> SubsetOfN {
        SubsetOfN::new(n, m.to_vec()).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(s(3, &[0, 2, 3]).classify(), Parity::Even);
        assert_eq!(s(3, &[0, 1, 3]).classify(), Parity::Odd);
        assert_eq!(s(3, &[0, 2]).classify(), Parity::Neither);
        assert_eq!(SubsetOfN::full(3).classify(), Parity::Both);
    }

    #[test]
    fn gale_examples() {
        let (lo, up) = gale_facets(3, 2).unwrap();
        assert_eq!(lo, vec![s(3, &[0, 1, 2]), s(3, &[0, 2, 3])]);
        assert_eq!(up, vec![s(3, &[0, 1, 3]), s(3, &[1, 2, 3])]);
        let (lo, up) = gale_facets(3, 1).unwrap();
        assert_eq!(lo, vec![s(3, &[0, 1]), s(3, &[1, 2]), s(3, &[2, 3])]);
        assert_eq!(up, vec![s(3, &[0, 3])]);
        assert!(gale_facets(2, 3).is_err());
    }

    #[test]
    fn lower_facets_in_even_dimension_pair_up() {
        for k in 1..=3 {
            let (lo, _) = gale_facets(2 * k, 2 * k - 1).unwrap();
            for f in lo {
                let m = f.members();
                assert!(m.chunks(2).all(|c| c[1] == c[0] + 1), "{f}");
            }
        }
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed_in_even(&s(4, &[0, 1, 3]), 4, 2).unwrap(), Some(s(4, &[0, 1, 3, 4])));
        assert_eq!(embed_in_even(&s(4, &[1, 2]), 4, 1).unwrap(), Some(s(4, &[1, 2])));
        assert_eq!(embed_in_even(&s(4, &[0, 2, 4]), 4, 2).unwrap(), None);
        assert!(embed_in_even(&s(4, &[0, 2]), 4, 2).is_err());
    }

    #[test]
    fn subsets_of_size_counts() {
        assert_eq!(subsets_of_size(5, 3).len(), 20);
        assert_eq!(subsets_of_size(2, 4).len(), 0);
        assert_eq!(subsets_of_size(3, 0).len(), 1);
    }
}
