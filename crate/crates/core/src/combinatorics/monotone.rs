use serde::{Deserialize, Serialize};
use std::fmt;

use super::subset::SubsetOfN;
use crate::error::{invalid, Result};

/// A weakly increasing map `[k] → [n]`, i.e. a (possibly degenerate) `k`-simplex of `Δⁿ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonotoneMap {
    n: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return invalid("a monotone map needs at least one value");
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > n) {
            return invalid(format!("{values:?} is not a monotone map into [{n}]"));
        }
        Ok(Self { n, values })
    }

    pub fn source_len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_len(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.n
            && self.values.windows(2).all(|w| w[1] <= w[0] + 1)
    }

    pub fn image(&self) -> SubsetOfN {
        SubsetOfN::new(self.n, self.values.clone()).expect("values are bounded")
    }

    /// `d_i^*`: delete position `i`.
    pub fn face(&self, i: usize) -> Result<MonotoneMap> {
        if i >= self.values.len() || self.values.len() == 1 {
            return invalid(format!("face index {i} out of range for {self:?}"));
        }
        let mut v = self.values.clone();
        v.remove(i);
        Ok(MonotoneMap { n: self.n, values: v })
    }

    /// `s_j^*`: duplicate position `j`.
    pub fn degeneracy(&self, j: usize) -> Result<MonotoneMap> {
        if j >= self.values.len() {
            return invalid(format!("degeneracy index {j} out of range for {self:?}"));
        }
        let mut v = self.values.clone();
        v.insert(j, v[j]);
        Ok(MonotoneMap { n: self.n, values: v })
    }

    pub fn faces(&self) -> Vec<MonotoneMap> {
        (0..self.values.len()).filter_map(|i| self.face(i).ok()).collect()
    }

    pub fn degeneracies(&self) -> Vec<MonotoneMap> {
        (0..self.values.len()).map(|j| self.degeneracy(j).unwrap()).collect()
    }

    /// The elementary successor `β + e_i`, when it is still monotone.
    pub fn step(&self, i: usize) -> Option<MonotoneMap> {
        let v = self.values[i] + 1;
        if v > self.n || (i + 1 < self.values.len() && v > self.values[i + 1]) {
            return None;
        }
        let mut values = self.values.clone();
        values[i] = v;
        Some(MonotoneMap { n: self.n, values })
    }

    /// Precomposition `self ∘ θ` with a monotone map `θ: [m] → [k]`.
    pub fn compose(&self, theta: &MonotoneMap) -> Result<MonotoneMap> {
        if theta.target_len() != self.source_len() {
            return invalid("composition of incompatible monotone maps");
        }
        MonotoneMap::new(self.n, theta.values.iter().map(|&t| self.values[t]).collect())
    }

    /// Pointwise order of `Fun([k],[n])`.
    pub fn le(&self, other: &MonotoneMap) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// All monotone maps `[k] → [n]` in lexicographic order.
pub fn monotone_maps(k: usize, n: usize) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k + 1];
    loop {
        out.push(MonotoneMap { n, values: cur.clone() });
        let mut i = k + 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                for j in i + 1..=k {
                    cur[j] = cur[i];
                }
                break;
            }
        }
    }
}

pub fn simplex_faces(beta: &MonotoneMap) -> Vec<MonotoneMap> {
    beta.faces()
}

pub fn simplex_degeneracies(beta: &MonotoneMap) -> Vec<MonotoneMap> {
    beta.degeneracies()
}
