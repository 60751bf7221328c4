//! Hall-algebra structure constants over `𝔽₁` and `𝔽_q`: `g^M_{N,L}` counts admissible
//! subobjects `A ↣ M` with `A ≅ N` and `M/A ≅ L`. Both backends are skeletal, so iso classes
//! are object sizes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::backend::{Backend, Mor, MAX_SIZE};
use crate::error::{Error, Result};
use crate::waldhausen::{face, find_iso, search, Problem, Shape, Tables, Variant};

fn finite(b: Backend) -> Result<()> {
    if b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArguments(format!("Hall numbers need finite hom-sets, not {b}")))
    }
}

fn in_range(sizes: &[usize]) -> Result<()> {
    match sizes.iter().find(|&&z| z > MAX_SIZE) {
        Some(z) => Err(Error::ResourceLimit(format!("object size {z} exceeds {MAX_SIZE}"))),
        None => Ok(()),
    }
}

/// `g^M_{N,L}` by enumerating admissible monos `N ↣ M` and collecting their images.
pub fn hall_number(b: Backend, m: usize, n: usize, l: usize) -> Result<u64> {
    finite(b)?;
    in_range(&[m, n, l])?;
    if n + l != m {
        return Ok(0);
    }
    let points = b.elements(n).expect("finite backend");
    let images: BTreeSet<BTreeSet<Mor>> = b
        .homs(n, m)
        .expect("finite backend")
        .iter()
        .filter(|i| b.is_adm_mono(i) && b.cokernel(i).is_some_and(|q| q.rows() == l))
        .map(|i| points.iter().map(|x| b.compose(i, x)).collect())
        .collect();
    Ok(images.len() as u64)
}

/// `g^M_{N,L}` as the number of objects `N ↣ M ↠ L` of `S⟨1⟩_2` in the fiber of
/// `d_1: S⟨1⟩_2 → S⟨1⟩_1` over `M`, up to isomorphisms that are the identity on `M`.
pub fn hall_number_via_fibers(b: Backend, m: usize, n: usize, l: usize) -> Result<u64> {
    finite(b)?;
    in_range(&[m, n, l])?;
    let shape = Shape::grid(1, 2, Variant::Exact)?;
    let t = Tables::new(b, m.max(n).max(l), 0)?;
    let node = |key: &[u8]| shape.node(key).expect("grid node");
    let mut p = Problem::free(&shape, t.bound);
    p.normalize = false;
    for (v, z) in [(node(&[0, 1]), n), (node(&[0, 2]), m), (node(&[1, 2]), l)] {
        p.fixed_sizes[v] = Some(z as u8);
    }
    let mut fixed = vec![false; shape.num_nodes()];
    fixed[node(&[0, 2])] = true;
    let mut reps = Vec::new();
    let mut failure = None;
    search(&p, &t, u64::MAX, &mut |d| {
        match face(b, &shape, d, 1) {
            Ok((_, f)) if f.sizes.iter().any(|&z| z as usize == m) => {
                if !reps.iter().any(|r| find_iso(&t, &shape, r, d, Some(&fixed)).is_some()) {
                    reps.push(d.clone());
                }
            }
            Ok(_) => failure = Some(Error::Internal("face d_1 does not return the middle object".into())),
            Err(e) => failure = Some(e),
        }
        failure.is_none()
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(reps.len() as u64),
    }
}

/// One structure constant `g^M_{N,L}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HallConstant {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallTable {
    pub backend: Backend,
    pub bound: usize,
    /// `(M, N, L) ↦ g^M_{N,L}`, nonzero entries only.
    #[serde(serialize_with = "constants_as_list")]
    pub constants: BTreeMap<(usize, usize, usize), u64>,
}

fn constants_as_list<S: serde::Serializer>(
    c: &BTreeMap<(usize, usize, usize), u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|(&(m, n, l), &count)| HallConstant { m, n, l, count }))
}

impl HallTable {
    pub fn build(b: Backend, bound: usize) -> Result<HallTable> {
        let mut constants = BTreeMap::new();
        for m in 0..=bound {
            for n in 0..=m {
                let c = hall_number(b, m, n, m - n)?;
                if c != 0 {
                    constants.insert((m, n, m - n), c);
                }
            }
        }
        Ok(HallTable { backend: b, bound, constants })
    }

    pub fn get(&self, m: usize, n: usize, l: usize) -> u64 {
        self.constants.get(&(m, n, l)).copied().unwrap_or(0)
    }

    /// Structure constants as CSV with header `M,N,L,count`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in self.constants.iter().map(|(&(m, n, l), &count)| HallConstant { m, n, l, count }) {
            w.serialize(HallCsvRow { M: c.m, N: c.n, L: c.l, count: c.count })
                .map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

#[allow(non_snake_case)]
#[derive(Serialize)]
struct HallCsvRow {
    M: usize,
    N: usize,
    L: usize,
    count: u64,
}

/// A failure of `Σ_M g^M_{N,L} g^X_{M,K} = Σ_M g^M_{L,K} g^X_{N,M}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityViolation {
    pub n: usize,
    pub l: usize,
    pub k: usize,
    pub x: usize,
    pub left: u64,
    pub right: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssociativityReport {
    pub table: HallTable,
    /// `([N]·[L])·[K]` and `[N]·([L]·[K])` coefficients of `[X]`, keyed `(N, L, K, X)`.
    #[serde(serialize_with = "convolutions_as_list")]
    pub convolutions: BTreeMap<(usize, usize, usize, usize), (u64, u64)>,
    pub violations: Vec<AssociativityViolation>,
    pub associative: bool,
}

fn convolutions_as_list<S: serde::Serializer>(
    c: &BTreeMap<(usize, usize, usize, usize), (u64, u64)>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|(&(n, l, k, x), &(left, right))| {
        serde_json::json!({ "N": n, "L": l, "K": k, "X": x, "left": left, "right": right })
    }))
}

/// Checks associativity of the convolution given by `table` on all classes within its bound.
pub fn associativity_of(table: &HallTable) -> AssociativityReport {
    let bound = table.bound;
    let mut convolutions = BTreeMap::new();
    let mut violations = Vec::new();
    for x in 0..=bound {
        for n in 0..=x {
            for l in 0..=x - n {
                let k = x - n - l;
                let left: u64 = (0..=bound).map(|m| table.get(m, n, l) * table.get(x, m, k)).sum();
                let right: u64 = (0..=bound).map(|m| table.get(m, l, k) * table.get(x, n, m)).sum();
                convolutions.insert((n, l, k, x), (left, right));
                if left != right {
                    violations.push(AssociativityViolation { n, l, k, x, left, right });
                }
            }
        }
    }
    let associative = violations.is_empty();
    AssociativityReport { table: table.clone(), convolutions, violations, associative }
}

pub fn associativity_check(b: Backend, bound: usize) -> Result<AssociativityReport> {
    Ok(associativity_of(&HallTable::build(b, bound)?))
}
