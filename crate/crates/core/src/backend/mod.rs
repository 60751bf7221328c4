//! Concrete proto-exact categories with decidable admissibility.
//!
//! Objects are skeletal and encoded by their size (number of non-base points, dimension or
//! rank); every morphism is a [`Mor`] matrix from the source size to the target size. For
//! `𝔽₁` the matrices are partial permutation matrices, i.e. partial injections.

mod lemmas;
mod linalg;
mod matrix;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use linalg::{cokernel_map, diagonalize, kernel_basis, solve, Ring};

pub use lemmas::{
    check_proto_exact_axioms, factor_admissible, induced_coim_to_im, is_short_exact, mono_pullback_coker,
    nine_from_subobjects, nine_lemma_check, pullback_of_mono, pushout_of_epi, random_pullback_square,
    sequence_classify, snake_sequence, stringency_probe, verify_cokernel, verify_kernel, AcyclicFailure, AxiomReport,
    NineDiagram, PullbackSquare, SequenceClass,
};
pub use matrix::{Mor, MAX_SIZE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Finite pointed sets with partial injections.
    F1,
    /// Finite-dimensional vector spaces over the prime field `𝔽_q`.
    Fq(u8),
    /// Finitely generated free abelian groups; admissible monos are split injections and
    /// admissible epis are surjections.
    FreeAb,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::F1 => write!(f, "f1"),
            Backend::Fq(q) => write!(f, "fq:{q}"),
            Backend::FreeAb => write!(f, "freeab"),
        }
    }
}

impl Serialize for Backend {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "f1" => Ok(Backend::F1),
            "freeab" => Ok(Backend::FreeAb),
            "fq" => Ok(Backend::Fq(2)),
            _ if s.starts_with("fq:") => {
                let q: u8 = s[3..].parse().map_err(|_| Error::InvalidArguments(format!("bad field size in {s:?}")))?;
                if q < 2 || (2..q).any(|p| q.is_multiple_of(p)) || q > 7 {
                    return Err(Error::InvalidArguments(format!("fq needs a prime q <= 7, got {q}")));
                }
                Ok(Backend::Fq(q))
            }
            _ if s.starts_with("nil:") => Err(Error::InvalidArguments(format!(
                "backend {s:?} (free F_q[x]/(x^2)-modules) is optional and not built"
            ))),
            _ => Err(Error::InvalidArguments(format!("unknown backend {s:?}; expected f1, fq:<q>, freeab"))),
        }
    }
}

impl Backend {
    fn ring(self) -> Ring {
        match self {
            Backend::Fq(q) => Ring::Fq(q as i64),
            _ => Ring::Z,
        }
    }

    /// Whether hom-sets are finite (and therefore enumerable).
    pub fn is_finite(self) -> bool {
        !matches!(self, Backend::FreeAb)
    }

    pub fn reduce(self, m: Mor) -> Mor {
        match self {
            Backend::Fq(q) => m.map_entries(|x| x.rem_euclid(q as i64)),
            _ => m,
        }
    }

    pub fn identity(self, n: usize) -> Mor {
        Mor::identity(n)
    }

    pub fn zero(self, src: usize, dst: usize) -> Mor {
        Mor::zero(dst, src)
    }

    /// `g ∘ f`.
    pub fn compose(self, g: &Mor, f: &Mor) -> Mor {
        self.reduce(g.mul(f))
    }

    pub fn is_morphism(self, m: &Mor) -> bool {
        match self {
            Backend::F1 => {
                let entries_ok = (0..m.rows()).all(|i| (0..m.cols()).all(|j| matches!(m.get(i, j), 0 | 1)));
                let rows_ok = (0..m.rows()).all(|i| m.row(i).iter().sum::<i64>() <= 1);
                let cols_ok = (0..m.cols()).all(|j| (0..m.rows()).map(|i| m.get(i, j)).sum::<i64>() <= 1);
                entries_ok && rows_ok && cols_ok
            }
            Backend::Fq(q) => (0..m.rows()).all(|i| (0..m.cols()).all(|j| (0..q as i64).contains(&m.get(i, j)))),
            Backend::FreeAb => true,
        }
    }

    /// All morphisms `src → dst` in a fixed canonical order; `None` for infinite hom-sets.
    pub fn homs(self, src: usize, dst: usize) -> Option<Vec<Mor>> {
        match self {
            Backend::FreeAb => None,
            _ => Some(self.homs_bounded(src, dst, 0)),
        }
    }

    /// Like [`Backend::homs`], but for `FreeAb` enumerates matrices with entries in
    /// `[-entry_bound, entry_bound]`, ordered by absolute value with positive entries first.
    pub fn homs_bounded(self, src: usize, dst: usize, entry_bound: i64) -> Vec<Mor> {
        match self {
            Backend::F1 => {
                let mut out = Vec::new();
                let mut used = vec![false; dst];
                let mut img = vec![None; src];
                partial_injections(0, &mut img, &mut used, &mut out, dst);
                out
            }
            Backend::Fq(q) => matrices(src, dst, &(0..q as i64).collect::<Vec<_>>()),
            Backend::FreeAb => {
                let mut vals = vec![0];
                for v in 1..=entry_bound {
                    vals.push(v);
                    vals.push(-v);
                }
                matrices(src, dst, &vals)
            }
        }
    }

    pub fn automorphisms(self, n: usize) -> Option<Vec<Mor>> {
        match self {
            Backend::FreeAb => None,
            _ => Some(self.homs(n, n)?.into_iter().filter(|m| self.is_iso(m)).collect()),
        }
    }

    pub fn rank(self, m: &Mor) -> usize {
        match self {
            Backend::F1 => (0..m.rows()).filter(|&i| m.row(i).contains(&1)).count(),
            _ => diagonalize(m, self.ring()).rank,
        }
    }

    pub fn is_iso(self, m: &Mor) -> bool {
        m.rows() == m.cols() && self.is_adm_mono(m) && self.is_adm_epi(m)
    }

    pub fn inverse(self, m: &Mor) -> Option<Mor> {
        if !self.is_iso(m) {
            return None;
        }
        match self {
            Backend::F1 => Some(m.transpose()),
            _ => solve(m, &Mor::identity(m.rows()), self.ring()),
        }
    }

    pub fn is_adm_mono(self, m: &Mor) -> bool {
        match self {
            Backend::F1 => (0..m.cols()).all(|j| (0..m.rows()).any(|i| m.get(i, j) == 1)),
            _ => {
                let dg = diagonalize(m, self.ring());
                dg.rank == m.cols() && dg.all_units()
            }
        }
    }

    pub fn is_adm_epi(self, m: &Mor) -> bool {
        match self {
            Backend::F1 => (0..m.rows()).all(|i| m.row(i).contains(&1)),
            _ => {
                let dg = diagonalize(m, self.ring());
                dg.rank == m.rows() && dg.all_units()
            }
        }
    }

    /// Kernel inclusion `K → src`. Always exists in the shipped backends.
    pub fn kernel(self, m: &Mor) -> Option<Mor> {
        match self {
            Backend::F1 => {
                let ks: Vec<usize> = (0..m.cols()).filter(|&j| (0..m.rows()).all(|i| m.get(i, j) == 0)).collect();
                Some(Mor::from_fn(m.cols(), ks.len(), |i, j| i64::from(ks[j] == i)))
            }
            _ => Some(self.reduce(kernel_basis(m, self.ring()))),
        }
    }

    /// Cokernel projection `dst → Q`. Over `FreeAb` this is the quotient by the saturation of
    /// the image, the cokernel inside the category of free groups.
    pub fn cokernel(self, m: &Mor) -> Option<Mor> {
        match self {
            Backend::F1 => {
                let qs: Vec<usize> = (0..m.rows()).filter(|&i| !m.row(i).contains(&1)).collect();
                Some(Mor::from_fn(qs.len(), m.rows(), |i, j| i64::from(qs[i] == j)))
            }
            _ => Some(self.reduce(cokernel_map(m, self.ring()))),
        }
    }

    /// The `h` with `mono ∘ h = g`, if `g` factors through `mono`.
    pub fn lift_through_mono(self, mono: &Mor, g: &Mor) -> Option<Mor> {
        assert_eq!(mono.rows(), g.rows());
        let h = match self {
            Backend::F1 => {
                let mut h = Mor::zero(mono.cols(), g.cols());
                for j in 0..g.cols() {
                    if let Some(i) = (0..g.rows()).find(|&i| g.get(i, j) == 1) {
                        let c = (0..mono.cols()).find(|&c| mono.get(i, c) == 1)?;
                        h.set(c, j, 1);
                    }
                }
                h
            }
            _ => solve(mono, g, self.ring())?,
        };
        (self.is_morphism(&h) && self.compose(mono, &h) == *g).then_some(h)
    }

    /// The `h` with `h ∘ epi = g`, if `g` factors through `epi`.
    pub fn descend_through_epi(self, epi: &Mor, g: &Mor) -> Option<Mor> {
        assert_eq!(epi.cols(), g.cols());
        let h = match self {
            Backend::F1 => {
                let mut h = Mor::zero(g.rows(), epi.rows());
                for j in 0..epi.cols() {
                    let gi = (0..g.rows()).find(|&i| g.get(i, j) == 1);
                    match (0..epi.rows()).find(|&d| epi.get(d, j) == 1) {
                        Some(d) => {
                            if let Some(i) = gi {
                                h.set(i, d, 1);
                            }
                        }
                        None if gi.is_some() => return None,
                        None => {}
                    }
                }
                h
            }
            _ => solve(&epi.transpose(), &g.transpose(), self.ring())?.transpose(),
        };
        (self.is_morphism(&h) && self.compose(&h, epi) == *g).then_some(h)
    }

    /// The same matrix read in the opposite category; every shipped backend is self-dual.
    pub fn transpose(self, m: &Mor) -> Mor {
        m.transpose()
    }

    /// Points of an object of size `n` as column vectors: the basepoint is the zero vector.
    /// `None` for infinite objects.
    pub fn elements(self, n: usize) -> Option<Vec<Mor>> {
        match self {
            Backend::F1 => {
                let mut v = vec![Mor::zero(n, 1)];
                v.extend((0..n).map(|i| Mor::from_fn(n, 1, |r, _| i64::from(r == i))));
                Some(v)
            }
            Backend::Fq(q) => Some(matrices(1, n, &(0..q as i64).collect::<Vec<_>>())),
            Backend::FreeAb => None,
        }
    }

    /// Morphism JSON: image arrays for `𝔽₁` (null = basepoint), matrices otherwise.
    pub fn mor_json(self, m: &Mor) -> serde_json::Value {
        match self {
            Backend::F1 => serde_json::Value::Array(
                (0..m.cols())
                    .map(|j| match (0..m.rows()).find(|&i| m.get(i, j) == 1) {
                        Some(i) => serde_json::Value::from(i),
                        None => serde_json::Value::Null,
                    })
                    .collect(),
            ),
            _ => serde_json::to_value(m.to_rows()).expect("matrix serializes"),
        }
    }
}

fn partial_injections(j: usize, img: &mut Vec<Option<usize>>, used: &mut [bool], out: &mut Vec<Mor>, dst: usize) {
    if j == img.len() {
        let mut m = Mor::zero(dst, img.len());
        for (c, r) in img.iter().enumerate() {
            if let Some(r) = r {
                m.set(*r, c, 1);
            }
        }
        out.push(m);
        return;
    }
    img[j] = None;
    partial_injections(j + 1, img, used, out, dst);
    for r in 0..dst {
        if !used[r] {
            used[r] = true;
            img[j] = Some(r);
            partial_injections(j + 1, img, used, out, dst);
            used[r] = false;
        }
    }
    img[j] = None;
}

fn matrices(src: usize, dst: usize, vals: &[i64]) -> Vec<Mor> {
    let cells = src * dst;
    let total = vals.len().pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut m = Mor::zero(dst, src);
            for cell in 0..cells {
                m.set(cell / src.max(1), cell % src.max(1), vals[code % vals.len()]);
                code /= vals.len();
            }
            m
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Backend; 4] = [Backend::F1, Backend::Fq(2), Backend::Fq(3), Backend::FreeAb];

    #[test]
    fn parsing() {
        assert_eq!("f1".parse::<Backend>().unwrap(), Backend::F1);
        assert_eq!("fq:3".parse::<Backend>().unwrap(), Backend::Fq(3));
        assert_eq!("freeab".parse::<Backend>().unwrap(), Backend::FreeAb);
        assert!("fq:4".parse::<Backend>().is_err());
        assert!("nil:2".parse::<Backend>().is_err());
        for b in ALL {
            assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
        }
    }

    #[test]
    fn hom_counts() {
        // partial injections 2 → 2: 1 + 4 + 2
        assert_eq!(Backend::F1.homs(2, 2).unwrap().len(), 7);
        assert_eq!(Backend::F1.homs(3, 2).unwrap().len(), 1 + 6 + 6);
        assert_eq!(Backend::Fq(2).homs(2, 2).unwrap().len(), 16);
        assert_eq!(Backend::F1.automorphisms(3).unwrap().len(), 6);
        assert_eq!(Backend::Fq(2).automorphisms(2).unwrap().len(), 6);
        assert_eq!(Backend::Fq(3).automorphisms(2).unwrap().len(), 48);
        assert_eq!(Backend::F1.homs(0, 3).unwrap().len(), 1);
        assert_eq!(Backend::Fq(2).homs(2, 0).unwrap().len(), 1);
        assert!(Backend::FreeAb.homs(1, 1).is_none());
        let h = Backend::FreeAb.homs_bounded(1, 1, 2);
        assert_eq!(h.iter().map(|m| m.get(0, 0)).collect::<Vec<_>>(), vec![0, 1, -1, 2, -2]);
    }

    #[test]
    fn f1_kernel_and_cokernel() {
        // {*,a,b} → {*,c}: a ↦ c, b ↦ *
        let f = Mor::from_rows(2, &[vec![1, 0]]);
        let k = Backend::F1.kernel(&f).unwrap();
        assert_eq!(k, Mor::from_rows(1, &[vec![0], vec![1]]));
        let c = Backend::F1.cokernel(&f).unwrap();
        assert_eq!((c.rows(), c.cols()), (0, 1));
    }

    #[test]
    fn freeab_times_two() {
        let f = Mor::from_rows(1, &[vec![2]]);
        let b = Backend::FreeAb;
        assert_eq!(b.kernel(&f).unwrap().cols(), 0);
        assert_eq!(b.cokernel(&f).unwrap().rows(), 0);
        assert!(!b.is_adm_mono(&f));
        assert!(!b.is_adm_epi(&f));
        assert!(b.is_adm_mono(&Mor::from_rows(1, &[vec![1], vec![2]])));
        assert!(!b.is_adm_mono(&Mor::from_rows(1, &[vec![2], vec![4]])));
    }

    #[test]
    fn f2_kernel_of_a_row() {
        let f = Mor::from_rows(2, &[vec![1, 0]]);
        let b = Backend::Fq(2);
        assert_eq!(b.kernel(&f).unwrap(), Mor::from_rows(1, &[vec![0], vec![1]]));
        assert_eq!(b.cokernel(&f).unwrap().rows(), 0);
    }

    #[test]
    fn inverses_and_lifts() {
        for b in [Backend::F1, Backend::Fq(2), Backend::Fq(3)] {
            for g in b.automorphisms(2).unwrap() {
                let inv = b.inverse(&g).unwrap();
                assert_eq!(b.compose(&g, &inv), Mor::identity(2));
            }
            for m in b.homs(1, 2).unwrap().into_iter().filter(|m| b.is_adm_mono(m)) {
                for g in b.homs(2, 2).unwrap() {
                    let h = b.homs(2, 1).unwrap().into_iter().find(|h| b.compose(&m, h) == g);
                    assert_eq!(b.lift_through_mono(&m, &g), h);
                }
            }
            for e in b.homs(2, 1).unwrap().into_iter().filter(|m| b.is_adm_epi(m)) {
                for g in b.homs(2, 2).unwrap() {
                    let h = b.homs(1, 2).unwrap().into_iter().find(|h| b.compose(h, &e) == g);
                    assert_eq!(b.descend_through_epi(&e, &g), h);
                }
            }
        }
    }

    #[test]
    fn elements_are_points() {
        assert_eq!(Backend::F1.elements(3).unwrap().len(), 4);
        assert_eq!(Backend::Fq(3).elements(2).unwrap().len(), 9);
        assert!(Backend::FreeAb.elements(1).is_none());
    }
}
