//! Small dense integer matrices, the common encoding of morphisms in every backend.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest object size any backend admits; keeps morphisms `Copy` and allocation-free.
pub const MAX_SIZE: usize = 4;
const STRIDE: usize = MAX_SIZE;

/// A `rows × cols` integer matrix, read as a morphism from an object of size `cols` to one of
/// size `rows`. Entries outside the shape are always zero, so derived equality and ordering
/// are structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor {
    rows: u8,
    cols: u8,
    a: [i32; MAX_SIZE * MAX_SIZE],
}

impl Mor {
    pub fn zero(rows: usize, cols: usize) -> Mor {
        assert!(rows <= MAX_SIZE && cols <= MAX_SIZE, "object size exceeds {MAX_SIZE}");
        Mor { rows: rows as u8, cols: cols as u8, a: [0; MAX_SIZE * MAX_SIZE] }
    }

    pub fn identity(n: usize) -> Mor {
        let mut m = Mor::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Mor {
        let mut m = Mor::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from explicit rows; `cols` is needed when there are no rows.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Mor {
        Mor::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    /// Target size.
    pub fn rows(&self) -> usize {
        self.rows as usize
    }

    /// Source size.
    pub fn cols(&self) -> usize {
        self.cols as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * STRIDE + j] as i64
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * STRIDE + j] = i32::try_from(v).expect("matrix entry overflow");
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    /// Plain integer product `self · rhs`.
    pub fn mul(&self, rhs: &Mor) -> Mor {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in composition");
        let mut m = Mor::zero(self.rows(), rhs.cols());
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..rhs.cols() {
                    let v = m.get(i, j) + x * rhs.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Mor {
        Mor::from_fn(self.cols(), self.rows(), |i, j| self.get(j, i))
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        (0..self.cols()).map(|j| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows()).map(|i| self.row(i)).collect()
    }

    pub fn map_entries(&self, f: impl Fn(i64) -> i64) -> Mor {
        Mor::from_fn(self.rows(), self.cols(), |i, j| f(self.get(i, j)))
    }

    /// Columns `cs` of `self`, in order.
    pub fn select_cols(&self, cs: &[usize]) -> Mor {
        Mor::from_fn(self.rows(), cs.len(), |i, j| self.get(i, cs[j]))
    }

    /// Rows `rs` of `self`, in order.
    pub fn select_rows(&self, rs: &[usize]) -> Mor {
        Mor::from_fn(rs.len(), self.cols(), |i, j| self.get(rs[i], j))
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Mor) -> Mor {
        let (r, c) = (self.rows(), self.cols());
        Mor::from_fn(r + other.rows(), c + other.cols(), |i, j| match (i < r, j < c) {
            (true, true) => self.get(i, j),
            (false, false) => other.get(i - r, j - c),
            _ => 0,
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mor) -> Mor {
        assert_eq!(self.rows, other.rows);
        let c = self.cols();
        Mor::from_fn(self.rows(), c + other.cols(), |i, j| if j < c { self.get(i, j) } else { other.get(i, j - c) })
    }

    /// Vertical concatenation of `self` over `other`.
    pub fn vcat(&self, other: &Mor) -> Mor {
        assert_eq!(self.cols, other.cols);
        let r = self.rows();
        Mor::from_fn(r + other.rows(), self.cols(), |i, j| if i < r { self.get(i, j) } else { other.get(i - r, j) })
    }
}

impl fmt::Debug for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

#[derive(Serialize, Deserialize)]
struct MorRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
}

impl Serialize for Mor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MorRepr { rows: self.rows(), cols: self.cols(), entries: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MorRepr::deserialize(d)?;
        if r.rows > MAX_SIZE
            || r.cols > MAX_SIZE
            || r.entries.len() != r.rows
            || r.entries.iter().any(|x| x.len() != r.cols)
        {
            return Err(serde::de::Error::custom("malformed matrix"));
        }
        Ok(Mor::from_rows(r.cols, &r.entries))
    }
}
