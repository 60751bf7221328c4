//! Diagonalization of small matrices over `ℤ` and prime fields by invertible row and column
//! operations, with the kernels, cokernels and solutions it yields.

use super::matrix::Mor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Ring {
    Z,
    Fq(i64),
}

impl Ring {
    fn norm(self, x: i64) -> i64 {
        match self {
            Ring::Z => x,
            Ring::Fq(q) => x.rem_euclid(q),
        }
    }
}

pub(crate) fn inv_mod(a: i64, q: i64) -> i64 {
    // q prime: a^(q−2)
    let (mut base, mut e, mut acc) = (a.rem_euclid(q), q - 2, 1i64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// `p · m · q = diag(d)` with `p`, `q` invertible over the ring; over `ℤ` the diagonal is
/// positive but not necessarily in divisibility order (only units and rank are consumed).
#[derive(Clone, Debug)]
pub(crate) struct Diag {
    pub p: Mor,
    pub d: Vec<i64>,
    pub q: Mor,
    pub rank: usize,
}

impl Diag {
    pub fn all_units(&self) -> bool {
        self.d.iter().all(|&x| x == 1)
    }
}

struct Work {
    a: Vec<Vec<i64>>,
    p: Vec<Vec<i64>>,
    q: Vec<Vec<i64>>,
    ring: Ring,
}

impl Work {
    fn row_axpy(&mut self, dst: usize, src: usize, f: i64) {
        let ring = self.ring;
        for m in [&mut self.a, &mut self.p] {
            for j in 0..m[0].len() {
                let v = m[dst][j] + f * m[src][j];
                m[dst][j] = ring.norm(v);
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, f: i64) {
        let ring = self.ring;
        for m in [&mut self.a, &mut self.q] {
            for row in m.iter_mut() {
                let v = row[dst] + f * row[src];
                row[dst] = ring.norm(v);
            }
        }
    }

    fn row_scale(&mut self, r: usize, f: i64) {
        let ring = self.ring;
        for m in [&mut self.a, &mut self.p] {
            for x in m[r].iter_mut() {
                *x = ring.norm(*x * f);
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.p.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for m in [&mut self.a, &mut self.q] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
    }
}

fn ident(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn to_mor(rows: usize, cols: usize, v: &[Vec<i64>]) -> Mor {
    Mor::from_fn(rows, cols, |i, j| v[i][j])
}

pub(crate) fn diagonalize(m: &Mor, ring: Ring) -> Diag {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        a: (0..r).map(|i| (0..c).map(|j| ring.norm(m.get(i, j))).collect()).collect(),
        p: ident(r),
        q: ident(c),
        ring,
    };
    let mut t = 0;
    while t < r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if w.a[i][j] != 0 && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let piv = w.a[t][t];
            let scale = match ring {
                Ring::Z => None,
                Ring::Fq(q) => Some(inv_mod(piv, q)),
            };
            let mut clean = true;
            for i in t + 1..r {
                if w.a[i][t] != 0 {
                    let f = match scale {
                        None => w.a[i][t] / piv,
                        Some(s) => w.a[i][t] * s,
                    };
                    w.row_axpy(i, t, -f);
                    clean &= w.a[i][t] == 0;
                }
            }
            for j in t + 1..c {
                if w.a[t][j] != 0 {
                    let f = match scale {
                        None => w.a[t][j] / piv,
                        Some(s) => w.a[t][j] * s,
                    };
                    w.col_axpy(j, t, -f);
                    clean &= w.a[t][j] == 0;
                }
            }
            if clean {
                break;
            }
            // a nonzero remainder is smaller than the pivot; move it into place
            let mut best = (t, t);
            for i in t + 1..r {
                if w.a[i][t] != 0 && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..c {
                if w.a[t][j] != 0 && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            w.swap_rows(t, best.0);
            w.swap_cols(t, best.1);
        }
        match ring {
            Ring::Z if w.a[t][t] < 0 => w.row_scale(t, -1),
            Ring::Fq(q) => {
                let s = inv_mod(w.a[t][t], q);
                w.row_scale(t, s);
            }
            _ => {}
        }
        t += 1;
    }
    let d = (0..t).map(|i| w.a[i][i]).collect();
    Diag { p: to_mor(r, r, &w.p), d, q: to_mor(c, c, &w.q), rank: t }
}

/// Columns spanning `{x : m x = 0}`, a direct summand of the source.
pub(crate) fn kernel_basis(m: &Mor, ring: Ring) -> Mor {
    let dg = diagonalize(m, ring);
    let cols: Vec<usize> = (dg.rank..m.cols()).collect();
    dg.q.select_cols(&cols)
}

/// A surjection from the target whose kernel is the saturation of the image of `m`.
pub(crate) fn cokernel_map(m: &Mor, ring: Ring) -> Mor {
    let dg = diagonalize(m, ring);
    let rows: Vec<usize> = (dg.rank..m.rows()).collect();
    dg.p.select_rows(&rows)
}

/// Some `x` with `a x = b`, if one exists over the ring.
pub(crate) fn solve(a: &Mor, b: &Mor, ring: Ring) -> Option<Mor> {
    assert_eq!(a.rows(), b.rows());
    let dg = diagonalize(a, ring);
    let pb = dg.p.mul(b).map_entries(|x| ring.norm(x));
    let mut y = Mor::zero(a.cols(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let v = pb.get(i, j);
            if i < dg.rank {
                let di = dg.d[i];
                if v % di != 0 {
                    return None;
                }
                y.set(i, j, v / di);
            } else if v != 0 {
                return None;
            }
        }
    }
    Some(dg.q.mul(&y).map_entries(|x| ring.norm(x)))
}
