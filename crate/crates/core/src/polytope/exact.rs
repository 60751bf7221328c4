//! Exact arithmetic helpers: moment-curve points, rational elimination and a small
//! Fourier–Motzkin feasibility decider.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rat = BigRational;

/// A point `(t, t², …, t^d)` on the moment curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentPoint {
    pub t: i64,
    pub coords: Vec<BigInt>,
}

impl Serialize for MomentPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

pub fn moment_point(t: i64, d: usize) -> MomentPoint {
    let base = BigInt::from(t);
    let mut coords = Vec::with_capacity(d);
    let mut acc = BigInt::one();
    for _ in 0..d {
        acc *= &base;
        coords.push(acc.clone());
    }
    MomentPoint { t, coords }
}

pub fn rat(v: &BigInt) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn rat_i(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Solves the square system `a x = b` over the rationals; `None` when singular.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let v = &a[col][j] * &f;
                    a[r][j] = &a[r][j] - v;
                }
                let v = &b[col] * &f;
                b[r] = &b[r] - v;
            }
        }
    }
    Some(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    /// `a·x = b`
    Eq,
    /// `a·x ≥ b`
    Ge,
    /// `a·x > b`
    Gt,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Rel, rhs: Rat) -> Self {
        Self { coeffs, rel, rhs }
    }
}

/// Decides feasibility of a finite system of linear (in)equalities over the rationals.
///
/// Equalities are eliminated by substitution first; the remaining inequalities are
/// projected out one variable at a time, tracking strictness.
pub fn feasible(nvars: usize, constraints: &[Constraint]) -> bool {
    let mut cons: Vec<Constraint> = constraints.to_vec();
    let mut alive: Vec<bool> = vec![true; nvars];
    // substitute equalities
    loop {
        let pos = cons.iter().position(|c| c.rel == Rel::Eq && c.coeffs.iter().any(|x| !x.is_zero()));
        let Some(pos) = pos else { break };
        let eq = cons.remove(pos);
        let var = eq.coeffs.iter().position(|x| !x.is_zero()).unwrap();
        let pivot = eq.coeffs[var].clone();
        for c in cons.iter_mut() {
            if c.coeffs[var].is_zero() {
                continue;
            }
            let f = &c.coeffs[var] / &pivot;
            for j in 0..nvars {
                let v = &eq.coeffs[j] * &f;
                c.coeffs[j] = &c.coeffs[j] - v;
            }
            let v = &eq.rhs * &f;
            c.rhs = &c.rhs - v;
        }
        alive[var] = false;
    }
    for c in &cons {
        if c.rel == Rel::Eq && !c.rhs.is_zero() {
            return false;
        }
    }
    let mut ineqs: Vec<Constraint> = cons.into_iter().filter(|c| c.rel != Rel::Eq).collect();
    for var in 0..nvars {
        if !alive[var] {
            continue;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in ineqs {
            if c.coeffs[var].is_positive() {
                pos.push(c);
            } else if c.coeffs[var].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                // scale so the coefficients of `var` cancel
                let fp = q.coeffs[var].abs();
                let fq = p.coeffs[var].abs();
                let coeffs: Vec<Rat> = (0..nvars).map(|j| &p.coeffs[j] * &fp + &q.coeffs[j] * &fq).collect();
                let rhs = &p.rhs * &fp + &q.rhs * &fq;
                let rel = if p.rel == Rel::Gt || q.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
                rest.push(Constraint { coeffs, rel, rhs });
            }
        }
        ineqs = rest;
    }
    ineqs.iter().all(|c| match c.rel {
        Rel::Ge => !c.rhs.is_positive(),
        Rel::Gt => c.rhs.is_negative(),
        Rel::Eq => c.rhs.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn moment_points() {
        assert_eq!(moment_point(2, 3).coords, vec![bi(2), bi(4), bi(8)]);
        assert_eq!(moment_point(0, 4).coords, vec![bi(0); 4]);
        assert_eq!(moment_point(-1, 3).coords, vec![bi(-1), bi(1), bi(-1)]);
        assert_eq!(moment_point(7, 20).coords[19], bi(7).pow(20));
    }

    #[test]
    fn determinants() {
        assert_eq!(det(vec![vec![bi(2), bi(1)], vec![bi(1), bi(3)]]), bi(5));
        assert_eq!(det(vec![vec![bi(0), bi(1)], vec![bi(1), bi(0)]]), bi(-1));
        // Vandermonde on 0,1,2,3
        let m: Vec<Vec<BigInt>> = (0..4).map(|t| (0..4).map(|e| bi(t).pow(e)).collect()).collect();
        assert_eq!(det(m), bi(12));
    }

    #[test]
    fn fourier_motzkin_basics() {
        // x >= 1, x <= 0 infeasible
        let c = vec![
            Constraint::new(vec![rat_i(1)], Rel::Ge, rat_i(1)),
            Constraint::new(vec![rat_i(-1)], Rel::Ge, rat_i(0)),
        ];
        assert!(!feasible(1, &c));
        // x >= 0, x <= 0 feasible, but x > 0, x <= 0 not
        let c = vec![
            Constraint::new(vec![rat_i(1)], Rel::Ge, rat_i(0)),
            Constraint::new(vec![rat_i(-1)], Rel::Ge, rat_i(0)),
        ];
        assert!(feasible(1, &c));
        let c = vec![
            Constraint::new(vec![rat_i(1)], Rel::Gt, rat_i(0)),
            Constraint::new(vec![rat_i(-1)], Rel::Ge, rat_i(0)),
        ];
        assert!(!feasible(1, &c));
        // x + y = 1, x,y >= 0, x - y > 2 infeasible
        let c = vec![
            Constraint::new(vec![rat_i(1), rat_i(1)], Rel::Eq, rat_i(1)),
            Constraint::new(vec![rat_i(1), rat_i(0)], Rel::Ge, rat_i(0)),
            Constraint::new(vec![rat_i(0), rat_i(1)], Rel::Ge, rat_i(0)),
            Constraint::new(vec![rat_i(1), rat_i(-1)], Rel::Gt, rat_i(2)),
        ];
        assert!(!feasible(2, &c));
    }
}
