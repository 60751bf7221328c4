//! Index shapes: the poset `Fun([k],[N])`, and unions `⋃_P Fun([k],P)` over a family of
//! subsets glued along their intersections, presented by Hasse arrows and path equations.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::backend::SequenceClass;
use crate::combinatorics::SubsetOfN;
use crate::error::{Error, Result};

/// Values of a monotone map `[k] → [N]`.
pub type Key = Vec<u8>;

/// Which exactness the `(k+1)`-simplex sequences of a cell must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Acyclic,
    LeftExact,
    RightExact,
    Exact,
}

impl Variant {
    pub fn needs_left(self) -> bool {
        matches!(self, Variant::LeftExact | Variant::Exact)
    }

    pub fn needs_right(self) -> bool {
        matches!(self, Variant::RightExact | Variant::Exact)
    }

    pub fn accepts(self, class: &SequenceClass) -> bool {
        class.is_acyclic()
            && (!self.needs_left() || class.is_left_exact())
            && (!self.needs_right() || class.is_right_exact())
    }

    /// The variant matched under the duality of `Δ`.
    pub fn dual(self) -> Variant {
        match self {
            Variant::LeftExact => Variant::RightExact,
            Variant::RightExact => Variant::LeftExact,
            v => v,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Acyclic => "acyclic",
            Variant::LeftExact => "left_exact",
            Variant::RightExact => "right_exact",
            Variant::Exact => "exact",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "acyclic" => Ok(Variant::Acyclic),
            "left_exact" | "left" => Ok(Variant::LeftExact),
            "right_exact" | "right" => Ok(Variant::RightExact),
            "exact" => Ok(Variant::Exact),
            _ => Err(Error::InvalidArguments(format!("unknown variant {s:?}"))),
        }
    }
}

/// The sequence `A_{d_{k+1}γ} → … → A_{d_0γ}` of an injective `γ: [k+1] → [N]`.
#[derive(Clone, Debug)]
pub struct SeqConstraint {
    pub gamma: Key,
    /// `nodes[t] = d_{k+1−t} γ`.
    pub nodes: Vec<usize>,
    /// `steps[t]`: arrow chain from `nodes[t]` to `nodes[t+1]`.
    pub steps: Vec<Vec<usize>>,
}

/// A finite poset category given by generators and relations, together with the sequences
/// a cell on it has to make exact.
#[derive(Clone, Debug)]
pub struct Shape {
    pub k: usize,
    pub ambient: usize,
    pub variant: Variant,
    pub pieces: Vec<SubsetOfN>,
    /// Sorted lexicographically, which extends the pointwise order.
    pub nodes: Vec<Key>,
    pub index: HashMap<Key, usize>,
    /// Non-injective nodes carry the zero object.
    pub zero: Vec<bool>,
    /// Hasse arrows `(src, dst)`; `src < dst` in node order.
    pub arrows: Vec<(usize, usize)>,
    pub arrow_index: HashMap<(usize, usize), usize>,
    pub in_arrows: Vec<Vec<usize>>,
    pub out_arrows: Vec<Vec<usize>>,
    /// Path equations between arrow chains (first arrow first).
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
    pub sequences: Vec<SeqConstraint>,
}

fn piece_grid(k: usize, piece: &[usize]) -> Vec<Key> {
    let mut out = Vec::new();
    let mut cur: Key = Vec::with_capacity(k + 1);
    fn rec(k: usize, piece: &[usize], from: usize, cur: &mut Key, out: &mut Vec<Key>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for i in from..piece.len() {
            cur.push(piece[i] as u8);
            rec(k, piece, i, cur, out);
            cur.pop();
        }
    }
    rec(k, piece, 0, &mut cur, &mut out);
    out
}

fn next_in(piece: &[usize], v: u8) -> Option<u8> {
    piece.iter().find(|&&p| p as u8 > v).map(|&p| p as u8)
}

/// The one-step move of coordinate `i` to the next element of `piece`, if it stays monotone.
fn piece_step(piece: &[usize], beta: &Key, i: usize) -> Option<Key> {
    let w = next_in(piece, beta[i])?;
    if i + 1 < beta.len() && w > beta[i + 1] {
        return None;
    }
    let mut out = beta.clone();
    out[i] = w;
    Some(out)
}

pub fn is_injective(beta: &[u8]) -> bool {
    beta.windows(2).all(|w| w[0] < w[1])
}

impl Shape {
    /// The full grid `Fun([k],[n])`.
    pub fn grid(k: usize, n: usize, variant: Variant) -> Result<Shape> {
        Shape::union(k, n, &[SubsetOfN::full(n)], variant)
    }

    /// Diagrams on `⋃_P Fun([k],P)` agreeing on overlaps: the strict limit of the grids of
    /// the pieces.
    pub fn union(k: usize, ambient: usize, pieces: &[SubsetOfN], variant: Variant) -> Result<Shape> {
        if ambient > 250 || k > 8 {
            return Err(Error::InvalidArguments(format!("shape Fun([{k}],[{ambient}]) too large")));
        }
        if pieces.iter().any(|p| p.ambient() != ambient || p.is_empty()) {
            return Err(Error::InvalidArguments("pieces must be non-empty subsets of the ambient ordinal".into()));
        }
        let grids: Vec<Vec<Key>> = pieces.iter().map(|p| piece_grid(k, p.members())).collect();
        let all: BTreeSet<Key> = grids.iter().flatten().cloned().collect();
        let nodes: Vec<Key> = all.into_iter().collect();
        let index: HashMap<Key, usize> = nodes.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let zero = nodes.iter().map(|b| !is_injective(b)).collect();

        let mut arrows = Vec::new();
        let mut arrow_index = HashMap::new();
        let mut add_arrow = |s: usize, t: usize, arrows: &mut Vec<(usize, usize)>| -> usize {
            *arrow_index.entry((s, t)).or_insert_with(|| {
                arrows.push((s, t));
                arrows.len() - 1
            })
        };
        // chain moving coordinate i from u to the value `to` through the piece
        let chain = |piece: &[usize], u: &Key, i: usize, to: u8| -> Vec<(Key, Key)> {
            let mut out = Vec::new();
            let mut cur = u.clone();
            while cur[i] < to {
                let nxt = piece_step(piece, &cur, i).expect("chain stays in the piece grid");
                out.push((cur, nxt.clone()));
                cur = nxt;
            }
            out
        };
        let mut relations = Vec::new();
        let mut seqs: Vec<SeqConstraint> = Vec::new();
        let mut seen_gamma = BTreeSet::new();
        let to_arrows = |edges: &[(Key, Key)],
                         arrows: &mut Vec<(usize, usize)>,
                         add: &mut dyn FnMut(usize, usize, &mut Vec<(usize, usize)>) -> usize| {
            edges.iter().map(|(s, t)| add(index[s], index[t], arrows)).collect::<Vec<usize>>()
        };
        for (p, piece) in pieces.iter().enumerate() {
            let pm = piece.members();
            for beta in &grids[p] {
                for i in 0..=k {
                    if let Some(b1) = piece_step(pm, beta, i) {
                        add_arrow(index[beta], index[&b1], &mut arrows);
                    }
                }
            }
            // commuting squares of the piece grid
            for beta in &grids[p] {
                for i in 0..=k {
                    for j in i + 1..=k {
                        let (Some(bi), Some(bj)) = (piece_step(pm, beta, i), piece_step(pm, beta, j)) else {
                            continue;
                        };
                        let (Some(bij), Some(bji)) = (piece_step(pm, &bi, j), piece_step(pm, &bj, i)) else {
                            continue;
                        };
                        debug_assert_eq!(bij, bji);
                        let lhs =
                            to_arrows(&[(beta.clone(), bi.clone()), (bi, bij.clone())], &mut arrows, &mut add_arrow);
                        let rhs = to_arrows(&[(beta.clone(), bj.clone()), (bj, bji)], &mut arrows, &mut add_arrow);
                        relations.push((lhs, rhs));
                    }
                }
            }
            // (k+1)-simplex sequences
            let gammas = piece_grid(k + 1, pm).into_iter().filter(|g| is_injective(g));
            for gamma in gammas {
                if !seen_gamma.insert(gamma.clone()) {
                    continue;
                }
                let face = |j: usize| -> Key {
                    let mut f = gamma.clone();
                    f.remove(j);
                    f
                };
                let nodes_t: Vec<Key> = (0..=k + 1).rev().map(face).collect();
                let mut steps = Vec::new();
                for t in 0..=k {
                    let coord = k - t;
                    let edges = chain(pm, &nodes_t[t], coord, nodes_t[t + 1][coord]);
                    steps.push(to_arrows(&edges, &mut arrows, &mut add_arrow));
                }
                seqs.push(SeqConstraint { gamma, nodes: nodes_t.iter().map(|b| index[b]).collect(), steps });
            }
        }
        // overlaps: every Hasse arrow of an intersection grid is the same composite in both pieces
        for p in 0..pieces.len() {
            for q in p + 1..pieces.len() {
                let r = pieces[p].intersection(&pieces[q]);
                if r.is_empty() {
                    continue;
                }
                let rm = r.members();
                for u in piece_grid(k, rm) {
                    for i in 0..=k {
                        let Some(v) = piece_step(rm, &u, i) else {
                            continue;
                        };
                        let via_p = to_arrows(&chain(pieces[p].members(), &u, i, v[i]), &mut arrows, &mut add_arrow);
                        let via_q = to_arrows(&chain(pieces[q].members(), &u, i, v[i]), &mut arrows, &mut add_arrow);
                        if via_p != via_q {
                            relations.push((via_p, via_q));
                        }
                    }
                }
            }
        }
        relations.sort();
        relations.dedup();
        let mut in_arrows = vec![Vec::new(); nodes.len()];
        let mut out_arrows = vec![Vec::new(); nodes.len()];
        for (a, &(s, t)) in arrows.iter().enumerate() {
            out_arrows[s].push(a);
            in_arrows[t].push(a);
        }
        Ok(Shape {
            k,
            ambient,
            variant,
            pieces: pieces.to_vec(),
            nodes,
            index,
            zero,
            arrows,
            arrow_index,
            in_arrows,
            out_arrows,
            relations,
            sequences: seqs,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn node(&self, key: &[u8]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// A shortest arrow chain from `u` to `v`, if any (`Some(vec![])` when `u == v`).
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        if u == v {
            return Some(Vec::new());
        }
        let mut prev: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut queue = VecDeque::from([u]);
        let mut seen = vec![false; self.nodes.len()];
        seen[u] = true;
        while let Some(x) = queue.pop_front() {
            for &a in &self.out_arrows[x] {
                let y = self.arrows[a].1;
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some(a);
                    if y == v {
                        let mut chain = Vec::new();
                        let mut cur = v;
                        while cur != u {
                            let a = prev[cur].expect("bfs predecessor");
                            chain.push(a);
                            cur = self.arrows[a].0;
                        }
                        chain.reverse();
                        return Some(chain);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Whether `u ≤ v` pointwise (the order of the ambient grid).
    pub fn le(&self, u: usize, v: usize) -> bool {
        self.nodes[u].iter().zip(&self.nodes[v]).all(|(a, b)| a <= b)
    }

    pub fn key_string(&self, node: usize) -> String {
        self.nodes[node].iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn grid_counts() {
        for k in 0..=2 {
            for n in 0..=5 {
                let s = Shape::grid(k, n, Variant::Exact).unwrap();
                assert_eq!(s.num_nodes(), binom(n + k + 1, k + 1));
                assert_eq!(s.zero.iter().filter(|z| !**z).count(), binom(n + 1, k + 1));
                assert_eq!(s.sequences.len(), binom(n + 1, k + 2));
                for seq in &s.sequences {
                    assert_eq!(seq.nodes.len(), k + 2);
                    for (t, chain) in seq.steps.iter().enumerate() {
                        assert_eq!(s.arrows[chain[0]].0, seq.nodes[t]);
                        assert_eq!(s.arrows[*chain.last().unwrap()].1, seq.nodes[t + 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn union_overlap_equations() {
        // pieces {0,1,3} and {1,2,3} of [3]: nodes from both grids, overlap {1,3}
        let p = SubsetOfN::new(3, vec![0, 1, 3]).unwrap();
        let q = SubsetOfN::new(3, vec![1, 2, 3]).unwrap();
        let s = Shape::union(1, 3, &[p, q], Variant::Exact).unwrap();
        assert!(s.node(&[0, 2]).is_none());
        assert_eq!(s.zero.iter().filter(|z| !**z).count(), 5);
        // (1,1) → (1,3) is a Hasse arrow of {0,1,3} and a 2-step chain in {1,2,3}
        let u = s.node(&[1, 1]).unwrap();
        let v = s.node(&[1, 3]).unwrap();
        assert!(s.arrow_index.contains_key(&(u, v)));
        assert!(s.relations.iter().any(|(l, r)| l.len() + r.len() == 3 && (l.len() == 1 || r.len() == 1)));
        assert_eq!(s.path(u, v).unwrap().len(), 1);
    }
}
