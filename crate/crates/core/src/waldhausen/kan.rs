//! Inverses of the path-space forgetful functors by iterated kernels (and dually
//! cokernels), and the hyperplane functors lowering the dimension by one.

use super::cell::{dual_shape, dualize, validate, Diagram};
use super::equivalence::{path_space_functor, PathKind};
use super::shape::{is_injective, Key, Shape, Variant};
use crate::backend::{Backend, Mor};
use crate::error::{Error, Result};

fn require_grid(shape: &Shape, what: &str) -> Result<()> {
    let full = shape.pieces.len() == 1 && shape.pieces[0].members().len() == shape.ambient + 1;
    if full {
        Ok(())
    } else {
        Err(Error::InvalidArguments(format!("{what} needs a cell on a full grid")))
    }
}

fn construction_failure(what: &str, at: &[u8]) -> Error {
    Error::ConstructionFailure(format!("{what} at {}", at.iter().map(|v| v.to_string()).collect::<String>()))
}

/// How a node of the extended grid is built.
enum Source {
    Zero,
    /// `A_{β[..k]}` for `β_k = n+1`.
    Copy(usize),
    /// `ker(A_{d_k β} → A_{d_{k−1} β})`, with the inclusion into `A_{d_k β}`.
    Kernel(usize, Mor),
}

/// The right Kan extension along `Fun([k−1],[n]) → Fun([k],[n+1])`, `β ↦ (β, n+1)`: a
/// right exact cell becomes an exact cell, an acyclic cell a left exact one.
pub fn kan_extend_right(b: Backend, shape: &Shape, d: &Diagram) -> Result<(Shape, Diagram)> {
    require_grid(shape, "kan_extend_right")?;
    let out_variant = match shape.variant {
        Variant::RightExact => Variant::Exact,
        Variant::Acyclic => Variant::LeftExact,
        v => {
            return Err(Error::InvalidArguments(format!(
                "kan_extend_right takes right exact or acyclic cells, not {v}"
            )))
        }
    };
    let (k, n) = (shape.k + 1, shape.ambient);
    let top = (n + 1) as u8;
    let out = Shape::grid(k, n + 1, out_variant)?;
    let node = |key: &[u8]| shape.index[key];
    let sources: Vec<Source> = out
        .nodes
        .iter()
        .enumerate()
        .map(|(v, beta)| {
            if out.zero[v] {
                return Ok(Source::Zero);
            }
            if beta[k] == top {
                return Ok(Source::Copy(node(&beta[..k])));
            }
            let dk = node(&beta[..k]);
            let mut dk1: Key = beta[..k - 1].to_vec();
            dk1.push(beta[k]);
            let m = d.between(b, shape, dk, node(&dk1)).expect("grid path");
            let inc = b.kernel(&m).ok_or_else(|| construction_failure("kernel missing", beta))?;
            Ok(Source::Kernel(dk, inc))
        })
        .collect::<Result<_>>()?;
    let sizes: Vec<u8> = sources
        .iter()
        .map(|s| match s {
            Source::Zero => 0,
            Source::Copy(u) => d.sizes[*u],
            Source::Kernel(_, inc) => inc.cols() as u8,
        })
        .collect();
    let mut maps = Vec::with_capacity(out.num_arrows());
    for &(s, t) in &out.arrows {
        let m = match (&sources[s], &sources[t]) {
            (Source::Zero, _) | (_, Source::Zero) => b.zero(sizes[s] as usize, sizes[t] as usize),
            (Source::Copy(u), Source::Copy(w)) => d.between(b, shape, *u, *w).expect("grid path"),
            (Source::Kernel(u, inc), Source::Kernel(w, inc2)) => {
                let g = b.compose(&d.between(b, shape, *u, *w).expect("grid path"), inc);
                b.lift_through_mono(inc2, &g)
                    .ok_or_else(|| construction_failure("kernel map missing", &out.nodes[t]))?
            }
            (Source::Kernel(u, inc), Source::Copy(w)) => {
                b.compose(&d.between(b, shape, *u, *w).expect("grid path"), inc)
            }
            (Source::Copy(_), Source::Kernel(..)) => {
                unreachable!("last coordinate never decreases")
            }
        };
        maps.push(m);
    }
    let cell = Diagram { sizes, maps };
    validate(b, &out, &cell).map_err(|f| {
        Error::ConstructionFailure(format!(
            "extension is not a cell: {}",
            serde_json::to_string(&f).unwrap_or_default()
        ))
    })?;
    Ok((out, cell))
}

/// The left Kan extension along `β ↦ (0, β+1)`, dual to [`kan_extend_right`]: a left exact
/// cell becomes an exact cell, an acyclic cell a right exact one.
pub fn kan_extend_left(b: Backend, shape: &Shape, d: &Diagram) -> Result<(Shape, Diagram)> {
    let dual = dual_shape(shape)?;
    let dd = dualize(b, shape, &dual, d);
    let (ext, e) = kan_extend_right(b, &dual, &dd)?;
    let back = dual_shape(&ext)?;
    let out = dualize(b, &ext, &back, &e);
    Ok((back, out))
}

/// Restriction of an exact cell of level `n+1` (`n+2` for the double path space) to the
/// face of the path space: `A_{[0]⊕−}`, `A_{−⊕[0]}` or `A_{[0]⊕−⊕[0]}`.
pub fn forget_path(b: Backend, shape: &Shape, d: &Diagram, kind: PathKind) -> Result<(Shape, Diagram)> {
    require_grid(shape, "forget_path")?;
    let drop = if kind == PathKind::Double { 2 } else { 1 };
    if shape.ambient < drop {
        return Err(Error::InvalidArguments(format!("{kind:?} path space of a level-{} cell", shape.ambient)));
    }
    let f = path_space_functor(shape.k, shape.ambient - drop, kind)?;
    let out = f.apply(b, d);
    Ok((f.target, out))
}

/// `η◁_{lm}`, `β ↦ coker(A_{(β,l)} ↣ A_{(β,m)})` on `Fun([k−1],[l])` for a left exact cell
/// (`kind = Left`), or its dual `η▷_{lm}` for a right exact cell (`kind = Right`).
pub fn hyperplane_functor(
    b: Backend,
    shape: &Shape,
    d: &Diagram,
    l: usize,
    m: usize,
    kind: PathKind,
) -> Result<(Shape, Diagram)> {
    require_grid(shape, "hyperplane_functor")?;
    let k = shape.k;
    if !(1 <= k && k <= l && l < m && m <= shape.ambient) {
        return Err(Error::InvalidArguments(format!(
            "hyperplane functor needs 1 <= k <= l < m <= n, got k={k}, l={l}, m={m}, n={}",
            shape.ambient
        )));
    }
    match kind {
        PathKind::Left => {}
        PathKind::Right => {
            let dual = dual_shape(shape)?;
            let dd = dualize(b, shape, &dual, d);
            let (s, e) = hyperplane_functor(b, &dual, &dd, l, m, PathKind::Left)?;
            let back = dual_shape(&s)?;
            let out = dualize(b, &s, &back, &e);
            return Ok((back, out));
        }
        PathKind::Double => return Err(Error::InvalidArguments("hyperplane functors are left or right".into())),
    }
    let out_variant = match shape.variant {
        Variant::Exact => Variant::Exact,
        Variant::LeftExact => Variant::LeftExact,
        v => return Err(Error::InvalidArguments(format!("η◁ takes left exact cells, not {v}"))),
    };
    let out = Shape::grid(k - 1, l, out_variant)?;
    let append = |beta: &[u8], x: usize| -> usize {
        let mut key = beta.to_vec();
        key.push(x as u8);
        shape.index[&key]
    };
    // (A_{(β,m)} node, cokernel projection)
    let quotients: Vec<Option<(usize, Mor)>> = out
        .nodes
        .iter()
        .enumerate()
        .map(|(v, beta)| {
            if out.zero[v] || !is_injective(beta) {
                return Ok(None);
            }
            let (bl, bm) = (append(beta, l), append(beta, m));
            let mono = d.between(b, shape, bl, bm).expect("grid path");
            let q = b.cokernel(&mono).ok_or_else(|| construction_failure("cokernel missing", beta))?;
            Ok(Some((bm, q)))
        })
        .collect::<Result<_>>()?;
    let sizes: Vec<u8> = quotients.iter().map(|q| q.as_ref().map_or(0, |(_, p)| p.rows() as u8)).collect();
    let mut maps = Vec::with_capacity(out.num_arrows());
    for &(s, t) in &out.arrows {
        let m = match (&quotients[s], &quotients[t]) {
            (Some((u, p)), Some((w, p2))) => {
                let g = b.compose(p2, &d.between(b, shape, *u, *w).expect("grid path"));
                b.descend_through_epi(p, &g)
                    .ok_or_else(|| construction_failure("cokernel map missing", &out.nodes[s]))?
            }
            _ => b.zero(sizes[s] as usize, sizes[t] as usize),
        };
        maps.push(m);
    }
    let cell = Diagram { sizes, maps };
    validate(b, &out, &cell).map_err(|f| {
        Error::ConstructionFailure(format!(
            "hyperplane image is not a cell: {}",
            serde_json::to_string(&f).unwrap_or_default()
        ))
    })?;
    Ok((out, cell))
}
