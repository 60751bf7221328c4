//! Strict limits of finite categories over Segal posets.

use super::{CatFunctor, FinCategory};
use crate::error::{Error, Result};

/// The intersection of maximal elements `a` and `b`: its cell and both restriction functors.
pub struct Overlap<'a> {
    pub a: usize,
    pub b: usize,
    pub cell: &'a FinCategory,
    pub from_a: &'a CatFunctor,
    pub from_b: &'a CatFunctor,
}

/// A strict limit together with the component tuple behind every object and morphism.
pub struct Limit {
    pub category: FinCategory,
    pub object_tuples: Vec<Vec<usize>>,
    pub morphism_tuples: Vec<Vec<usize>>,
}

/// The strict limit: families over the maximal elements agreeing after restriction to every
/// pairwise intersection, with componentwise morphisms. Agreement on pairwise intersections
/// suffices since every element lies below a maximal one.
pub fn limit_over_poset(maximal: &[&FinCategory], overlaps: &[Overlap<'_>]) -> Result<Limit> {
    for o in overlaps {
        if o.a >= maximal.len() || o.b >= maximal.len() {
            return Err(Error::InvalidInput(format!("overlap ({}, {}) out of range", o.a, o.b)));
        }
        o.from_a.validate(maximal[o.a], o.cell)?;
        o.from_b.validate(maximal[o.b], o.cell)?;
    }
    let k = maximal.len();
    let compatible = |tuple: &[usize], on: fn(&CatFunctor) -> &Vec<usize>| {
        overlaps.iter().all(|o| o.a.max(o.b) >= tuple.len() || on(o.from_a)[tuple[o.a]] == on(o.from_b)[tuple[o.b]])
    };
    let mut objects: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(k);
    extend(
        &mut cur,
        k,
        &|i| (0..maximal[i].num_objects()).collect(),
        &|t| compatible(t, |f| &f.on_objects),
        &mut objects,
    );
    let hom = |x: &Vec<usize>, y: &Vec<usize>| {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        extend(
            &mut cur,
            k,
            &|i| maximal[i].hom(x[i], y[i]).to_vec(),
            &|t| compatible(t, |f| &f.on_morphisms),
            &mut out,
        );
        out
    };
    let (category, morphism_tuples) = FinCategory::from_concrete_with_values(
        &objects,
        hom,
        |g: &Vec<usize>, f: &Vec<usize>| (0..k).map(|i| maximal[i].compose(g[i], f[i])).collect(),
        |x| (0..k).map(|i| maximal[i].identity(x[i])).collect(),
    )?;
    Ok(Limit { category, object_tuples: objects, morphism_tuples })
}

fn extend(
    cur: &mut Vec<usize>,
    k: usize,
    choices: &dyn Fn(usize) -> Vec<usize>,
    ok: &dyn Fn(&[usize]) -> bool,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for c in choices(cur.len()) {
        cur.push(c);
        if ok(cur) {
            extend(cur, k, choices, ok, out);
        }
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::f1_upto;
    use super::*;

    #[test]
    fn single_maximal_element() {
        let c = f1_upto(2);
        let l = limit_over_poset(&[&c], &[]).unwrap().category;
        assert_eq!((l.num_objects(), l.num_morphisms()), (c.num_objects(), c.num_morphisms()));
    }

    #[test]
    fn disjoint_pair_over_terminal_is_product() {
        let c = f1_upto(1);
        let t = FinCategory::terminal();
        let to_t = CatFunctor { on_objects: vec![0; c.num_objects()], on_morphisms: vec![0; c.num_morphisms()] };
        let o = Overlap { a: 0, b: 1, cell: &t, from_a: &to_t, from_b: &to_t };
        let l = limit_over_poset(&[&c, &c], &[o]).unwrap().category;
        assert_eq!(l.num_objects(), c.num_objects().pow(2));
        assert_eq!(l.num_morphisms(), c.num_morphisms().pow(2));
        l.validate().unwrap();
    }
}
