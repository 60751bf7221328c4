//! Explicit finite categories and functors with composition tables, for small materialized
//! levels and as an independent cross-check of the diagram engine.

mod equivalence;
mod limit;
mod simplicial;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

pub use equivalence::{has_inverse_brute_force, is_equivalence, EquivalenceReport};
pub use limit::{limit_over_poset, Limit, Overlap};
pub use simplicial::{inclusion, segal_map_check, Reindexing, SimplicialFinCategory};

/// A finite category with objects and morphisms numbered densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    src: Vec<usize>,
    dst: Vec<usize>,
    homs: Vec<Vec<Vec<usize>>>,
    identity: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
}

/// Serializable dump: objects, hom-sets and the composition table.
#[derive(Serialize)]
pub struct CategoryDump {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, usize, usize)>,
    pub identities: Vec<usize>,
    pub composition: Vec<(usize, usize, usize)>,
}

impl FinCategory {
    /// Builds a category from concrete objects and morphisms: `hom(a, b)` must list every
    /// morphism once, and composites and identities must land in the listed hom-sets.
    pub fn from_concrete<O, M>(
        objects: &[O],
        hom: impl Fn(&O, &O) -> Vec<M>,
        compose: impl Fn(&M, &M) -> M,
        identity: impl Fn(&O) -> M,
    ) -> Result<FinCategory>
    where
        O: Debug,
        M: Eq + Hash + Clone + Debug,
    {
        Ok(FinCategory::from_concrete_with_values(objects, hom, compose, identity)?.0)
    }

    /// [`FinCategory::from_concrete`], also returning the concrete morphism behind each id.
    pub fn from_concrete_with_values<O, M>(
        objects: &[O],
        hom: impl Fn(&O, &O) -> Vec<M>,
        compose: impl Fn(&M, &M) -> M,
        identity: impl Fn(&O) -> M,
    ) -> Result<(FinCategory, Vec<M>)>
    where
        O: Debug,
        M: Eq + Hash + Clone + Debug,
    {
        let n = objects.len();
        let mut cat = FinCategory {
            obj_labels: objects.iter().map(|o| format!("{o:?}")).collect(),
            mor_labels: Vec::new(),
            src: Vec::new(),
            dst: Vec::new(),
            homs: vec![vec![Vec::new(); n]; n],
            identity: Vec::new(),
            comp: HashMap::new(),
        };
        let mut index: Vec<Vec<HashMap<M, usize>>> = vec![vec![HashMap::new(); n]; n];
        let mut values = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for m in hom(&objects[a], &objects[b]) {
                    let id = cat.src.len();
                    if index[a][b].insert(m.clone(), id).is_some() {
                        return Err(Error::InvalidInput(format!("duplicate morphism {m:?}")));
                    }
                    cat.mor_labels.push(format!("{m:?}"));
                    cat.src.push(a);
                    cat.dst.push(b);
                    cat.homs[a][b].push(id);
                    values.push(m);
                }
            }
        }
        for (a, o) in objects.iter().enumerate() {
            let id = identity(o);
            let i = *index[a][a].get(&id).ok_or_else(|| Error::InvalidInput(format!("identity {id:?} not listed")))?;
            cat.identity.push(i);
        }
        for f in 0..cat.src.len() {
            for &g in &cat.homs_out(cat.dst[f]) {
                let gf = compose(&values[g], &values[f]);
                let (a, c) = (cat.src[f], cat.dst[g]);
                let i =
                    *index[a][c].get(&gf).ok_or_else(|| Error::InvalidInput(format!("composite {gf:?} not listed")))?;
                cat.comp.insert((g, f), i);
            }
        }
        Ok((cat, values))
    }

    /// Builds a category from tables: morphisms as `(src, dst)`, identity ids and a
    /// composition function on ids; validated for closure, units and associativity.
    pub fn from_tables(
        objects: usize,
        morphisms: &[(usize, usize)],
        identity: &[usize],
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<FinCategory> {
        let mut cat = FinCategory {
            obj_labels: (0..objects).map(|i| i.to_string()).collect(),
            mor_labels: (0..morphisms.len()).map(|i| format!("m{i}")).collect(),
            src: morphisms.iter().map(|m| m.0).collect(),
            dst: morphisms.iter().map(|m| m.1).collect(),
            homs: vec![vec![Vec::new(); objects]; objects],
            identity: identity.to_vec(),
            comp: HashMap::new(),
        };
        for (i, &(a, b)) in morphisms.iter().enumerate() {
            cat.homs[a][b].push(i);
        }
        for f in 0..morphisms.len() {
            for g in cat.homs_out(cat.dst[f]) {
                cat.comp.insert((g, f), compose(g, f));
            }
        }
        cat.validate()?;
        Ok(cat)
    }

    pub fn num_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn object_label(&self, a: usize) -> &str {
        &self.obj_labels[a]
    }

    pub fn morphism_label(&self, f: usize) -> &str {
        &self.mor_labels[f]
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn dst(&self, f: usize) -> usize {
        self.dst[f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a][b]
    }

    fn homs_out(&self, a: usize) -> Vec<usize> {
        (0..self.num_objects()).flat_map(|b| self.homs[a][b].iter().copied()).collect()
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identity[a]
    }

    /// `g ∘ f`; panics on non-composable pairs.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.comp[&(g, f)]
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.src[f], self.dst[f]);
        self.homs[b][a]
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == self.identity[a] && self.compose(f, g) == self.identity[b])
    }

    pub fn isomorphic(&self, a: usize, b: usize) -> bool {
        self.homs[a][b].iter().any(|&f| self.is_iso(f))
    }

    /// Representatives of the isomorphism classes, smallest index first.
    pub fn iso_class_representatives(&self) -> Vec<usize> {
        let mut reps: Vec<usize> = Vec::new();
        for a in 0..self.num_objects() {
            if !reps.iter().any(|&r| self.isomorphic(r, a)) {
                reps.push(a);
            }
        }
        reps
    }

    /// Checks closure, typing and units of the tables and associativity of composition.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        for (a, &id) in self.identity.iter().enumerate() {
            if self.src[id] != a || self.dst[id] != a {
                return bad(format!("identity of {a} has wrong type"));
            }
        }
        for f in 0..self.num_morphisms() {
            for g in self.homs_out(self.dst[f]) {
                let Some(&gf) = self.comp.get(&(g, f)) else {
                    return bad(format!("missing composite {g}∘{f}"));
                };
                if self.src[gf] != self.src[f] || self.dst[gf] != self.dst[g] {
                    return bad(format!("composite {g}∘{f} has wrong type"));
                }
            }
            if self.compose(self.identity[self.dst[f]], f) != f || self.compose(f, self.identity[self.src[f]]) != f {
                return bad(format!("identities are not neutral on {f}"));
            }
        }
        for f in 0..self.num_morphisms() {
            for g in self.homs_out(self.dst[f]) {
                for h in self.homs_out(self.dst[g]) {
                    if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f) {
                        return bad(format!("composition not associative at ({h},{g},{f})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dump(&self) -> CategoryDump {
        let mut composition: Vec<(usize, usize, usize)> = self.comp.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        composition.sort_unstable();
        CategoryDump {
            objects: self.obj_labels.clone(),
            morphisms: (0..self.num_morphisms())
                .map(|f| (self.mor_labels[f].clone(), self.src[f], self.dst[f]))
                .collect(),
            identities: self.identity.clone(),
            composition,
        }
    }

    /// The terminal category: one object, one morphism.
    pub fn terminal() -> FinCategory {
        FinCategory::from_tables(1, &[(0, 0)], &[0], |_, _| 0).expect("terminal category")
    }

    /// The discrete category on `n` objects.
    pub fn discrete(n: usize) -> FinCategory {
        let mors: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        let ids: Vec<usize> = (0..n).collect();
        FinCategory::from_tables(n, &mors, &ids, |g, _| g).expect("discrete category")
    }
}

/// A functor given by its action on object and morphism ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatFunctor {
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

impl CatFunctor {
    pub fn identity(c: &FinCategory) -> CatFunctor {
        CatFunctor { on_objects: (0..c.num_objects()).collect(), on_morphisms: (0..c.num_morphisms()).collect() }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CatFunctor) -> CatFunctor {
        CatFunctor {
            on_objects: first.on_objects.iter().map(|&a| self.on_objects[a]).collect(),
            on_morphisms: first.on_morphisms.iter().map(|&f| self.on_morphisms[f]).collect(),
        }
    }

    /// Checks typing, identities and composition against `source` and `target`.
    pub fn validate(&self, source: &FinCategory, target: &FinCategory) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.on_objects.len() != source.num_objects() || self.on_morphisms.len() != source.num_morphisms() {
            return bad("functor tables do not match the source category".into());
        }
        if self.on_objects.iter().any(|&a| a >= target.num_objects())
            || self.on_morphisms.iter().any(|&f| f >= target.num_morphisms())
        {
            return bad("functor tables leave the target category".into());
        }
        for f in 0..source.num_morphisms() {
            let ff = self.on_morphisms[f];
            if target.src(ff) != self.on_objects[source.src(f)] || target.dst(ff) != self.on_objects[source.dst(f)] {
                return bad(format!("morphism {f} is sent to a morphism of the wrong type"));
            }
        }
        for a in 0..source.num_objects() {
            if self.on_morphisms[source.identity(a)] != target.identity(self.on_objects[a]) {
                return bad(format!("identity of object {a} is not preserved"));
            }
        }
        for f in 0..source.num_morphisms() {
            for g in source.homs_out(source.dst(f)) {
                let lhs = self.on_morphisms[source.compose(g, f)];
                let rhs = target.compose(self.on_morphisms[g], self.on_morphisms[f]);
                if lhs != rhs {
                    return bad(format!("composition {g}∘{f} is not preserved"));
                }
            }
        }
        Ok(())
    }

    /// The functor induced by concrete maps on objects and morphisms, located by label.
    pub fn from_labels(
        source: &FinCategory,
        target: &FinCategory,
        on_object: impl Fn(&str) -> String,
        on_morphism: impl Fn(&str) -> String,
    ) -> Result<CatFunctor> {
        let objs: HashMap<&str, usize> = (0..target.num_objects()).map(|a| (target.object_label(a), a)).collect();
        let on_objects = (0..source.num_objects())
            .map(|a| {
                let l = on_object(source.object_label(a));
                objs.get(l.as_str()).copied().ok_or_else(|| Error::InvalidInput(format!("object {l} not in target")))
            })
            .collect::<Result<Vec<_>>>()?;
        let on_morphisms = (0..source.num_morphisms())
            .map(|f| {
                let (a, b) = (on_objects[source.src(f)], on_objects[source.dst(f)]);
                let l = on_morphism(source.morphism_label(f));
                target
                    .hom(a, b)
                    .iter()
                    .copied()
                    .find(|&g| target.morphism_label(g) == l)
                    .ok_or_else(|| Error::InvalidInput(format!("morphism {l} not in target")))
            })
            .collect::<Result<Vec<_>>>()?;
        let fun = CatFunctor { on_objects, on_morphisms };
        fun.validate(source, target)?;
        Ok(fun)
    }
}
