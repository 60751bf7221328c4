//! Deciding whether a functor between finite categories is an equivalence.

use serde::Serialize;

use super::{CatFunctor, FinCategory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub essentially_surjective: bool,
    /// A target object outside the essential image.
    pub es_witness: Option<String>,
    pub fully_faithful: bool,
    /// A pair of source objects on which the functor is not bijective on homs.
    pub ff_witness: Option<(String, String)>,
    pub verdict: bool,
}

impl EquivalenceReport {
    pub fn new(es_witness: Option<String>, ff_witness: Option<(String, String)>) -> EquivalenceReport {
        let (es, ff) = (es_witness.is_none(), ff_witness.is_none());
        EquivalenceReport { essentially_surjective: es, es_witness, fully_faithful: ff, ff_witness, verdict: es && ff }
    }
}

/// Essential surjectivity by iso search in the target; full faithfulness by hom-set
/// bijection on iso-class representatives of the source, which suffices because the
/// action on homs is compatible with composing by isomorphisms.
pub fn is_equivalence(source: &FinCategory, target: &FinCategory, f: &CatFunctor) -> EquivalenceReport {
    let es_witness = (0..target.num_objects())
        .find(|&t| !(0..source.num_objects()).any(|s| target.isomorphic(f.on_objects[s], t)))
        .map(|t| target.object_label(t).to_string());
    let reps = source.iso_class_representatives();
    let mut ff_witness = None;
    'outer: for &a in &reps {
        for &b in &reps {
            let (fa, fb) = (f.on_objects[a], f.on_objects[b]);
            let mut image: Vec<usize> = source.hom(a, b).iter().map(|&m| f.on_morphisms[m]).collect();
            image.sort_unstable();
            image.dedup();
            if image.len() != source.hom(a, b).len() || image.len() != target.hom(fa, fb).len() {
                ff_witness = Some((source.object_label(a).to_string(), source.object_label(b).to_string()));
                break 'outer;
            }
        }
    }
    EquivalenceReport::new(es_witness, ff_witness)
}

/// Independent oracle: searches for a functor `G` back together with natural isomorphisms
/// `FG ≅ id` and `GF ≅ id` by exhaustive backtracking. Only feasible for tiny categories.
pub fn has_inverse_brute_force(source: &FinCategory, target: &FinCategory, f: &CatFunctor) -> bool {
    let nt = target.num_objects();
    let mut g_obj = vec![0; nt];
    search_objects(source, target, f, &mut g_obj, 0)
}

fn search_objects(s: &FinCategory, t: &FinCategory, f: &CatFunctor, g_obj: &mut Vec<usize>, i: usize) -> bool {
    if i == g_obj.len() {
        let mut g_mor = vec![usize::MAX; t.num_morphisms()];
        return search_morphisms(s, t, f, g_obj, &mut g_mor, 0);
    }
    for a in 0..s.num_objects() {
        // FG(t) must be isomorphic to t
        if t.isomorphic(f.on_objects[a], i) {
            g_obj[i] = a;
            if search_objects(s, t, f, g_obj, i + 1) {
                return true;
            }
        }
    }
    false
}

fn search_morphisms(
    s: &FinCategory,
    t: &FinCategory,
    f: &CatFunctor,
    g_obj: &[usize],
    g_mor: &mut Vec<usize>,
    m: usize,
) -> bool {
    if m == g_mor.len() {
        let g = CatFunctor { on_objects: g_obj.to_vec(), on_morphisms: g_mor.clone() };
        return g.validate(t, s).is_ok() && natural_iso_exists(t, &f.after(&g)) && natural_iso_exists(s, &g.after(f));
    }
    let (a, b) = (g_obj[t.src(m)], g_obj[t.dst(m)]);
    for &cand in s.hom(a, b) {
        g_mor[m] = cand;
        if partial_functor_ok(t, s, g_obj, g_mor, m) && search_morphisms(s, t, f, g_obj, g_mor, m + 1) {
            return true;
        }
    }
    g_mor[m] = usize::MAX;
    false
}

/// Checks identities and composites among the morphisms assigned so far.
fn partial_functor_ok(t: &FinCategory, s: &FinCategory, g_obj: &[usize], g_mor: &[usize], upto: usize) -> bool {
    let set = |x: usize| x <= upto && g_mor[x] != usize::MAX;
    for a in 0..t.num_objects() {
        let id = t.identity(a);
        if set(id) && g_mor[id] != s.identity(g_obj[a]) {
            return false;
        }
    }
    for f in 0..=upto {
        for b in 0..t.num_objects() {
            for &g in t.hom(t.dst(f), b) {
                let gf = t.compose(g, f);
                if set(f) && set(g) && set(gf) && s.compose(g_mor[g], g_mor[f]) != g_mor[gf] {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether the endofunctor `h` of `c` is naturally isomorphic to the identity.
fn natural_iso_exists(c: &FinCategory, h: &CatFunctor) -> bool {
    let n = c.num_objects();
    let mut comp = vec![usize::MAX; n];
    natural_components(c, h, &mut comp, 0)
}

fn natural_components(c: &FinCategory, h: &CatFunctor, comp: &mut Vec<usize>, i: usize) -> bool {
    if i == comp.len() {
        return true;
    }
    for &eta in c.hom(h.on_objects[i], i) {
        if !c.is_iso(eta) {
            continue;
        }
        comp[i] = eta;
        // naturality against every morphism between objects assigned so far
        let ok = (0..=i).all(|a| {
            (0..=i).all(|b| c.hom(a, b).iter().all(|&m| c.compose(comp[b], h.on_morphisms[m]) == c.compose(m, comp[a])))
        });
        if ok && natural_components(c, h, comp, i + 1) {
            return true;
        }
    }
    comp[i] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::super::tests::f1_upto;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_equivalence() {
        let c = f1_upto(2);
        let id = CatFunctor::identity(&c);
        assert!(is_equivalence(&c, &c, &id).verdict);
        assert!(has_inverse_brute_force(&c, &c, &id));
    }

    #[test]
    fn discrete_pair_to_terminal_is_not_full() {
        let d = FinCategory::discrete(2);
        let t = FinCategory::terminal();
        let f = CatFunctor { on_objects: vec![0, 0], on_morphisms: vec![0, 0] };
        f.validate(&d, &t).unwrap();
        let rep = is_equivalence(&d, &t, &f);
        assert!(rep.essentially_surjective && !rep.fully_faithful && !rep.verdict);
        assert!(!has_inverse_brute_force(&d, &t, &f));
    }

    /// The chaotic category on `n` objects (exactly one morphism between any two).
    fn chaotic(n: usize) -> FinCategory {
        let mors: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        let ids: Vec<usize> = (0..n).map(|a| a * n + a).collect();
        FinCategory::from_tables(n, &mors, &ids, |g, f| (f / n) * n + g % n).unwrap()
    }

    #[test]
    fn skeleton_inclusion_is_equivalence() {
        let t = chaotic(2);
        let s = FinCategory::terminal();
        let f = CatFunctor { on_objects: vec![0], on_morphisms: vec![0] };
        f.validate(&s, &t).unwrap();
        assert!(is_equivalence(&s, &t, &f).verdict);
        assert!(has_inverse_brute_force(&s, &t, &f));
    }

    /// The thin category of a preorder given by a reflexive relation closed transitively.
    fn preorder(n: usize, rel: &[bool]) -> FinCategory {
        let mut r = rel.to_vec();
        for a in 0..n {
            r[a * n + a] = true;
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if r[a * n + k] && r[k * n + b] {
                        r[a * n + b] = true;
                    }
                }
            }
        }
        let objs: Vec<usize> = (0..n).collect();
        FinCategory::from_concrete(
            &objs,
            |&a, &b| if r[a * n + b] { vec![(a, b)] } else { vec![] },
            |g: &(usize, usize), f: &(usize, usize)| (f.0, g.1),
            |&a| (a, a),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn tables_agree_with_brute_force(
            n in 1usize..=3,
            m in 1usize..=3,
            rs in proptest::collection::vec(any::<bool>(), 9),
            rt in proptest::collection::vec(any::<bool>(), 9),
            map in proptest::collection::vec(0usize..3, 3),
        ) {
            let s = preorder(n, &rs[..n * n]);
            let t = preorder(m, &rt[..m * m]);
            let on_objects: Vec<usize> = map[..n].iter().map(|&x| x % m).collect();
            let on_morphisms: Option<Vec<usize>> = (0..s.num_morphisms())
                .map(|f| t.hom(on_objects[s.src(f)], on_objects[s.dst(f)]).first().copied())
                .collect();
            // only order-preserving object maps define functors
            if let Some(on_morphisms) = on_morphisms {
                let f = CatFunctor { on_objects, on_morphisms };
                prop_assert!(f.validate(&s, &t).is_ok());
                prop_assert_eq!(is_equivalence(&s, &t, &f).verdict, has_inverse_brute_force(&s, &t, &f));
            }
        }
    }
}
