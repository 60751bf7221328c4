//! Cells of the Waldhausen constructions: enumeration against brute force, validation
//! fixtures, duality, hypercubes, Kan-extension round trips, hyperplane functors and the
//! counterexample families.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use segal_lab::waldhausen::*;
use segal_lab::{Backend, Mor, Side};

const BUDGET: u64 = DEFAULT_BUDGET;

fn classes(k: usize, n: usize, variant: Variant, b: Backend, bound: usize) -> (Shape, Vec<Diagram>) {
    let s = Shape::grid(k, n, variant).unwrap();
    let t = Tables::new(b, bound, 1).unwrap();
    let c = enumerate_classes(&s, &t, bound, BUDGET).unwrap();
    (s, c.reps)
}

/// Iso classes by a search without orbit normalization, deduplicated pairwise.
fn unnormalized_count(shape: &Shape, b: Backend, bound: usize) -> usize {
    let t = Tables::new(b, bound, 1).unwrap();
    let mut p = Problem::free(shape, bound);
    p.normalize = false;
    let mut reps: Vec<Diagram> = Vec::new();
    search(&p, &t, BUDGET, &mut |d| {
        if !reps.iter().any(|r| find_iso(&t, shape, r, d, None).is_some()) {
            reps.push(d.clone());
        }
        true
    })
    .unwrap();
    reps.len()
}

fn node(shape: &Shape, key: &[u8]) -> usize {
    shape.node(key).unwrap()
}

fn arrow(shape: &Shape, from: &[u8], to: &[u8]) -> usize {
    shape.arrow_index[&(node(shape, from), node(shape, to))]
}

/// A `k = 1`, `n = 2` cell from its three objects and two maps.
fn ses(b: Backend, sub: Mor, quot: Mor) -> (Shape, Diagram) {
    let s = Shape::grid(1, 2, Variant::Exact).unwrap();
    let mut d = Diagram::zero(&s);
    d.sizes[node(&s, &[0, 1])] = sub.cols() as u8;
    d.sizes[node(&s, &[0, 2])] = sub.rows() as u8;
    d.sizes[node(&s, &[1, 2])] = quot.rows() as u8;
    for (a, &(u, v)) in s.arrows.iter().enumerate() {
        d.maps[a] = b.zero(d.sizes[u] as usize, d.sizes[v] as usize);
    }
    d.maps[arrow(&s, &[0, 1], &[0, 2])] = sub;
    d.maps[arrow(&s, &[0, 2], &[1, 2])] = quot;
    (s, d)
}

#[test]
fn s1_level2_f1_count_matches_brute_force() {
    let b = Backend::F1;
    let (s, reps) = classes(1, 2, Variant::Exact, b, 2);
    // oracle: every assignment of sizes and maps, validated, deduplicated by isomorphism
    let t = Tables::new(b, 2, 1).unwrap();
    let mut found: Vec<Diagram> = Vec::new();
    for a in 0..=2usize {
        for m in 0..=2usize {
            for q in 0..=2usize {
                for i in b.homs(a, m).unwrap() {
                    for p in b.homs(m, q).unwrap() {
                        let (_, d) = ses(b, i, p);
                        if validate(b, &s, &d).is_ok() && !found.iter().any(|r| find_iso(&t, &s, r, &d, None).is_some())
                        {
                            found.push(d);
                        }
                    }
                }
            }
        }
    }
    // short exact sequences of pointed sets up to iso: one per (sub ≤ middle ≤ 2)
    assert_eq!(found.len(), 6);
    assert_eq!(reps.len(), 6);
}

#[test]
fn normalized_enumeration_matches_unnormalized() {
    let cases = [
        (1, 3, Variant::Exact, Backend::Fq(2), 2),
        (2, 3, Variant::Exact, Backend::Fq(2), 1),
        (1, 3, Variant::Acyclic, Backend::F1, 2),
        (2, 3, Variant::LeftExact, Backend::F1, 1),
        (1, 2, Variant::Acyclic, Backend::Fq(3), 1),
    ];
    for (k, n, v, b, bound) in cases {
        let (s, reps) = classes(k, n, v, b, bound);
        assert_eq!(reps.len(), unnormalized_count(&s, b, bound), "k={k} n={n} {v} {b} bound {bound}");
    }
}

#[test]
fn low_levels() {
    for b in [Backend::F1, Backend::Fq(2)] {
        // S⟨k⟩_j is trivial below j = k
        assert_eq!(classes(2, 1, Variant::Exact, b, 2).1.len(), 1);
        assert_eq!(classes(2, 0, Variant::Exact, b, 2).1.len(), 1);
        // S⟨k⟩_k is the category itself: one class per size
        assert_eq!(classes(2, 2, Variant::Exact, b, 2).1.len(), 3);
        assert_eq!(classes(1, 1, Variant::Exact, b, 3).1.len(), 4);
    }
}

#[test]
fn exact_example_and_faces() {
    let b = Backend::F1;
    let (s, d) = ses(b, Mor::from_rows(1, &[vec![1], vec![0]]), Mor::from_rows(2, &[vec![0, 1]]));
    assert!(validate(b, &s, &d).is_ok());
    assert_eq!(hypercube_check(b, &s, &d, Variant::Exact), Some(true));
    let (s1, d1) = face(b, &s, &d, 1).unwrap();
    assert_eq!(s1.ambient, 1);
    assert_eq!(d1.sizes[node(&s1, &[0, 1])], 2);
    // a nonzero degenerate object is rejected
    let mut bad = d.clone();
    bad.sizes[node(&s, &[1, 1])] = 1;
    for (a, &(u, v)) in s.arrows.iter().enumerate() {
        bad.maps[a] = if bad.sizes[u] == 0 || bad.sizes[v] == 0 {
            b.zero(bad.sizes[u] as usize, bad.sizes[v] as usize)
        } else {
            bad.maps[a]
        };
    }
    assert!(matches!(validate(b, &s, &bad), Err(CellFailure::NonzeroDegenerate { .. })));
    // the example dualizes to itself with sub and quotient swapped
    let dual = dual_shape(&s).unwrap();
    let dd = dualize(b, &s, &dual, &d);
    let t = Tables::new(b, 2, 1).unwrap();
    assert!(find_iso(&t, &s, &d, &dd, None).is_some());
}

#[test]
fn simplicial_identities_on_cells() {
    let b = Backend::Fq(2);
    for (k, n) in [(1, 3), (2, 3), (1, 4)] {
        let (s, reps) = classes(k, n, Variant::Exact, b, if k == 1 { 2 } else { 1 });
        for d in &reps {
            for j in 0..=n {
                let (sd, dd) = degeneracy(b, &s, d, j).unwrap();
                assert!(validate(b, &sd, &dd).is_ok());
                for i in [j, j + 1] {
                    let (_, back) = face(b, &sd, &dd, i).unwrap();
                    assert_eq!(&back, d);
                }
            }
            for i in 0..=n {
                let (sf, df) = face(b, &s, d, i).unwrap();
                assert!(validate(b, &sf, &df).is_ok());
                for j in 0..i {
                    // d_j d_i = d_{i−1} d_j
                    let (sa, a) = face(b, &sf, &df, j).unwrap();
                    let (sb0, b0) = face(b, &s, d, j).unwrap();
                    let (_, bb) = face(b, &sb0, &b0, i - 1).unwrap();
                    assert_eq!(a, bb, "{sa:?}");
                }
            }
        }
    }
}

#[test]
fn hypercube_agrees_with_validation() {
    for (k, n, b, bound) in
        [(1, 3, Backend::F1, 2), (2, 3, Backend::F1, 1), (2, 3, Backend::Fq(2), 1), (1, 4, Backend::Fq(2), 1)]
    {
        let (s, reps) = classes(k, n, Variant::Acyclic, b, bound);
        let left = Shape::grid(k, n, Variant::LeftExact).unwrap();
        let right = Shape::grid(k, n, Variant::RightExact).unwrap();
        for d in &reps {
            assert_eq!(hypercube_check(b, &s, d, Variant::LeftExact), Some(validate(b, &left, d).is_ok()));
            assert_eq!(hypercube_check(b, &s, d, Variant::RightExact), Some(validate(b, &right, d).is_ok()));
        }
    }
}

#[test]
fn duality_is_an_involution_swapping_sides() {
    for b in [Backend::F1, Backend::Fq(2)] {
        for (k, n) in [(1, 3), (2, 3)] {
            let (s, reps) = classes(k, n, Variant::LeftExact, b, if k == 1 { 2 } else { 1 });
            let dual = dual_shape(&s).unwrap();
            assert_eq!(dual.variant, Variant::RightExact);
            for d in &reps {
                let dd = dualize(b, &s, &dual, d);
                assert!(validate(b, &dual, &dd).is_ok());
                assert_eq!(&dualize(b, &dual, &s, &dd), d);
            }
        }
    }
}

#[test]
fn kan_extension_of_an_epi() {
    let b = Backend::Fq(2);
    let s = Shape::grid(0, 1, Variant::RightExact).unwrap();
    let mut d = Diagram::zero(&s);
    d.sizes = vec![2, 1];
    d.maps[arrow(&s, &[0], &[1])] = Mor::from_rows(2, &[vec![1, 0]]);
    let (out, e) = kan_extend_right(b, &s, &d).unwrap();
    assert_eq!(out.variant, Variant::Exact);
    assert_eq!(e.sizes[node(&out, &[0, 1])], 1);
    assert_eq!(e.maps[arrow(&out, &[0, 1], &[0, 2])], Mor::from_rows(1, &[vec![0], vec![1]]));
    // zero in, zero out
    let (_, z) = kan_extend_right(b, &s, &Diagram::zero(&s)).unwrap();
    assert!(z.is_zero());
}

#[test]
fn kan_extension_round_trips() {
    for b in [Backend::F1, Backend::Fq(2)] {
        let bound = 2;
        let t = Tables::new(b, bound, 1).unwrap();
        for k in 1..=2usize {
            for n in 0..=3usize {
                for (kind, variant) in [(PathKind::Right, Variant::RightExact), (PathKind::Left, Variant::LeftExact)] {
                    let (sv, vs) = classes(k - 1, n, variant, b, bound);
                    for v in &vs {
                        let (se, e) = match kind {
                            PathKind::Right => kan_extend_right(b, &sv, v).unwrap(),
                            _ => kan_extend_left(b, &sv, v).unwrap(),
                        };
                        let (sf, back) = forget_path(b, &se, &e, kind).unwrap();
                        assert!(find_iso(&t, &sf, v, &back, None).is_some(), "{kind:?} k={k} n={n}");
                    }
                    let (sa, cells) = classes(k, n + 1, Variant::Exact, b, bound);
                    for a in &cells {
                        let (sf, f) = forget_path(b, &sa, a, kind).unwrap();
                        let (_, e) = match kind {
                            PathKind::Right => kan_extend_right(b, &sf, &f).unwrap(),
                            _ => kan_extend_left(b, &sf, &f).unwrap(),
                        };
                        assert!(find_iso(&t, &sa, a, &e, None).is_some(), "{kind:?} k={k} n={n}");
                    }
                }
                if k == 2 {
                    let (sv, vs) = classes(0, n, Variant::Acyclic, b, bound);
                    for v in &vs {
                        let (s1, e1) = kan_extend_right(b, &sv, v).unwrap();
                        let (s2, e2) = kan_extend_left(b, &s1, &e1).unwrap();
                        let (sf, back) = forget_path(b, &s2, &e2, PathKind::Double).unwrap();
                        assert!(find_iso(&t, &sf, v, &back, None).is_some());
                    }
                }
            }
        }
    }
}

#[test]
fn extension_of_a_short_exact_sequence_is_exact() {
    let b = Backend::Fq(2);
    let (s, d) = ses(b, Mor::from_rows(1, &[vec![1], vec![0]]), Mor::from_rows(2, &[vec![0, 1]]));
    let right = Shape::grid(1, 2, Variant::RightExact).unwrap();
    let (out, e) = kan_extend_right(b, &right, &d).unwrap();
    assert_eq!((out.k, out.ambient), (2, 3));
    assert_eq!(out.sequences.len(), 1);
    assert!(validate(b, &out, &e).is_ok());
    assert!(validate(b, &s, &d).is_ok());
}

#[test]
fn hyperplane_functors() {
    // k = 1 staircase over F1: quotients of a flag
    let b = Backend::F1;
    let s = Shape::grid(1, 3, Variant::Exact).unwrap();
    let t = Tables::new(b, 3, 1).unwrap();
    let mut p = Problem::free(&s, 3);
    p.fixed_sizes[node(&s, &[0, 1])] = Some(1);
    p.fixed_sizes[node(&s, &[0, 3])] = Some(3);
    p.fixed_sizes[node(&s, &[1, 3])] = Some(2);
    let mut flag = None;
    search(&p, &t, BUDGET, &mut |d| {
        flag = Some(d.clone());
        false
    })
    .unwrap();
    let flag = flag.unwrap();
    let (out, q) = hyperplane_functor(b, &s, &flag, 1, 3, PathKind::Left).unwrap();
    assert_eq!((out.k, out.ambient), (0, 1));
    assert_eq!(q.sizes, vec![2, 2]);
    assert!(b.is_iso(&q.maps[0]));
    let (_, z) = hyperplane_functor(b, &s, &Diagram::zero(&s), 1, 3, PathKind::Right).unwrap();
    assert!(z.is_zero());

    // exact cells stay exact, on a sample of S⟨2⟩_4 over F2
    let b = Backend::Fq(2);
    let (s, reps) = classes(2, 4, Variant::Exact, b, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in reps.choose_multiple(&mut rng, 100) {
        for kind in [PathKind::Left, PathKind::Right] {
            let (out, e) = hyperplane_functor(b, &s, d, 2, 3, kind).unwrap();
            assert_eq!(out.variant, Variant::Exact);
            assert!(validate(b, &out, &e).is_ok());
        }
    }
}

#[test]
fn path_space_functors_are_equivalences() {
    for b in [Backend::F1, Backend::Fq(2)] {
        for n in 0..=3 {
            for kind in [PathKind::Left, PathKind::Right] {
                let r = check_functor(&path_space_functor(1, n, kind).unwrap(), b, 2, BUDGET).unwrap();
                assert!(r.verdict, "{}", r.functor);
            }
        }
    }
}

#[test]
fn segal_checks_detect_failures() {
    // S⟨1⟩ is not 1-Segal: the middle object is not determined by its two faces
    let f = segal_functor(Construction::pair(1), None, 2, 1, Side::Lower).unwrap();
    let r = check_functor(&f, Backend::F1, 2, BUDGET).unwrap();
    assert!(!r.fully_faithful);
    assert!(r.ff_witness.is_some());
    // S⟨1⟩ is 2-Segal
    let f = segal_functor(Construction::pair(1), None, 3, 2, Side::Upper).unwrap();
    assert!(check_functor(&f, Backend::Fq(2), 2, BUDGET).unwrap().verdict);
}

#[test]
fn counterexample_families() {
    let r = left_exact_family(Backend::FreeAb, 2, BUDGET).unwrap();
    let obstruction = r.obstruction.as_ref().unwrap();
    assert_eq!(obstruction.gamma, "024");
    assert!(!r.preimage_exists);
    // the displayed family already fails inside the piece {0,1,3,4}
    assert!(!r.fiber_product_valid);
    assert!(matches!(&r.fiber_product_failure, Some(CellFailure::Sequence { gamma, .. }) if gamma == "034"));

    let control = left_exact_family(Backend::FreeAb, 1, BUDGET).unwrap();
    assert!(control.fiber_product_valid && control.preimage_exists && control.obstruction.is_none());
    for f in 0..2 {
        let r = left_exact_family(Backend::Fq(2), f, BUDGET).unwrap();
        assert!(r.fiber_product_valid && r.preimage_exists, "F2, f = {f}");
    }

    let r = acyclic_family(Backend::Fq(2), 1, BUDGET).unwrap();
    assert!(r.fiber_product_valid && !r.preimage_exists && r.refuted);
    assert_eq!(r.obstruction.unwrap().gamma, "024");
    let zero = acyclic_family(Backend::Fq(2), 0, BUDGET).unwrap();
    assert!(zero.fiber_product_valid && zero.preimage_exists);
}

#[test]
fn no_left_exact_witness_over_free_abelian_groups() {
    let w = witness_search(Backend::FreeAb, Variant::LeftExact, 2, 2, BUDGET).unwrap();
    assert!(w.witness.is_none());
    assert!(w.elements > 0);
    // the acyclic model does have witnesses
    let w = witness_search(Backend::Fq(2), Variant::Acyclic, 2, 1, BUDGET).unwrap();
    assert!(w.witness.is_some());
}
