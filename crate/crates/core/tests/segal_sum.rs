use std::collections::BTreeSet;

use proptest::prelude::*;
use segal_lab::combinatorics::{monotone_maps, segal_poset};
use segal_lab::segal_sum::*;
use segal_lab::{Backend, MonotoneMap, Mor, Side};

const BUDGET: u64 = 100_000_000;

fn nonempty_subsets(len: usize) -> Vec<BTreeSet<usize>> {
    (1u32..1 << len).map(|m| (0..len).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

#[test]
fn sphere_cell_counts_are_binomial() {
    for k in 0..=3 {
        for n in 0..=7 {
            let c = sphere_cells(k, n);
            let binom = if n < k { 0 } else { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
            assert_eq!(c.len(), binom, "k={k} n={n}");
            assert!(c.elements.iter().all(|a| a.is_surjective()));
            assert!(c.elements.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn isolated_fibers_are_exactly_the_pieces_containing_i_alpha() {
    for k in 1..=2 {
        for n in 2 * k - 1..=6 {
            assert!(fiber_isolation_violations(k, n).unwrap().is_empty(), "k={k} n={n}");
        }
    }
}

#[test]
fn i_alpha_fits_in_an_even_2k_subset() {
    for k in 1..=2 {
        for n in 2 * k - 1..=7 {
            let poset = segal_poset(n, 2 * k - 1, Side::Lower).unwrap();
            for alpha in sphere_cells(k, n).elements {
                let ia = i_alpha(&alpha);
                assert!(ia.len() <= 2 * k);
                assert!(poset.maximal.iter().any(|m| ia.is_subset_of(m)), "{alpha:?}");
            }
        }
    }
}

#[test]
fn pointed_preimage_is_contravariantly_functorial() {
    for k in 1..=2 {
        for n in 0..=4 {
            for m in 0..=n {
                for l in 0..=m {
                    for t1 in monotone_maps(m, n) {
                        for t2 in monotone_maps(l, m) {
                            let (r1, r2) = (sphere_map(k, &t1), sphere_map(k, &t2));
                            let r = sphere_map(k, &t1.compose(&t2).unwrap());
                            assert_eq!(r, r2.after(&r1).unwrap());
                            for u in nonempty_subsets(r.target_len) {
                                assert_eq!(rho_preimage(&r, &u), rho_preimage(&r1, &rho_preimage(&r2, &u)));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn sections_are_stalk_products() {
    // elements of F(U) correspond bijectively to families of elements of the stalks
    // (F_q) or to points of their wedge (F1), through the restrictions to {*,u}
    for b in [Backend::F1, Backend::Fq(2)] {
        for (k, n) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)] {
            let len = sphere_cells(k, n).len();
            for stalks in
                (0..4usize.pow(len as u32)).map(|c| (0..len).map(|i| c / 4usize.pow(i as u32) % 4).collect::<Vec<_>>())
            {
                let f = Sheaf { k, n, stalks };
                for u in nonempty_subsets(len) {
                    let total = f.section(&u);
                    if total > segal_lab::backend::MAX_SIZE {
                        continue;
                    }
                    let elems = b.elements(total).unwrap();
                    let images: BTreeSet<Vec<Mor>> = elems
                        .iter()
                        .map(|x| {
                            u.iter()
                                .map(|&a| b.compose(&f.section_restriction(&u, &BTreeSet::from([a])).unwrap(), x))
                                .collect()
                        })
                        .collect();
                    assert_eq!(images.len(), elems.len(), "restrictions are jointly injective");
                    let product: usize = u.iter().map(|&a| b.elements(f.stalks[a]).unwrap().len()).product();
                    let expected = if b == Backend::F1 { total + 1 } else { product };
                    assert_eq!(images.len(), expected);
                }
            }
        }
    }
}

fn arb_case() -> impl Strategy<Value = (usize, MonotoneMap, MonotoneMap, Vec<usize>, Vec<usize>, u64)> {
    (1usize..=2, 1usize..=4, 0usize..=4, 0usize..=4, any::<u64>()).prop_flat_map(|(k, n, m, l, seed)| {
        let (m, l) = (m.min(n), l.min(m.min(n)));
        let t1 = monotone_maps(m, n);
        let t2 = monotone_maps(l, m);
        let len = sphere_cells(k, n).len();
        (
            Just(k),
            prop::sample::select(t1),
            prop::sample::select(t2),
            prop::collection::vec(0usize..=2, len),
            prop::collection::vec(0usize..=2, len),
            Just(seed),
        )
    })
}

proptest! {
    #[test]
    fn direct_images_compose((k, t1, t2, src, dst, seed) in arb_case()) {
        let b = Backend::Fq(2);
        let n = t1.target_len();
        let (r1, r2) = (sphere_map(k, &t1), sphere_map(k, &t2));
        let r = sphere_map(k, &t1.compose(&t2).unwrap());
        let f = Sheaf { k, n, stalks: src.clone() };
        let widest = |r: &PointedMap, s: &[usize]| (0..r.target_len).map(|t| r.fiber(t).iter().map(|&a| s[a]).sum::<usize>()).max().unwrap_or(0);
        prop_assume!(widest(&r, &src).max(widest(&r, &dst)).max(widest(&r1, &src)).max(widest(&r1, &dst)) <= segal_lab::backend::MAX_SIZE);
        let once = f.direct_image(&r, t2.source_len()).unwrap();
        let twice = f.direct_image(&r1, t1.source_len()).unwrap().direct_image(&r2, t2.source_len()).unwrap();
        prop_assert_eq!(once, twice);
        let phi: Vec<Mor> = src
            .iter()
            .zip(&dst)
            .enumerate()
            .map(|(i, (&s, &t))| {
                let h = b.homs(s, t).unwrap();
                h[(seed as usize).wrapping_add(i * 7919) % h.len()]
            })
            .collect();
        if order_compatible(&r2, &r1) {
            prop_assert_eq!(direct_image_mor(&r, &phi), direct_image_mor(&r2, &direct_image_mor(&r1, &phi)));
        }
    }
}

#[test]
fn block_order_composes_strictly_on_the_odd_lower_posets() {
    for k in 1..=2 {
        for n in 2 * k - 1..=6 {
            let poset = segal_poset(n, 2 * k - 1, Side::Lower).unwrap();
            for (a, c, j) in poset.pairwise_intersections() {
                let rj = restriction_map(k, &j);
                for p in [a, c] {
                    let ri = restriction_map(k, &poset.maximal[p]);
                    let members = poset.maximal[p].members();
                    let pos: Vec<usize> =
                        j.members().iter().map(|v| members.iter().position(|w| w == v).unwrap()).collect();
                    let rel = sphere_map(k, &MonotoneMap::new(members.len() - 1, pos).unwrap());
                    assert_eq!(rel.after(&ri).unwrap(), rj);
                    assert!(order_compatible(&rel, &ri), "k={k} n={n} piece {members:?} into {:?}", j.members());
                }
            }
        }
    }
}

#[test]
fn lower_odd_segal_fixtures() {
    for b in [Backend::F1, Backend::Fq(2)] {
        for n in 1..=4 {
            let r = segal_check_sum(b, 1, n, 3, BUDGET).unwrap();
            assert!(r.verdict, "{r:?}");
            assert_eq!(r.stalk_decomposition, Some(true));
            assert_eq!(r.limit_objects, 4u64.pow(n as u32));
        }
        for n in 3..=4 {
            let r = segal_check_sum(b, 2, n, 2, BUDGET).unwrap();
            assert!(r.verdict, "{r:?}");
            assert_eq!(r.stalk_decomposition, Some(true));
        }
    }
    assert!(segal_check_sum(Backend::FreeAb, 1, 2, 1, BUDGET).is_err());
    assert!(segal_check_sum(Backend::F1, 2, 2, 1, BUDGET).is_err());
}

#[test]
fn fully_2k_segal_at_level_2k() {
    for k in 1..=2 {
        let (top, bound) = if k == 1 { (4, 2) } else { (5, 1) };
        for d in [2 * k, 2 * k + 1] {
            for n in d..=top {
                for side in [Side::Lower, Side::Upper] {
                    let r = sum_segal_check(Backend::F1, k, n, d, side, bound, BUDGET).unwrap();
                    assert!(r.verdict, "k={k} d={d} n={n} {side:?}: {r:?}");
                }
            }
        }
    }
}

#[test]
fn wrong_dimensions_fail_with_witnesses() {
    let r = sum_segal_check(Backend::F1, 2, 3, 2, Side::Lower, 1, BUDGET).unwrap();
    assert!(!r.equivalence.fully_faithful);
    assert_eq!(r.free_blocks, vec![("0012".to_string(), "0112".to_string()), ("0112".to_string(), "0012".to_string())]);
    let r = sum_segal_check(Backend::F1, 2, 4, 1, Side::Lower, 1, BUDGET).unwrap();
    assert_eq!(r.untied_cells.len(), 6);
    assert!(!r.verdict);
    let r = sum_segal_check(Backend::F1, 1, 3, 1, Side::Upper, 2, BUDGET).unwrap();
    assert!(!r.verdict && r.free_blocks.len() == 6);
}

#[test]
fn structural_check_agrees_with_materialized_limits() {
    let cases = [
        (Backend::F1, 1, 2, 1, Side::Lower, 2),
        (Backend::F1, 1, 3, 1, Side::Lower, 1),
        (Backend::F1, 1, 2, 1, Side::Upper, 1),
        (Backend::F1, 1, 3, 2, Side::Upper, 1),
        (Backend::F1, 2, 3, 3, Side::Lower, 1),
        (Backend::F1, 2, 4, 3, Side::Lower, 1),
        (Backend::F1, 2, 3, 2, Side::Lower, 1),
        (Backend::F1, 2, 4, 1, Side::Lower, 1),
        (Backend::Fq(2), 1, 2, 1, Side::Lower, 1),
        (Backend::Fq(2), 1, 3, 1, Side::Upper, 1),
        (Backend::Fq(2), 2, 4, 3, Side::Lower, 1),
    ];
    for (b, k, n, d, side, bound) in cases {
        let fast = sum_segal_check(b, k, n, d, side, bound, BUDGET).unwrap();
        let slow = materialized_segal_check(b, k, n, d, side, bound).unwrap();
        assert_eq!(
            fast.equivalence.essentially_surjective, slow.essentially_surjective,
            "{b} k={k} n={n} d={d} {side:?}"
        );
        assert_eq!(fast.equivalence.fully_faithful, slow.fully_faithful, "{b} k={k} n={n} d={d} {side:?}");
    }
}

#[test]
fn cells_category_small_levels() {
    // n < k: only the zero sheaf
    let c = cells_category(Backend::F1, 2, 1, 3).unwrap();
    assert_eq!((c.num_objects(), c.num_morphisms()), (1, 1));
    // k = n = 1: the bounded slice of F1 itself, with partial injections as morphisms
    let c = cells_category(Backend::F1, 1, 1, 2).unwrap();
    assert_eq!(c.num_objects(), 3);
    assert_eq!(c.num_morphisms(), 1 + 1 + 1 + 1 + 2 + 3 + 1 + 3 + 7);
}

#[test]
fn sheaf_json_shape() {
    let f = Sheaf { k: 1, n: 2, stalks: vec![2, 1] };
    assert_eq!(f.to_json(), serde_json::json!({ "k": 1, "n": 2, "stalks": { "001": 2, "011": 1 } }));
}
