use proptest::prelude::*;
use segal_lab::combinatorics::{classify_subset, subsets_of_size, Parity, Side, SubsetOfN};
use segal_lab::polytope::{
    below_order_check, below_relation_variant, canonical_triangulation, enumerate_triangulations, facet_side_geometric,
    flip, is_triangulation, lowest_simplex, proper_intersection_circuit, BelowVariant, FacetSide, FlipGraph,
    MomentConfig,
};

/// Triangulations of a convex polygon with `m` vertices, by the split-at-the-base recurrence.
fn polygon_triangulations(m: usize) -> u64 {
    let mut t = vec![0u64; m.max(3) + 1];
    t[2] = 1;
    for k in 3..=m {
        // fix edge (0, k−1); the apex j splits into polygons of j+1 and k−j vertices
        t[k] = (1..k - 1).map(|j| t[j + 1] * t[k - j]).sum();
    }
    t[m]
}

#[test]
fn polygon_oracle_sanity() {
    assert_eq!(polygon_triangulations(3), 1);
    assert_eq!(polygon_triangulations(5), 5);
    assert_eq!(polygon_triangulations(6), 14);
}

#[test]
fn planar_counts_match_polygon_oracle() {
    for n in 2..=7 {
        assert_eq!(enumerate_triangulations(n, 2).unwrap().len() as u64, polygon_triangulations(n + 1), "n={n}");
    }
}

#[test]
fn line_counts_are_subsets_of_interior_points() {
    for n in 1..=7 {
        assert_eq!(enumerate_triangulations(n, 1).unwrap().len(), 1 << (n - 1));
    }
}

#[test]
fn enumerated_triangulations_are_valid_and_contain_canonical_ones() {
    for d in 1..=3 {
        for n in d..=6 {
            let all = enumerate_triangulations(n, d).unwrap();
            for t in &all {
                assert!(is_triangulation(t).unwrap().valid, "{t:?}");
            }
            for side in [Side::Lower, Side::Upper] {
                assert!(all.contains(&canonical_triangulation(n, d, side).unwrap()));
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn proper_intersection_deciders_agree() {
    for d in 1..=3 {
        for n in d..=7 {
            let cfg = MomentConfig::new(n, d);
            let simp = subsets_of_size(n, d + 1);
            for (a, x) in simp.iter().enumerate() {
                for y in &simp[a..] {
                    assert_eq!(cfg.proper_intersection_lp(x, y), proper_intersection_circuit(x, y, d), "{x} {y}");
                }
            }
        }
    }
}

#[test]
fn gale_matches_geometry() {
    for d in 0..=4 {
        for n in d + 1..=8 {
            for s in subsets_of_size(n, d + 1) {
                let want = match classify_subset(&s) {
                    Parity::Even => FacetSide::LowerFacet,
                    Parity::Odd => FacetSide::UpperFacet,
                    _ => FacetSide::NotAFacet,
                };
                assert_eq!(facet_side_geometric(&s, n, d).unwrap(), want);
            }
        }
    }
}

#[test]
fn flip_graphs_are_connected_with_canonical_extremes() {
    for d in 1..=3 {
        for n in d..=6 {
            let g = FlipGraph::build(n, d).unwrap();
            assert!(g.is_connected(), "n={n} d={d}");
            let lo = g.index_of(&canonical_triangulation(n, d, Side::Lower).unwrap()).unwrap();
            let up = g.index_of(&canonical_triangulation(n, d, Side::Upper).unwrap()).unwrap();
            assert_eq!(g.sources(), vec![lo], "n={n} d={d}");
            assert_eq!(g.sinks(), vec![up], "n={n} d={d}");
        }
    }
}

#[test]
fn boundary_relation_on_the_line_is_acyclic() {
    for n in 1..=7 {
        assert!(below_order_check(n, 1).unwrap().is_partial_order());
    }
}

#[test]
fn boundary_relation_cycles_through_a_shared_extreme_vertex() {
    // {0,3,4} ∩ {0,1,2} = {0}, and vertex 0 is both an upper and a lower boundary point of each
    let o = below_order_check(4, 2).unwrap();
    let cycle = o.cycle.expect("three-cycle at n=4, d=2");
    let want: Vec<SubsetOfN> =
        [[0, 2, 3], [0, 3, 4], [0, 1, 2]].iter().map(|m| SubsetOfN::new(4, m.to_vec()).unwrap()).collect();
    assert_eq!(cycle, want);
    assert!(below_order_check(3, 2).unwrap().is_partial_order());
    assert!(below_order_check(4, 3).unwrap().is_partial_order());
    assert!(!below_order_check(5, 3).unwrap().is_partial_order());
}

#[test]
fn facet_adjacent_relation_is_acyclic() {
    for d in 1..=3 {
        for n in d..=6 {
            let o = below_relation_variant(n, d, BelowVariant::SharedFacet).unwrap();
            assert!(o.is_partial_order(), "n={n} d={d} cycle {:?}", o.cycle);
        }
    }
}

#[test]
fn triangulations_have_a_lowest_simplex() {
    for d in 1..=3 {
        for n in d..=7 {
            for t in enumerate_triangulations(n, d).unwrap() {
                assert!(lowest_simplex(&t).is_some());
            }
        }
    }
}

proptest! {
    #[test]
    fn flips_preserve_validity(n in 3usize..=6, seed in 0usize..1000, steps in 0usize..6) {
        let mut t = canonical_triangulation(n, 2, Side::Lower).unwrap();
        let circuits = subsets_of_size(n, 4);
        for k in 0..steps {
            let flippable: Vec<&SubsetOfN> = circuits.iter().filter(|c| flip(&t, c).is_ok()).collect();
            if flippable.is_empty() {
                break;
            }
            t = flip(&t, flippable[(seed + k) % flippable.len()]).unwrap();
            prop_assert!(is_triangulation(&t).unwrap().valid);
        }
    }

    #[test]
    fn scaled_volume_is_positive(n in 3usize..=8, d in 1usize..=3, pick in 0usize..10_000) {
        prop_assume!(n >= d);
        let cfg = MomentConfig::new(n, d);
        let simp = subsets_of_size(n, d + 1);
        let s = &simp[pick % simp.len()];
        prop_assert!(cfg.scaled_volume(s) > 0.into());
    }
}
