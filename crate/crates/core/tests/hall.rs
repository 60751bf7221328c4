use segal_lab::hall::*;
use segal_lab::Backend;

/// Number of `n`-element subsets of an `m`-set (q = 1) or `n`-dimensional subspaces of
/// `𝔽_q^m`, by the Gaussian binomial product.
fn subobject_count(q: u64, m: usize, n: usize) -> u64 {
    if n > m {
        return 0;
    }
    if q == 1 {
        return (0..n as u64).fold(1, |acc, i| acc * (m as u64 - i) / (i + 1));
    }
    let num: u64 = (0..n as u32).map(|i| q.pow(m as u32 - i) - 1).product();
    let den: u64 = (0..n as u32).map(|i| q.pow(i + 1) - 1).product();
    num / den
}

#[test]
fn hall_numbers_match_subobject_counts() {
    for (b, q, top) in [(Backend::F1, 1, 4), (Backend::Fq(2), 2, 3), (Backend::Fq(3), 3, 2)] {
        for m in 0..=top {
            for n in 0..=top {
                for l in 0..=top {
                    let expected = if n + l == m { subobject_count(q, m, n) } else { 0 };
                    assert_eq!(hall_number(b, m, n, l).unwrap(), expected, "{b} M={m} N={n} L={l}");
                }
            }
        }
    }
}

#[test]
fn face_fibers_of_s1_agree() {
    for (b, top) in [(Backend::F1, 3), (Backend::Fq(2), 2)] {
        for m in 0..=top {
            for n in 0..=m {
                let l = m - n;
                assert_eq!(
                    hall_number_via_fibers(b, m, n, l).unwrap(),
                    hall_number(b, m, n, l).unwrap(),
                    "{b} M={m} N={n}"
                );
            }
        }
    }
}

#[test]
fn associativity_within_bounds() {
    for (b, bound) in [(Backend::F1, 3), (Backend::F1, 4), (Backend::Fq(2), 2), (Backend::Fq(2), 3)] {
        let r = associativity_check(b, bound).unwrap();
        assert!(r.associative, "{b} bound {bound}: {:?}", r.violations);
        assert!(r.table.constants.keys().all(|&(m, n, l)| n + l == m));
    }
}

#[test]
fn corrupted_table_is_caught() {
    // g^3_{1,2} enters ([1]·[1])·[1] but not [1]·([1]·[1]), which uses g^3_{2,1}
    let mut t = HallTable::build(Backend::Fq(2), 3).unwrap();
    *t.constants.get_mut(&(3, 1, 2)).unwrap() += 1;
    let r = associativity_of(&t);
    assert!(!r.associative);
    assert!(r.violations.contains(&AssociativityViolation { n: 1, l: 1, k: 1, x: 3, left: 3 * 7, right: 3 * 8 }));
}

#[test]
fn exports() {
    let t = HallTable::build(Backend::F1, 2).unwrap();
    assert_eq!(t.to_csv().unwrap(), "M,N,L,count\n0,0,0,1\n1,0,1,1\n1,1,0,1\n2,0,2,1\n2,1,1,2\n2,2,0,1\n");
    let j = serde_json::to_value(&t).unwrap();
    assert_eq!(j["backend"], "f1");
    assert_eq!(j["constants"][4], serde_json::json!({ "m": 2, "n": 1, "l": 1, "count": 2 }));
}
