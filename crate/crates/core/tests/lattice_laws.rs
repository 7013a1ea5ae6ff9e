//! Lattice laws, distributivity and order-count bounds against brute-force
//! oracles.

use permlat_core::lattice::{
    dimension_bounds, enumerate_distributive_lattices, enumerate_lattices, is_isomorphic, lambda_zero,
    meet_irreducibles, min_chain_cover, ForbiddenSublattice,
};
use permlat_core::{Elem, FiniteLattice, FinitePoset};
use proptest::prelude::*;

fn elems(l: &FiniteLattice) -> Vec<Elem> {
    l.elements().collect()
}

/// Direct check of `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` over all triples.
fn distributive_by_triples(l: &FiniteLattice) -> bool {
    let es = elems(l);
    es.iter()
        .all(|&a| es.iter().all(|&b| es.iter().all(|&c| l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)))))
}

/// Greatest lower bound found by scanning the order relation.
fn glb_by_scan(l: &FiniteLattice, a: Elem, b: Elem) -> Option<Elem> {
    let lower: Vec<Elem> = l.elements().filter(|&x| l.leq(x, a) && l.leq(x, b)).collect();
    lower.iter().copied().find(|&m| lower.iter().all(|&x| l.leq(x, m)))
}

fn small_lattices() -> Vec<FiniteLattice> {
    enumerate_lattices(6).unwrap()
}

fn lattice_strategy() -> impl Strategy<Value = FiniteLattice> {
    let all = small_lattices();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

/// A random poset on up to six points, as a naturally labelled relation.
fn poset_strategy() -> impl Strategy<Value = FinitePoset> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            let names = (0..n).map(|i| format!("p{i}")).collect();
            FinitePoset::from_relation(names, &pairs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meet_and_join_satisfy_the_lattice_laws(l in lattice_strategy()) {
        let es = elems(&l);
        for &a in &es {
            prop_assert!(l.leq(l.bottom(), a) && l.leq(a, l.top()));
            prop_assert_eq!(l.meet(a, a), a);
            prop_assert_eq!(l.join(a, a), a);
            for &b in &es {
                prop_assert_eq!(l.meet(a, b), l.meet(b, a));
                prop_assert_eq!(l.join(a, b), l.join(b, a));
                prop_assert_eq!(l.meet(a, l.join(a, b)), a);
                prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                prop_assert_eq!(Some(l.meet(a, b)), glb_by_scan(&l, a, b));
                for &c in &es {
                    prop_assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                    prop_assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                }
            }
        }
    }

    #[test]
    fn distributivity_matches_the_triple_check(l in lattice_strategy()) {
        prop_assert_eq!(l.is_distributive(), distributive_by_triples(&l));
    }

    #[test]
    fn down_set_lattices_are_distributive(p in poset_strategy()) {
        let l = FiniteLattice::of_downsets(&p).unwrap();
        prop_assert!(l.is_distributive());
        prop_assert!(distributive_by_triples(&l));
    }

    #[test]
    fn meet_irreducibles_have_exactly_one_cover(l in lattice_strategy()) {
        let mi = meet_irreducibles(&l);
        for x in l.elements() {
            // oracle: x is not the meet of two elements strictly above it
            let above: Vec<Elem> = l.elements().filter(|&y| l.lt(x, y)).collect();
            let reducible = above.iter().any(|&a| above.iter().any(|&b| l.meet(a, b) == x));
            let expected = x != l.top() && !reducible;
            prop_assert_eq!(mi.contains(&x), expected, "element {}", l.name(x));
        }
    }

    #[test]
    fn bounds_are_consistent(p in poset_strategy()) {
        let l = FiniteLattice::of_downsets(&p).unwrap();
        let b = dimension_bounds(&l).unwrap();
        prop_assert_eq!(b.lower % 2, 0);
        let members = lambda_zero(&l);
        if !members.is_empty() {
            prop_assert!(b.lower <= b.upper);
        }
        // the cover's chains are chains and cover Λ₀
        for c in &b.cover.chains {
            for (i, &x) in c.iter().enumerate() {
                for &y in &c[i + 1..] {
                    prop_assert!(l.leq(x, y) || l.leq(y, x));
                }
            }
        }
        for m in &members {
            prop_assert!(b.cover.chains.iter().any(|c| c.contains(m)));
        }
        prop_assert_eq!(b.lower, 2 * max_antichain(&l, &members));
    }
}

/// Size of a largest antichain among `members`, by trying every subset.
fn max_antichain(l: &FiniteLattice, members: &[Elem]) -> usize {
    let n = members.len();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n)
                .all(|i| (0..n).all(|j| i == j || s >> i & 1 == 0 || s >> j & 1 == 0 || !l.leq(members[i], members[j])))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

#[test]
fn chain_cover_size_is_the_width() {
    for l in enumerate_distributive_lattices(8).unwrap() {
        let members = lambda_zero(&l);
        let idx: Vec<usize> = members.iter().map(|e| e.index()).collect();
        let cover = min_chain_cover(&l.poset().subposet(&idx));
        assert_eq!(cover.len(), max_antichain(&l, &members));
    }
}

#[test]
fn forbidden_sublattices_come_with_witnesses() {
    let m3 = FiniteLattice::m3();
    let w = m3.distributivity().witness.expect("M3 witness");
    assert_eq!(w.kind, ForbiddenSublattice::M3);
    let mut got: Vec<Elem> = w.elements.to_vec();
    got.sort();
    assert_eq!(got, elems(&m3));

    let n5 = FiniteLattice::n5();
    let w = n5.distributivity().witness.expect("N5 witness");
    assert_eq!(w.kind, ForbiddenSublattice::N5);
}

#[test]
fn m3_is_still_a_lattice_with_three_meet_irreducibles() {
    let m3 = FiniteLattice::m3();
    let names: Vec<&str> = meet_irreducibles(&m3).iter().map(|&e| m3.name(e)).collect();
    assert_eq!(names.len(), 3);
    assert!(!names.contains(&"0") && !names.contains(&"1"));
}

#[test]
fn distributive_enumeration_matches_filtering_all_lattices() {
    let all = enumerate_lattices(6).unwrap();
    let filtered: Vec<&FiniteLattice> = all.iter().filter(|l| distributive_by_triples(l)).collect();
    let direct = enumerate_distributive_lattices(6).unwrap();
    assert_eq!(filtered.len(), direct.len());
    for l in &direct {
        assert_eq!(filtered.iter().filter(|f| is_isomorphic(f, l)).count(), 1);
    }
}

#[test]
fn small_distributive_lattices_by_size() {
    let four = enumerate_distributive_lattices(4).unwrap();
    assert_eq!(four.len(), 4);
    let five = enumerate_distributive_lattices(5).unwrap();
    assert_eq!(five.iter().filter(|l| l.len() == 5).count(), 3);
}

#[test]
fn lattice_counts_by_size() {
    // unlabelled lattices on 2..=7 elements: 1, 1, 2, 5, 15, 53
    let all = enumerate_lattices(7).unwrap();
    let counts: Vec<usize> = (2..=7).map(|n| all.iter().filter(|l| l.len() == n).count()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 15, 53]);
}

#[test]
fn three_chain_bounds() {
    let b = dimension_bounds(&FiniteLattice::chain(3)).unwrap();
    assert_eq!((b.lower, b.upper), (2, 2));
}

#[test]
fn boolean_square_with_new_top_needs_at_least_four_orders() {
    // B2 ⊕ 1: Λ₀ = {a, b, m} with a, b < m
    let l = FiniteLattice::from_covers(
        ["0", "a", "b", "m", "1"].map(String::from).to_vec(),
        &[("0", "a"), ("0", "b"), ("a", "m"), ("b", "m"), ("m", "1")].map(|(x, y)| (x.into(), y.into())),
    )
    .unwrap();
    let b = dimension_bounds(&l).unwrap();
    assert_eq!(b.width, 2);
    assert_eq!(b.lower, 4);
    assert!(b.upper >= 4);
}
