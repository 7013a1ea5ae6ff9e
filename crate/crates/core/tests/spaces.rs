//! Ultrametric spaces, equivalence systems and canonical amalgamation,
//! checked against direct enumeration.

use std::ops::ControlFlow;
use std::sync::Arc;

use permlat_core::lattice::{enumerate_distributive_lattices, enumerate_lattices};
use permlat_core::ultrametric::{
    canonical_amalgam, equivalences_from_space, space_from_equivalences, sweep_amalgam_instances,
    validate_equivalences, validate_space,
};
use permlat_core::{Elem, FiniteLattice, LambdaSpace};
use proptest::prelude::*;

mod common;

/// Valid spaces of up to five points over lattices of at most five elements.
fn space_strategy() -> impl Strategy<Value = LambdaSpace> {
    let lattices: Vec<Arc<FiniteLattice>> = enumerate_lattices(5).unwrap().into_iter().map(Arc::new).collect();
    (0..lattices.len(), 1usize..=5, proptest::collection::vec(any::<u8>(), 10))
        .prop_filter_map("distance zero between distinct points", move |(li, n, raw)| {
            common::space_from_bytes(lattices[li].clone(), n, &raw)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn space_to_equivalences_and_back_is_the_identity(s in space_strategy()) {
        let e = equivalences_from_space(&s);
        prop_assert!(validate_equivalences(&e).is_empty());
        prop_assert_eq!(space_from_equivalences(&e), s);
    }

    #[test]
    fn partitions_refine_along_the_order(s in space_strategy()) {
        let lat = s.lattice().clone();
        for a in lat.elements() {
            let pa = s.partition(a);
            for b in lat.elements().filter(|&b| lat.leq(a, b)) {
                let pb = s.partition(b);
                for i in 0..s.len() {
                    for j in 0..s.len() {
                        prop_assert!(pa[i] != pa[j] || pb[i] == pb[j]);
                    }
                }
            }
        }
    }
}

#[test]
fn three_point_example_over_the_boolean_square() {
    let lat = Arc::new(FiniteLattice::boolean(2));
    let (a, b, top) = (lat.elem("a").unwrap(), lat.elem("b").unwrap(), lat.top());
    let s = LambdaSpace::from_fn(lat.clone(), vec![1, 2, 3], |i, j| match (i.min(j), i.max(j)) {
        (0, 1) => a,
        (1, 2) => b,
        _ => top,
    });
    assert!(validate_space(&s).is_valid());
    let classes = equivalences_from_space(&s).classes_of(a);
    assert_eq!(classes, vec![vec![1, 2], vec![3]]);
}

#[test]
fn equivalence_to_space_uses_the_least_relating_element() {
    let lat = Arc::new(FiniteLattice::chain(3));
    let e = lat.elem("e1").unwrap();
    let s = LambdaSpace::from_fn(lat.clone(), vec![1, 2, 3], |i, j| if i.max(j) == 1 { e } else { lat.top() });
    let back = space_from_equivalences(&equivalences_from_space(&s));
    assert_eq!(back.dist_by_id(1, 2), Some(e));
    assert_eq!(back.dist_by_id(1, 3), Some(lat.top()));
    assert_eq!(back.dist_by_id(2, 3), Some(lat.top()));
}

/// Every value of the single cross distance that gives a valid space.
fn valid_cross_values(lat: &Arc<FiniteLattice>, f1: &LambdaSpace, f2: &LambdaSpace) -> Vec<Elem> {
    let x = *f1.points().last().unwrap();
    let y = *f2.points().last().unwrap();
    let mut ids: Vec<u32> = f1.points().to_vec();
    ids.push(y);
    lat.elements()
        .filter(|&v| {
            let dist = |p: u32, q: u32| -> Elem {
                if p == q {
                    lat.bottom()
                } else if (p, q) == (x, y) || (p, q) == (y, x) {
                    v
                } else if p == y || q == y {
                    f2.dist_by_id(p, q).unwrap()
                } else {
                    f1.dist_by_id(p, q).unwrap()
                }
            };
            let s = LambdaSpace::from_fn(lat.clone(), ids.clone(), |i, j| dist(ids[i], ids[j]));
            s.is_valid()
        })
        .collect()
}

#[test]
fn canonical_amalgam_is_the_greatest_valid_completion() {
    for lat in enumerate_distributive_lattices(5).unwrap() {
        let lat = Arc::new(lat);
        let mut instances = 0;
        let _ = sweep_amalgam_instances(&lat, 2, &[(1, 1)], |base, f1, f2| {
            let a = canonical_amalgam(base, f1, f2).unwrap();
            assert!(a.space.is_valid());
            let x = *f1.points().last().unwrap();
            let y = *f2.points().last().unwrap();
            let options = valid_cross_values(&lat, f1, f2);
            if a.identified.is_empty() {
                let d = a.space.dist_by_id(x, y).unwrap();
                assert!(options.contains(&d));
                assert!(options.iter().all(|&v| lat.leq(v, d)));
            } else {
                // identification happens only when no distinct-point completion exists
                assert!(options.is_empty());
            }
            instances += 1;
            ControlFlow::Continue(())
        });
        assert!(instances > 0);
    }
}

#[test]
fn one_base_point_gives_the_join() {
    let lat = Arc::new(FiniteLattice::boolean(2));
    let (a, b) = (lat.elem("a").unwrap(), lat.elem("b").unwrap());
    let base = LambdaSpace::from_fn(lat.clone(), vec![0], |_, _| lat.bottom());
    let f1 = LambdaSpace::from_fn(lat.clone(), vec![0, 10], |i, j| if i == j { lat.bottom() } else { a });
    let f2 = LambdaSpace::from_fn(lat.clone(), vec![0, 20], |i, j| if i == j { lat.bottom() } else { b });
    let am = canonical_amalgam(&base, &f1, &f2).unwrap();
    assert_eq!(am.space.dist_by_id(10, 20), Some(lat.join(a, b)));
}

#[test]
fn mismatched_base_is_rejected() {
    let lat = Arc::new(FiniteLattice::chain(3));
    let e = lat.elem("e1").unwrap();
    let base = LambdaSpace::from_fn(lat.clone(), vec![0, 1], |i, j| if i == j { lat.bottom() } else { e });
    let f1 = LambdaSpace::from_fn(lat.clone(), vec![0, 1], |i, j| if i == j { lat.bottom() } else { lat.top() });
    assert!(canonical_amalgam(&base, &f1, &base).is_err());
}
