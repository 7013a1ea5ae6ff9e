//! Finite approximations of generic ordered Λ-ultrametric structures.
//!
//! A [`OnePointType`] describes a fresh point over a finite set `A`: its
//! distance to each point of `A`, and for each subquotient order its
//! position among the classes of `A` it can be compared with. Structures are
//! grown one realized type at a time ([`realize_type`], [`generate_generic`])
//! and judged by how many small types they realize
//! ([`extension_property_check`], [`homogeneity_check`]).

mod checks;
mod generate;

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::sqorder::{OrderedLambdaStructure, RankKey, SubquotientOrder};
use crate::ultrametric::{cross_distance, PointId};
use crate::Rng;

pub use checks::{
    cross_cutting_check, extension_property_check, homogeneity_check, pair_type_count, relation_distinctness,
    CrossCuttingFailure, ExtensionReport, HomogeneityFailure, HomogeneityReport, MissingType, RelationReport,
};
pub use generate::{generate_generic, Generated, GenerationConfig, SaturationReport};

/// A complete one-point type over a subset of a structure.
///
/// `over` holds point indices (sorted). `positions[i]` is present exactly when
/// the point is `top_i`-related to some point of `A` but `bottom_i`-related to
/// none; it then counts the distinct ranks of those points lying below the
/// new point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OnePointType {
    pub over: Vec<usize>,
    pub distances: Vec<Elem>,
    pub positions: Vec<Option<u32>>,
}

/// Ranks (sorted, distinct) of the points of `A` within `o`'s class that a
/// point with distances `dist` would be comparable with; `None` when the
/// point falls into an existing bottom class.
fn relevant_ranks(lat: &FiniteLattice, o: &SubquotientOrder, over: &[usize], dist: &[Elem]) -> Option<Vec<u32>> {
    if dist.iter().any(|&d| lat.leq(d, o.bottom())) {
        return None;
    }
    let mut ranks: Vec<u32> =
        over.iter().zip(dist).filter(|&(_, &d)| lat.leq(d, o.top())).map(|(&a, _)| o.key(a).rank).collect();
    if ranks.is_empty() {
        return None;
    }
    ranks.sort_unstable();
    ranks.dedup();
    Some(ranks)
}

fn check_subset(s: &OrderedLambdaStructure, over: &[usize]) -> Result<()> {
    if over.windows(2).any(|w| w[0] >= w[1]) || over.last().is_some_and(|&a| a >= s.len()) {
        return Err(Error::InconsistentType("base must be sorted, distinct point indices".into()));
    }
    Ok(())
}

/// Whether `dist` (a candidate distance vector to `over`) is nonzero and
/// satisfies the triangle inequality with the distances inside `over`.
fn distances_consistent(s: &OrderedLambdaStructure, over: &[usize], dist: &[Elem]) -> bool {
    let lat = s.space.lattice();
    if dist.iter().any(|&d| d == lat.bottom()) {
        return false;
    }
    for (i, &a) in over.iter().enumerate() {
        for (j, &b) in over.iter().enumerate().skip(i + 1) {
            let dab = s.space.dist(a, b);
            let (x, y) = (dist[i], dist[j]);
            if !lat.leq(x, lat.join(y, dab)) || !lat.leq(y, lat.join(x, dab)) || !lat.leq(dab, lat.join(x, y)) {
                return false;
            }
        }
    }
    true
}

/// Every distance vector to `over` that a fresh point could have.
fn distance_vectors(s: &OrderedLambdaStructure, over: &[usize]) -> Vec<Vec<Elem>> {
    let lat = s.space.lattice();
    let nonzero: Vec<Elem> = lat.elements().filter(|&e| e != lat.bottom()).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(over.len());
    fn rec(
        s: &OrderedLambdaStructure,
        over: &[usize],
        nonzero: &[Elem],
        current: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let k = current.len();
        if k == over.len() {
            out.push(current.clone());
            return;
        }
        let lat = s.space.lattice();
        for &v in nonzero {
            let ok = (0..k).all(|j| {
                let dab = s.space.dist(over[k], over[j]);
                let w = current[j];
                lat.leq(v, lat.join(w, dab)) && lat.leq(w, lat.join(v, dab)) && lat.leq(dab, lat.join(v, w))
            });
            if ok {
                current.push(v);
                rec(s, over, nonzero, current, out);
                current.pop();
            }
        }
    }
    rec(s, over, &nonzero, &mut current, &mut out);
    out
}

/// All consistent one-point types over the points at indices `over`
/// (sorted, distinct), in lexicographic order of distances then positions.
pub fn enumerate_one_point_types(s: &OrderedLambdaStructure, over: &[usize]) -> Result<Vec<OnePointType>> {
    check_subset(s, over)?;
    let lat = s.space.lattice();
    let mut out = Vec::new();
    for dist in distance_vectors(s, over) {
        let choices: Vec<Option<u32>> =
            s.orders.iter().map(|o| relevant_ranks(lat, o, over, &dist).map(|r| r.len() as u32)).collect();
        let mut positions = Vec::with_capacity(choices.len());
        push_positions(over, &dist, &choices, &mut positions, &mut out);
    }
    Ok(out)
}

fn push_positions(
    over: &[usize],
    dist: &[Elem],
    choices: &[Option<u32>],
    positions: &mut Vec<Option<u32>>,
    out: &mut Vec<OnePointType>,
) {
    let i = positions.len();
    if i == choices.len() {
        out.push(OnePointType { over: over.to_vec(), distances: dist.to_vec(), positions: positions.clone() });
        return;
    }
    match choices[i] {
        None => {
            positions.push(None);
            push_positions(over, dist, choices, positions, out);
            positions.pop();
        }
        Some(max) => {
            for g in 0..=max {
                positions.push(Some(g));
                push_positions(over, dist, choices, positions, out);
                positions.pop();
            }
        }
    }
}

/// Number of consistent one-point types over `over`, without listing them.
pub fn count_one_point_types(s: &OrderedLambdaStructure, over: &[usize]) -> Result<u64> {
    check_subset(s, over)?;
    let lat = s.space.lattice();
    Ok(distance_vectors(s, over)
        .iter()
        .map(|dist| {
            s.orders
                .iter()
                .map(|o| relevant_ranks(lat, o, over, dist).map_or(1, |r| r.len() as u64 + 1))
                .product::<u64>()
        })
        .sum())
}

/// The type of the point at index `x` over `over` (`x ∉ over`).
pub fn type_of(s: &OrderedLambdaStructure, over: &[usize], x: usize) -> OnePointType {
    let lat = s.space.lattice();
    let distances: Vec<Elem> = over.iter().map(|&a| s.space.dist(x, a)).collect();
    let positions = s
        .orders
        .iter()
        .map(|o| {
            relevant_ranks(lat, o, over, &distances)
                .map(|ranks| ranks.iter().filter(|&&r| r < o.key(x).rank).count() as u32)
        })
        .collect();
    OnePointType { over: over.to_vec(), distances, positions }
}

/// Checks that every order has a meet-irreducible bottom relation and the
/// lattice is distributive: the conditions under which one-point types can be
/// realized without merging classes.
pub(crate) fn check_realizable_signature(lat: &FiniteLattice, orders: &[(Elem, Elem)]) -> Result<()> {
    if let Some(w) = lat.distributivity().witness {
        return Err(Error::NonDistributive(w));
    }
    for &(bottom, top) in orders {
        if !lat.leq(bottom, top) {
            return Err(Error::InvalidConfig(format!(
                "order bottom `{}` is not below its top `{}`",
                lat.name(bottom),
                lat.name(top)
            )));
        }
        if !lat.is_meet_irreducible(bottom) {
            return Err(Error::MeetReducibleBottom(lat.name(bottom).into()));
        }
    }
    Ok(())
}

fn check_type(s: &OrderedLambdaStructure, t: &OnePointType) -> Result<()> {
    check_subset(s, &t.over)?;
    let lat = s.space.lattice();
    if t.distances.len() != t.over.len() || t.positions.len() != s.orders.len() {
        return Err(Error::InconsistentType("length does not match base or signature".into()));
    }
    if !distances_consistent(s, &t.over, &t.distances) {
        return Err(Error::InconsistentType("distances violate the triangle inequality or are 0".into()));
    }
    for (i, (o, p)) in s.orders.iter().zip(&t.positions).enumerate() {
        let expected = relevant_ranks(lat, o, &t.over, &t.distances);
        match (expected, p) {
            (None, None) => {}
            (Some(r), Some(g)) if (*g as usize) <= r.len() => {}
            _ => {
                return Err(Error::InconsistentType(format!("position for order {i} is inconsistent")));
            }
        }
    }
    Ok(())
}

/// Adds a fresh point realizing `t` to `s` in place and returns its index.
///
/// Distances to points outside the base come from the canonical amalgam over
/// the base; ranks not fixed by the type are drawn uniformly from the
/// admissible insertion points.
pub(crate) fn realize_in_place(
    s: &mut OrderedLambdaStructure,
    t: &OnePointType,
    id: PointId,
    rng: &mut Rng,
) -> Result<usize> {
    let lat = s.space.lattice().clone();
    let sig: Vec<(Elem, Elem)> = s.orders.iter().map(|o| (o.bottom(), o.top())).collect();
    check_realizable_signature(&lat, &sig)?;
    check_type(s, t)?;
    if s.space.index_of(id).is_some() {
        return Err(Error::PointCollision(id));
    }

    let n = s.len();
    let mut row = vec![lat.bottom(); n];
    for (&a, &d) in t.over.iter().zip(&t.distances) {
        row[a] = d;
    }
    let mut base_dists = vec![lat.bottom(); t.over.len()];
    for (b, slot) in row.iter_mut().enumerate() {
        if t.over.binary_search(&b).is_ok() {
            continue;
        }
        for (k, &a) in t.over.iter().enumerate() {
            base_dists[k] = s.space.dist(a, b);
        }
        let d = cross_distance(&lat, &t.distances, &base_dists);
        if d == lat.bottom() {
            return Err(Error::ForcedIdentification(s.space.points()[b]));
        }
        *slot = d;
    }

    for (o, pos) in s.orders.iter_mut().zip(&t.positions) {
        let key = place(&lat, o, &row, &t.over, *pos, rng);
        o.keys_mut().push(key);
    }
    s.space.push_point(id, &row);
    Ok(n)
}

/// Chooses the key of a new point with distances `row` in order `o`, shifting
/// existing ranks to make room.
fn place(
    lat: &FiniteLattice,
    o: &mut SubquotientOrder,
    row: &[Elem],
    over: &[usize],
    pos: Option<u32>,
    rng: &mut Rng,
) -> RankKey {
    if let Some(b) = row.iter().position(|&d| lat.leq(d, o.bottom())) {
        return o.key(b);
    }
    let Some(b) = row.iter().position(|&d| lat.leq(d, o.top())) else {
        let scale = o.keys().iter().map(|k| k.scale + 1).max().unwrap_or(0);
        return RankKey { scale, rank: 0 };
    };
    let scale = o.key(b).scale;
    let m = o.keys().iter().filter(|k| k.scale == scale).map(|k| k.rank + 1).max().unwrap_or(0);
    let (mut lo, mut hi) = (0, m);
    if let Some(g) = pos {
        let dist: Vec<Elem> = over.iter().map(|&a| row[a]).collect();
        let ranks = relevant_ranks(lat, o, over, &dist).expect("position implies relevant points");
        let g = g as usize;
        if g > 0 {
            lo = ranks[g - 1] + 1;
        }
        if g < ranks.len() {
            hi = ranks[g];
        }
    }
    let p = rng.random_range(lo..=hi);
    for k in o.keys_mut().iter_mut() {
        if k.scale == scale && k.rank >= p {
            k.rank += 1;
        }
    }
    RankKey { scale, rank: p }
}

/// A copy of `s` with one fresh point realizing `t`. The new point gets the
/// least id above all existing ids.
pub fn realize_type(s: &OrderedLambdaStructure, t: &OnePointType, rng: &mut Rng) -> Result<OrderedLambdaStructure> {
    let mut out = s.clone();
    let id = s.space.points().iter().map(|&p| p + 1).max().unwrap_or(0);
    realize_in_place(&mut out, t, id, rng)?;
    Ok(out)
}

/// The type over the empty set: a point unrelated to everything else.
pub fn empty_type(s: &OrderedLambdaStructure) -> OnePointType {
    OnePointType { over: Vec::new(), distances: Vec::new(), positions: vec![None; s.orders.len()] }
}
