//! Subquotient orders: linear orders on the `E`-classes inside each `F`-class.
//!
//! An order from `E` to `F` (`E ≤ F`) is stored as one [`RankKey`] per point:
//! `scale` names the point's `F`-class and `rank` the position of its `E`-class
//! within that `F`-class. Two points are comparable iff they share a scale.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::ultrametric::{normalize_labels, LambdaSpace, PointId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RankKey {
    pub scale: u32,
    pub rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquotientOrder {
    bottom: Elem,
    top: Elem,
    keys: Vec<RankKey>,
}

impl SubquotientOrder {
    /// An order from `bottom` to `top` with the given per-point ranks (any
    /// integers; only their relative order within a `top`-class matters).
    /// Scales are taken from the `top` partition of `space`; nothing else is
    /// checked, see [`validate_sqorder`].
    pub fn from_ranks(space: &LambdaSpace, bottom: Elem, top: Elem, ranks: &[i64]) -> Result<Self> {
        if ranks.len() != space.len() {
            return Err(Error::Shape(format!("{} ranks for {} points", ranks.len(), space.len())));
        }
        let scales = space.partition(top);
        Ok(SubquotientOrder { bottom, top, keys: dense_keys(&scales, ranks) })
    }

    /// An ordinary linear order (from `0` to `1`): `order` lists point
    /// indices from least to greatest.
    pub fn linear(space: &LambdaSpace, order: &[usize]) -> Result<Self> {
        let lat = space.lattice();
        let mut ranks = vec![-1i64; space.len()];
        for (r, &i) in order.iter().enumerate() {
            if i >= ranks.len() || ranks[i] >= 0 {
                return Err(Error::Shape("not a permutation of the points".into()));
            }
            ranks[i] = r as i64;
        }
        if ranks.contains(&-1) {
            return Err(Error::Shape("not a permutation of the points".into()));
        }
        Self::from_ranks(space, lat.bottom(), lat.top(), &ranks)
    }

    /// Keys as given; used by code that maintains density itself.
    pub(crate) fn from_keys(bottom: Elem, top: Elem, keys: Vec<RankKey>) -> Self {
        SubquotientOrder { bottom, top, keys }
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn keys(&self) -> &[RankKey] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> RankKey {
        self.keys[i]
    }

    pub(crate) fn keys_mut(&mut self) -> &mut Vec<RankKey> {
        &mut self.keys
    }

    /// The pulled-back strict order on points.
    #[inline]
    pub fn less(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.keys[i], self.keys[j]);
        a.scale == b.scale && a.rank < b.rank
    }

    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.keys[i].scale == self.keys[j].scale && self.keys[i].rank != self.keys[j].rank
    }

    /// The same relation with every scale reversed.
    pub fn reversed(&self) -> Self {
        let mut max: BTreeMap<u32, u32> = BTreeMap::new();
        for k in &self.keys {
            let m = max.entry(k.scale).or_insert(0);
            *m = (*m).max(k.rank);
        }
        let keys = self.keys.iter().map(|k| RankKey { scale: k.scale, rank: max[&k.scale] - k.rank }).collect();
        SubquotientOrder { bottom: self.bottom, top: self.top, keys }
    }
}

/// Dense ranks within each scale, preserving ties and order.
fn dense_keys(scales: &[u32], ranks: &[i64]) -> Vec<RankKey> {
    let mut values: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
    for (&s, &r) in scales.iter().zip(ranks) {
        values.entry(s).or_default().push(r);
    }
    for v in values.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    scales
        .iter()
        .zip(ranks)
        .map(|(&scale, r)| RankKey { scale, rank: values[&scale].binary_search(r).expect("present") as u32 })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SqViolation {
    /// The order has a different number of keys than the space has points.
    Length {
        keys: usize,
        points: usize,
    },
    BottomAboveTop,
    /// Two points of one bottom class carry different keys.
    SplitClass {
        x: PointId,
        y: PointId,
    },
    /// Two points share a scale but lie in different top classes.
    CrossScale {
        x: PointId,
        y: PointId,
    },
    /// Two points of one top class carry different scales.
    SplitScale {
        x: PointId,
        y: PointId,
    },
    /// Two different bottom classes of one top class share a rank.
    Tie {
        x: PointId,
        y: PointId,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SqReport {
    pub bottom: String,
    pub top: String,
    pub violations: Vec<SqViolation>,
}

impl SqReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SqReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {} -> {}: ", self.bottom, self.top)?;
        if self.is_valid() {
            return write!(f, "valid");
        }
        write!(f, "{} violation(s):", self.violations.len())?;
        for v in self.violations.iter().take(8) {
            write!(f, " {v:?};")?;
        }
        Ok(())
    }
}

/// Checks that `o` is a subquotient order on `space`. Each offending pair is
/// reported once, at its lexicographically least pair of indices.
pub fn validate_sqorder(space: &LambdaSpace, o: &SubquotientOrder) -> SqReport {
    let lat = space.lattice();
    let mut report =
        SqReport { bottom: lat.name(o.bottom).to_string(), top: lat.name(o.top).to_string(), violations: Vec::new() };
    if o.keys.len() != space.len() {
        report.violations.push(SqViolation::Length { keys: o.keys.len(), points: space.len() });
        return report;
    }
    if !lat.leq(o.bottom, o.top) {
        report.violations.push(SqViolation::BottomAboveTop);
    }
    let id = |i: usize| space.points()[i];
    let n = space.len();
    for i in 0..n {
        for j in i + 1..n {
            let (ki, kj) = (o.keys[i], o.keys[j]);
            let same_top = space.related(o.top, i, j);
            let same_bottom = space.related(o.bottom, i, j);
            let (x, y) = (id(i), id(j));
            if same_bottom && ki != kj {
                report.violations.push(SqViolation::SplitClass { x, y });
            }
            if ki.scale == kj.scale && !same_top {
                report.violations.push(SqViolation::CrossScale { x, y });
            }
            if same_top && ki.scale != kj.scale {
                report.violations.push(SqViolation::SplitScale { x, y });
            }
            if same_top && !same_bottom && ki == kj {
                report.violations.push(SqViolation::Tie { x, y });
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictMode {
    /// `bottom ≤ g ≤ top`: the top is lowered to `g`.
    TopLowering,
    /// `g ≤ top` but `bottom ≰ g`: the result runs from `bottom ∧ g` to `g`.
    MeetCross,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub order: SubquotientOrder,
    pub mode: RestrictMode,
}

/// Keeps the comparabilities of `o` between points in a common `g`-class.
/// Defined when `g ≤ top`; the result is an order from `bottom ∧ g` to `g`.
pub fn restrict_to(space: &LambdaSpace, o: &SubquotientOrder, g: Elem) -> Result<Restriction> {
    let lat = space.lattice();
    if !lat.leq(g, o.top) {
        return Err(Error::UndefinedRestriction {
            bottom: lat.name(o.bottom).into(),
            top: lat.name(o.top).into(),
            g: lat.name(g).into(),
        });
    }
    let mode = if lat.leq(o.bottom, g) { RestrictMode::TopLowering } else { RestrictMode::MeetCross };
    let scales = space.partition(g);
    let ranks: Vec<i64> = o.keys.iter().map(|k| k.rank as i64).collect();
    let order = SubquotientOrder { bottom: lat.meet(o.bottom, g), top: g, keys: dense_keys(&scales, &ranks) };
    Ok(Restriction { order, mode })
}

/// Lexicographic composition: classes of `lo.top` are ordered by `hi`, and
/// inside each of them the `lo.bottom`-classes are ordered by `lo`.
pub fn compose_lex(space: &LambdaSpace, lo: &SubquotientOrder, hi: &SubquotientOrder) -> Result<SubquotientOrder> {
    let lat = space.lattice();
    if lo.top != hi.bottom {
        return Err(Error::TopBottomMismatch {
            lo_top: lat.name(lo.top).into(),
            hi_bottom: lat.name(hi.bottom).into(),
        });
    }
    if lo.keys.len() != space.len() || hi.keys.len() != space.len() {
        return Err(Error::Shape("order does not match the space".into()));
    }
    let width = space.len() as i64 + 1;
    let ranks: Vec<i64> = lo.keys.iter().zip(&hi.keys).map(|(l, h)| h.rank as i64 * width + l.rank as i64).collect();
    let scales: Vec<u32> = hi.keys.iter().map(|k| k.scale).collect();
    Ok(SubquotientOrder { bottom: lo.bottom, top: hi.top, keys: dense_keys(&normalize_labels(&scales), &ranks) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convexity {
    pub convex: bool,
    /// Least `(x, y, z)` (by point id) with `x < y < z`, `x g z`, not `x g y`.
    pub witness: Option<(PointId, PointId, PointId)>,
}

/// Whether every `g`-class is convex for `o`.
pub fn convexity_check(space: &LambdaSpace, o: &SubquotientOrder, g: Elem) -> Convexity {
    let n = space.len();
    let gl = space.partition(g);
    // fast path: in each scale, the g-labels read in rank order must be
    // contiguous runs
    let mut by_scale: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for i in 0..n {
        by_scale.entry(o.keys[i].scale).or_default().push((o.keys[i].rank, gl[i]));
    }
    let contiguous = by_scale.values_mut().all(|seq| {
        seq.sort_unstable();
        let mut closed = std::collections::HashSet::new();
        let mut current = None;
        for &(_, label) in seq.iter() {
            if current != Some(label) {
                if !closed.insert(label) {
                    return false;
                }
                current = Some(label);
            }
        }
        true
    });
    if contiguous {
        return Convexity { convex: true, witness: None };
    }
    let mut by_id: Vec<usize> = (0..n).collect();
    by_id.sort_by_key(|&i| space.points()[i]);
    for &x in &by_id {
        for &y in &by_id {
            if !o.less(x, y) && !o.less(y, x) || gl[x] == gl[y] {
                continue;
            }
            for &z in &by_id {
                if gl[x] == gl[z] && (o.less(x, y) && o.less(y, z) || o.less(z, y) && o.less(y, x)) {
                    let id = |i: usize| space.points()[i];
                    return Convexity { convex: false, witness: Some((id(x), id(y), id(z))) };
                }
            }
        }
    }
    unreachable!("non-contiguous run implies an interleaving triple")
}

/// Splits an `e`-convex order into its part within `e`-classes (from the
/// bottom to `e`) and the order it induces between `e`-classes (from `e` to
/// the top). [`compose_lex`] of the two gives back `o`.
pub fn split_convex_linear(
    space: &LambdaSpace,
    o: &SubquotientOrder,
    e: Elem,
) -> Result<(SubquotientOrder, SubquotientOrder)> {
    let lat = space.lattice();
    if !lat.leq(o.bottom, e) || !lat.leq(e, o.top) {
        return Err(Error::UndefinedRestriction {
            bottom: lat.name(o.bottom).into(),
            top: lat.name(o.top).into(),
            g: lat.name(e).into(),
        });
    }
    let c = convexity_check(space, o, e);
    if let Some(witness) = c.witness {
        return Err(Error::NotConvex { relation: lat.name(e).into(), witness });
    }
    let within = restrict_to(space, o, e)?.order;
    // a block is ranked by the least rank of its members
    let el = space.partition(e);
    let mut least: BTreeMap<u32, u32> = BTreeMap::new();
    for (i, k) in o.keys.iter().enumerate() {
        let m = least.entry(el[i]).or_insert(u32::MAX);
        *m = (*m).min(k.rank);
    }
    let ranks: Vec<i64> = el.iter().map(|l| least[l] as i64).collect();
    let scales: Vec<u32> = o.keys.iter().map(|k| k.scale).collect();
    let between = SubquotientOrder { bottom: e, top: o.top, keys: dense_keys(&scales, &ranks) };
    Ok((within, between))
}

/// A space decorated with subquotient orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedLambdaStructure {
    pub space: LambdaSpace,
    pub orders: Vec<SubquotientOrder>,
}

impl OrderedLambdaStructure {
    /// Validates the space and every order.
    pub fn new(space: LambdaSpace, orders: Vec<SubquotientOrder>) -> Result<Self> {
        if !space.is_valid() {
            return Err(Error::InvalidSpace(crate::ultrametric::validate_space(&space)));
        }
        for o in &orders {
            let r = validate_sqorder(&space, o);
            if !r.is_valid() {
                return Err(Error::InvalidOrder(r));
            }
        }
        Ok(OrderedLambdaStructure { space, orders })
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Reports for every order, in signature order.
    pub fn validate(&self) -> Vec<SqReport> {
        self.orders.iter().map(|o| validate_sqorder(&self.space, o)).collect()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::FiniteLattice;

    /// Points 0..n of the 3-chain, `e1`-classes given by `blocks`.
    fn blocks(labels: &[u32]) -> LambdaSpace {
        let lat = Arc::new(FiniteLattice::chain(3));
        let e = lat.elem("e1").unwrap();
        let n = labels.len();
        LambdaSpace::from_fn(lat.clone(), (0..n as PointId).collect(), |i, j| {
            if labels[i] == labels[j] {
                e
            } else {
                lat.top()
            }
        })
    }

    #[test]
    fn linear_order_is_valid() {
        let s = blocks(&[0, 0, 1, 1]);
        let o = SubquotientOrder::linear(&s, &[3, 1, 0, 2]).unwrap();
        assert!(validate_sqorder(&s, &o).is_valid());
        assert!(o.less(3, 1) && o.less(0, 2) && !o.less(2, 3));
    }

    #[test]
    fn cross_class_comparability_is_invalid() {
        let s = blocks(&[0, 0, 1, 1]);
        let lat = s.lattice().clone();
        let e = lat.elem("e1").unwrap();
        // from 0 to e1 but a single scale for everything
        let o = SubquotientOrder::from_keys(lat.bottom(), e, (0..4).map(|r| RankKey { scale: 0, rank: r }).collect());
        let r = validate_sqorder(&s, &o);
        assert!(r.violations.contains(&SqViolation::CrossScale { x: 0, y: 2 }));
    }

    #[test]
    fn tie_and_split_are_reported() {
        let s = blocks(&[0, 0, 1, 1]);
        let lat = s.lattice().clone();
        let e = lat.elem("e1").unwrap();
        let tie = SubquotientOrder::from_ranks(&s, lat.bottom(), lat.top(), &[0, 0, 1, 2]).unwrap();
        assert_eq!(validate_sqorder(&s, &tie).violations, vec![SqViolation::Tie { x: 0, y: 1 }]);
        let split = SubquotientOrder::from_ranks(&s, e, lat.top(), &[0, 1, 2, 2]).unwrap();
        assert_eq!(validate_sqorder(&s, &split).violations, vec![SqViolation::SplitClass { x: 0, y: 1 }]);
    }

    #[test]
    fn decreasing_sequence_of_increasing_sequences() {
        // blocks {0,1} and {2,3}; within blocks increasing, blocks reversed
        let s = blocks(&[0, 0, 1, 1]);
        let lat = s.lattice().clone();
        let e = lat.elem("e1").unwrap();
        let lo = SubquotientOrder::from_ranks(&s, lat.bottom(), e, &[0, 1, 0, 1]).unwrap();
        let hi = SubquotientOrder::from_ranks(&s, e, lat.top(), &[1, 1, 0, 0]).unwrap();
        let o = compose_lex(&s, &lo, &hi).unwrap();
        let expected = SubquotientOrder::linear(&s, &[2, 3, 0, 1]).unwrap();
        assert_eq!(o, expected);
        assert!(convexity_check(&s, &o, e).convex);
    }

    #[test]
    fn compose_requires_matching_levels() {
        let s = blocks(&[0, 1]);
        let o = SubquotientOrder::linear(&s, &[0, 1]).unwrap();
        assert!(matches!(compose_lex(&s, &o, &o), Err(Error::TopBottomMismatch { .. })));
    }

    #[test]
    fn split_and_recompose() {
        let s = blocks(&[0, 1, 0, 1, 2]);
        let e = s.lattice().elem("e1").unwrap();
        let o = SubquotientOrder::linear(&s, &[4, 1, 3, 0, 2]).unwrap();
        let (within, between) = split_convex_linear(&s, &o, e).unwrap();
        assert!(validate_sqorder(&s, &within).is_valid());
        assert!(validate_sqorder(&s, &between).is_valid());
        assert_eq!(compose_lex(&s, &within, &between).unwrap(), o);
    }

    #[test]
    fn non_convex_split_has_witness() {
        let s = blocks(&[0, 1, 0]);
        let e = s.lattice().elem("e1").unwrap();
        let o = SubquotientOrder::linear(&s, &[0, 1, 2]).unwrap();
        match split_convex_linear(&s, &o, e) {
            Err(Error::NotConvex { witness, .. }) => assert_eq!(witness, (0, 1, 2)),
            other => panic!("expected NotConvex, got {other:?}"),
        }
    }

    #[test]
    fn restriction_to_top_is_identity() {
        let s = blocks(&[0, 1, 0]);
        let o = SubquotientOrder::linear(&s, &[2, 0, 1]).unwrap();
        let r = restrict_to(&s, &o, s.lattice().top()).unwrap();
        assert_eq!(r.order, o);
        assert_eq!(r.mode, RestrictMode::TopLowering);
    }

    #[test]
    fn restriction_above_top_is_undefined() {
        let s = blocks(&[0, 1, 0]);
        let lat = s.lattice().clone();
        let e = lat.elem("e1").unwrap();
        let o = SubquotientOrder::from_ranks(&s, lat.bottom(), e, &[0, 0, 1]).unwrap();
        assert!(matches!(restrict_to(&s, &o, lat.top()), Err(Error::UndefinedRestriction { .. })));
    }

    #[test]
    fn meet_cross_restriction_on_boolean_square() {
        // points (i, j) with i < 4, j < 2: a-classes fix i, b-classes fix j
        let lat = Arc::new(FiniteLattice::boolean(2));
        let (a, b) = (lat.elem("a").unwrap(), lat.elem("b").unwrap());
        let coords: Vec<(u32, u32)> = (0..8).map(|k| (k / 2, k % 2)).collect();
        let s = LambdaSpace::from_fn(lat.clone(), (0..8).collect(), |i, j| {
            let (p, q) = (coords[i], coords[j]);
            if p.0 == q.0 {
                a
            } else if p.1 == q.1 {
                b
            } else {
                lat.top()
            }
        });
        assert!(s.is_valid());
        // order from a to a ∨ b = 1: a-classes ranked by i
        let ranks: Vec<i64> = coords.iter().map(|c| c.0 as i64).collect();
        let o = SubquotientOrder::from_ranks(&s, a, lat.join(a, b), &ranks).unwrap();
        assert!(validate_sqorder(&s, &o).is_valid());
        let r = restrict_to(&s, &o, b).unwrap();
        assert_eq!(r.mode, RestrictMode::MeetCross);
        assert_eq!(r.order.bottom(), lat.bottom());
        assert!(validate_sqorder(&s, &r.order).is_valid());
        for i in 0..8 {
            for j in 0..8 {
                let expected = o.less(i, j) && s.related(b, i, j);
                assert_eq!(r.order.less(i, j), expected);
            }
        }
    }
}
