//! Lattice-valued ultrametric spaces.
//!
//! A space assigns to every pair of points an element of a fixed lattice `Λ`,
//! with `d(x, x) = 0`, symmetry, `d(x, y) = 0` only for `x = y`, and the
//! join-triangle inequality `d(x, z) ≤ d(x, y) ∨ d(y, z)`. Equivalently, the
//! space is a family of equivalence relations `E_λ = {d ≤ λ}` indexed by `Λ`.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

pub type PointId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSpace {
    lattice: Arc<FiniteLattice>,
    points: Vec<PointId>,
    d: Vec<Elem>,
}

impl LambdaSpace {
    /// A space from a row-major distance matrix. Only the shape is checked;
    /// use [`validate_space`] for the metric axioms.
    pub fn new(lattice: Arc<FiniteLattice>, points: Vec<PointId>, d: Vec<Elem>) -> Result<Self> {
        let n = points.len();
        if d.len() != n * n {
            return Err(Error::Shape(format!("distance matrix must have {} entries", n * n)));
        }
        if d.iter().any(|e| e.index() >= lattice.len()) {
            return Err(Error::Shape("distance outside the lattice".into()));
        }
        Ok(LambdaSpace { lattice, points, d })
    }

    /// A space with `d(i, j) = dist(i, j)` for `i ≠ j` (by index) and `0` on
    /// the diagonal.
    pub fn from_fn(
        lattice: Arc<FiniteLattice>,
        points: Vec<PointId>,
        mut dist: impl FnMut(usize, usize) -> Elem,
    ) -> Self {
        let n = points.len();
        let bottom = lattice.bottom();
        let d = (0..n * n).map(|k| if k / n == k % n { bottom } else { dist(k / n, k % n) }).collect();
        LambdaSpace { lattice, points, d }
    }

    pub fn empty(lattice: Arc<FiniteLattice>) -> Self {
        LambdaSpace { lattice, points: Vec::new(), d: Vec::new() }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance between the points at indices `i` and `j`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> Elem {
        self.d[i * self.points.len() + j]
    }

    pub fn index_of(&self, id: PointId) -> Option<usize> {
        self.points.iter().position(|&p| p == id)
    }

    /// Distance between two points given by id.
    pub fn dist_by_id(&self, a: PointId, b: PointId) -> Option<Elem> {
        Some(self.dist(self.index_of(a)?, self.index_of(b)?))
    }

    /// Whether the points at `i` and `j` are `E_λ`-related.
    #[inline]
    pub fn related(&self, lambda: Elem, i: usize, j: usize) -> bool {
        self.lattice.leq(self.dist(i, j), lambda)
    }

    /// Class labels of `E_λ`, numbered by first occurrence.
    pub fn partition(&self, lambda: Elem) -> Vec<u32> {
        let n = self.len();
        let mut labels = vec![u32::MAX; n];
        let mut next = 0;
        for i in 0..n {
            if labels[i] != u32::MAX {
                continue;
            }
            for j in i..n {
                if labels[j] == u32::MAX && self.related(lambda, i, j) {
                    labels[j] = next;
                }
            }
            next += 1;
        }
        labels
    }

    /// Appends a point with the given distances to the existing points.
    pub fn push_point(&mut self, id: PointId, dists: &[Elem]) {
        let n = self.len();
        assert_eq!(dists.len(), n);
        let mut d = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..n {
            d.extend_from_slice(&self.d[i * n..(i + 1) * n]);
            d.push(dists[i]);
        }
        d.extend_from_slice(dists);
        d.push(self.lattice.bottom());
        self.d = d;
        self.points.push(id);
    }

    /// The subspace on the given indices, in that order.
    pub fn restrict(&self, indices: &[usize]) -> LambdaSpace {
        let points = indices.iter().map(|&i| self.points[i]).collect();
        LambdaSpace::from_fn(self.lattice.clone(), points, |a, b| self.dist(indices[a], indices[b]))
    }

    /// Fast validity check; see [`validate_space`] for the itemised report.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        let lat = &*self.lattice;
        let bottom = lat.bottom();
        for i in 0..n {
            if self.dist(i, i) != bottom || self.points[..i].contains(&self.points[i]) {
                return false;
            }
            for j in 0..n {
                if i != j && (self.dist(i, j) == bottom || self.dist(i, j) != self.dist(j, i)) {
                    return false;
                }
            }
        }
        triangles_hold(lat, n, |i, j| self.dist(i, j))
    }
}

/// Join-triangle inequality over all triples of distinct indices.
fn triangles_hold(lat: &FiniteLattice, n: usize, d: impl Fn(usize, usize) -> Elem) -> bool {
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            let dxy = d(x, y);
            for z in 0..n {
                if z != x && z != y && !lat.leq(d(x, z), lat.join(dxy, d(y, z))) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceViolation {
    DuplicatePoint {
        x: PointId,
    },
    NonZeroDiagonal {
        x: PointId,
    },
    Asymmetric {
        x: PointId,
        y: PointId,
    },
    /// Distinct points at distance `0`.
    ZeroDistance {
        x: PointId,
        y: PointId,
    },
    /// `d(x, z) ≰ d(x, y) ∨ d(y, z)`.
    Triangle {
        x: PointId,
        y: PointId,
        z: PointId,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    pub points: usize,
    pub violations: Vec<SpaceViolation>,
}

impl SpaceReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid space on {} points", self.points);
        }
        write!(f, "{} violation(s):", self.violations.len())?;
        for v in self.violations.iter().take(8) {
            write!(f, " {v:?};")?;
        }
        Ok(())
    }
}

/// Itemised check of the metric axioms.
pub fn validate_space(s: &LambdaSpace) -> SpaceReport {
    let n = s.len();
    let lat = &*s.lattice;
    let id = |i: usize| s.points[i];
    let mut violations = Vec::new();
    for i in 0..n {
        if s.points[..i].contains(&s.points[i]) {
            violations.push(SpaceViolation::DuplicatePoint { x: id(i) });
        }
        if s.dist(i, i) != lat.bottom() {
            violations.push(SpaceViolation::NonZeroDiagonal { x: id(i) });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if s.dist(i, j) != s.dist(j, i) {
                violations.push(SpaceViolation::Asymmetric { x: id(i), y: id(j) });
            }
            if s.dist(i, j) == lat.bottom() || s.dist(j, i) == lat.bottom() {
                violations.push(SpaceViolation::ZeroDistance { x: id(i), y: id(j) });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z {
                    continue;
                }
                if !lat.leq(s.dist(x, z), lat.join(s.dist(x, y), s.dist(y, z))) {
                    violations.push(SpaceViolation::Triangle { x: id(x), y: id(y), z: id(z) });
                }
            }
        }
    }
    SpaceReport { points: n, violations }
}

/// The equivalence relations `{E_λ}` of a space, one partition per lattice
/// element (indexed by element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceSystem {
    lattice: Arc<FiniteLattice>,
    points: Vec<PointId>,
    classes: Vec<Vec<u32>>,
}

impl EquivalenceSystem {
    /// `classes[λ][i]` is the class label of point `i` under `E_λ`; labels are
    /// renumbered by first occurrence.
    pub fn new(lattice: Arc<FiniteLattice>, points: Vec<PointId>, classes: Vec<Vec<u32>>) -> Result<Self> {
        if classes.len() != lattice.len() || classes.iter().any(|c| c.len() != points.len()) {
            return Err(Error::Shape("one partition of all points per lattice element".into()));
        }
        let classes = classes.iter().map(|c| normalize_labels(c)).collect();
        Ok(EquivalenceSystem { lattice, points, classes })
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn partition(&self, lambda: Elem) -> &[u32] {
        &self.classes[lambda.index()]
    }

    /// Classes of `E_λ` as sorted lists of point ids.
    pub fn classes_of(&self, lambda: Elem) -> Vec<Vec<PointId>> {
        let labels = self.partition(lambda);
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count as usize];
        for (i, &l) in labels.iter().enumerate() {
            out[l as usize].push(self.points[i]);
        }
        out
    }
}

/// Renumbers labels by first occurrence.
pub fn normalize_labels(labels: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len() as u32;
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Common refinement of two partitions.
fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let pairs: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| x << 16 | y).collect();
    normalize_labels(&pairs)
}

fn refines(fine: &[u32], coarse: &[u32]) -> bool {
    let n = fine.len();
    (0..n).all(|i| (i + 1..n).all(|j| fine[i] != fine[j] || coarse[i] == coarse[j]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceViolation {
    BottomNotDiscrete,
    TopNotTrivial,
    NotMonotone { lower: String, upper: String },
    NotMeetPreserving { a: String, b: String },
}

/// Checks that `λ ↦ E_λ` is meet-preserving (hence monotone) and sends `0`
/// to equality and `1` to the trivial relation.
pub fn validate_equivalences(e: &EquivalenceSystem) -> Vec<EquivalenceViolation> {
    let lat = &*e.lattice;
    let n = e.points.len();
    let mut out = Vec::new();
    let bottom = e.partition(lat.bottom());
    if (0..n).any(|i| (i + 1..n).any(|j| bottom[i] == bottom[j])) {
        out.push(EquivalenceViolation::BottomNotDiscrete);
    }
    if e.partition(lat.top()).iter().any(|&l| l != 0) {
        out.push(EquivalenceViolation::TopNotTrivial);
    }
    for a in lat.elements() {
        for b in lat.elements() {
            if a != b && lat.leq(a, b) && !refines(e.partition(a), e.partition(b)) {
                out.push(EquivalenceViolation::NotMonotone { lower: lat.name(a).into(), upper: lat.name(b).into() });
            }
            if a < b && e.partition(lat.meet(a, b)) != intersect(e.partition(a), e.partition(b)) {
                out.push(EquivalenceViolation::NotMeetPreserving { a: lat.name(a).into(), b: lat.name(b).into() });
            }
        }
    }
    out
}

/// `E_λ = {(x, y) | d(x, y) ≤ λ}` for every `λ`.
pub fn equivalences_from_space(s: &LambdaSpace) -> EquivalenceSystem {
    let classes = s.lattice.elements().map(|l| s.partition(l)).collect();
    EquivalenceSystem { lattice: s.lattice.clone(), points: s.points.clone(), classes }
}

/// `d(x, y) = ⋀ {λ | x E_λ y}`. The result is a valid space whenever the
/// system passes [`validate_equivalences`].
pub fn space_from_equivalences(e: &EquivalenceSystem) -> LambdaSpace {
    let lat = e.lattice.clone();
    LambdaSpace::from_fn(lat.clone(), e.points.clone(), |i, j| {
        lat.meet_all(lat.elements().filter(|l| {
            let p = e.partition(*l);
            p[i] == p[j]
        }))
    })
}

/// Result of [`canonical_amalgam`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgam {
    pub space: LambdaSpace,
    /// `(p2, p1)`: point `p2` of the second factor was identified with point
    /// `p1` of the first because their canonical distance is `0`.
    pub identified: Vec<(PointId, PointId)>,
}

/// Canonical distance between two new points, one from each factor, given
/// their distances to the shared base points (in the same order):
/// `⋀_c (d(a, c) ∨ d(c, b))`, or `1` over an empty base.
#[inline]
pub fn cross_distance(lat: &FiniteLattice, to_base_a: &[Elem], to_base_b: &[Elem]) -> Elem {
    to_base_a.iter().zip(to_base_b).fold(lat.top(), |acc, (&x, &y)| lat.meet(acc, lat.join(x, y)))
}

/// Amalgamates `f1` and `f2` over their common subspace `base`.
///
/// Cross distances are the greatest values allowed by the triangle inequality
/// through base points; every valid completion lies below them pointwise. When
/// a cross distance comes out as `0` the two points are identified (this only
/// happens when `0` is meet-reducible). Over a distributive lattice the result
/// is a valid space restricting to both factors.
pub fn canonical_amalgam(base: &LambdaSpace, f1: &LambdaSpace, f2: &LambdaSpace) -> Result<Amalgam> {
    let lat = base.lattice.clone();
    if *f1.lattice != *lat || *f2.lattice != *lat {
        return Err(Error::LatticeMismatch);
    }
    if let Some(w) = lat.distributivity().witness {
        return Err(Error::NonDistributive(w));
    }
    for (which, s) in [("base", base), ("first", f1), ("second", f2)] {
        if !s.is_valid() {
            return Err(Error::InvalidFactor { which, report: validate_space(s) });
        }
    }
    let embed = |f: &LambdaSpace| -> Result<Vec<usize>> {
        let idx = base
            .points
            .iter()
            .map(|&p| f.index_of(p).ok_or(Error::EmbeddingMismatch(p)))
            .collect::<Result<Vec<_>>>()?;
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                if f.dist(ia, ib) != base.dist(a, b) {
                    return Err(Error::EmbeddingMismatch(base.points[a.max(b)]));
                }
            }
        }
        Ok(idx)
    };
    let base1 = embed(f1)?;
    let base2 = embed(f2)?;
    let new1: Vec<usize> = (0..f1.len()).filter(|i| !base1.contains(i)).collect();
    let new2: Vec<usize> = (0..f2.len()).filter(|i| !base2.contains(i)).collect();
    for &j in &new2 {
        if new1.iter().any(|&i| f1.points[i] == f2.points[j]) {
            return Err(Error::PointCollision(f2.points[j]));
        }
    }

    let to_base =
        |f: &LambdaSpace, idx: &[usize], i: usize| -> Vec<Elem> { idx.iter().map(|&c| f.dist(i, c)).collect() };
    let rows1: Vec<Vec<Elem>> = new1.iter().map(|&i| to_base(f1, &base1, i)).collect();
    let rows2: Vec<Vec<Elem>> = new2.iter().map(|&j| to_base(f2, &base2, j)).collect();
    let cross: Vec<Vec<Elem>> =
        rows1.iter().map(|r1| rows2.iter().map(|r2| cross_distance(&lat, r1, r2)).collect()).collect();

    let mut identified = Vec::new();
    let mut keep2 = Vec::new();
    for (b, &j) in new2.iter().enumerate() {
        match (0..new1.len()).find(|&a| cross[a][b] == lat.bottom()) {
            Some(a) => identified.push((f2.points[j], f1.points[new1[a]])),
            None => keep2.push(b),
        }
    }

    // layout: base, new points of f1, surviving new points of f2
    #[derive(Clone, Copy)]
    enum Src {
        Base(usize),
        One(usize),
        Two(usize),
    }
    let mut layout: Vec<Src> = (0..base.len()).map(Src::Base).collect();
    layout.extend((0..new1.len()).map(Src::One));
    layout.extend(keep2.iter().map(|&b| Src::Two(b)));
    let points = layout
        .iter()
        .map(|s| match *s {
            Src::Base(c) => base.points[c],
            Src::One(a) => f1.points[new1[a]],
            Src::Two(b) => f2.points[new2[b]],
        })
        .collect();
    let dist = |x: Src, y: Src| -> Elem {
        match (x, y) {
            (Src::Base(c), Src::Base(e)) => base.dist(c, e),
            (Src::Base(c), Src::One(a)) | (Src::One(a), Src::Base(c)) => f1.dist(new1[a], base1[c]),
            (Src::Base(c), Src::Two(b)) | (Src::Two(b), Src::Base(c)) => f2.dist(new2[b], base2[c]),
            (Src::One(a), Src::One(a2)) => f1.dist(new1[a], new1[a2]),
            (Src::Two(b), Src::Two(b2)) => f2.dist(new2[b], new2[b2]),
            (Src::One(a), Src::Two(b)) | (Src::Two(b), Src::One(a)) => cross[a][b],
        }
    };
    let space = LambdaSpace::from_fn(lat.clone(), points, |i, j| dist(layout[i], layout[j]));
    Ok(Amalgam { space, identified })
}

/// A base space and two extensions of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamInstance {
    pub base: LambdaSpace,
    pub f1: LambdaSpace,
    pub f2: LambdaSpace,
}

/// First point id used for new points of the first factor in generated
/// instances; the second factor starts at `2 * NEW_POINT_OFFSET`.
pub const NEW_POINT_OFFSET: PointId = 1000;

/// Enumerates amalgamation problems over `lat`: every base space with at most
/// `max_base` points (one per isomorphism class), and for every `(n1, n2)` in
/// `shapes` every pair of extensions adding `n1` and `n2` points (two-point
/// extensions are taken up to swapping the new points).
///
/// Base points have ids `0..`, new points of the first factor start at
/// [`NEW_POINT_OFFSET`], those of the second at twice that.
pub fn sweep_amalgam_instances<F>(
    lat: &Arc<FiniteLattice>,
    max_base: usize,
    shapes: &[(usize, usize)],
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&LambdaSpace, &LambdaSpace, &LambdaSpace) -> ControlFlow<()>,
{
    let max_new = shapes.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
    for size in 0..=max_base {
        for base in base_spaces(lat, size) {
            let first = extensions(&base, max_new, NEW_POINT_OFFSET);
            let second = extensions(&base, max_new, 2 * NEW_POINT_OFFSET);
            for &(n1, n2) in shapes {
                if n1 == 0 || n2 == 0 || n1 > 2 || n2 > 2 {
                    continue;
                }
                for f1 in &first[n1 - 1] {
                    for f2 in &second[n2 - 1] {
                        visit(&base, f1, f2)?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

/// Valid spaces on points `0..size`, one per isomorphism class (the
/// lexicographically least distance vector under point permutations).
pub fn base_spaces(lat: &Arc<FiniteLattice>, size: usize) -> Vec<LambdaSpace> {
    let nonzero: Vec<Elem> = lat.elements().filter(|&e| e != lat.bottom()).collect();
    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect();
    let perms = permutations(size);
    let mut out = Vec::new();
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let value = |i: usize, j: usize| -> Elem {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let k = pairs.iter().position(|&p| p == (a, b)).expect("pair");
            nonzero[choice[k]]
        };
        let vector: Vec<Elem> = pairs.iter().map(|&(i, j)| value(i, j)).collect();
        let minimal = perms.iter().all(|p| {
            let permuted: Vec<Elem> = pairs.iter().map(|&(i, j)| value(p[i], p[j])).collect();
            permuted >= vector
        });
        if minimal {
            let s = LambdaSpace::from_fn(lat.clone(), (0..size as PointId).collect(), value);
            if s.is_valid() {
                out.push(s);
            }
        }
        // odometer over the distance choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < nonzero.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Valid one-point extensions (`[0]`) and two-point extensions (`[1]`) of
/// `base`, with new ids starting at `first_id`.
fn extensions(base: &LambdaSpace, max_new: usize, first_id: PointId) -> [Vec<LambdaSpace>; 2] {
    let lat = base.lattice.clone();
    let nonzero: Vec<Elem> = lat.elements().filter(|&e| e != lat.bottom()).collect();
    let b = base.len();
    let mut types: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..b {
        types = types
            .into_iter()
            .flat_map(|t| {
                nonzero.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    let grow = |s: &LambdaSpace, id: PointId, row: &[Elem]| {
        let mut s = s.clone();
        s.push_point(id, row);
        s
    };
    let singles: Vec<(Vec<Elem>, LambdaSpace)> = types
        .into_iter()
        .map(|t| {
            let s = grow(base, first_id, &t);
            (t, s)
        })
        .filter(|(_, s)| s.is_valid())
        .collect();
    let mut doubles = Vec::new();
    if max_new >= 2 {
        for (i, (_, s)) in singles.iter().enumerate() {
            for (t2, _) in &singles[i..] {
                for &delta in &nonzero {
                    let mut row = t2.clone();
                    row.push(delta);
                    let candidate = grow(s, first_id + 1, &row);
                    if candidate.is_valid() {
                        doubles.push(candidate);
                    }
                }
            }
        }
    }
    [singles.into_iter().map(|(_, s)| s).collect(), doubles]
}

/// Whether some assignment of cross distances (allowing `0`, i.e. identifying
/// a point of one factor with a point of the other) satisfies the triangle
/// inequality on the union.
pub fn has_completion(base: &LambdaSpace, f1: &LambdaSpace, f2: &LambdaSpace) -> bool {
    let lat = &*base.lattice;
    let idx1: Vec<usize> = base.points.iter().map(|&p| f1.index_of(p).expect("embedded")).collect();
    let idx2: Vec<usize> = base.points.iter().map(|&p| f2.index_of(p).expect("embedded")).collect();
    let new1: Vec<usize> = (0..f1.len()).filter(|i| !idx1.contains(i)).collect();
    let new2: Vec<usize> = (0..f2.len()).filter(|i| !idx2.contains(i)).collect();
    let b = base.len();
    let (n1, n2) = (new1.len(), new2.len());
    let n = b + n1 + n2;
    let mut d = vec![lat.bottom(); n * n];
    let set = |d: &mut Vec<Elem>, i: usize, j: usize, v: Elem| {
        d[i * n + j] = v;
        d[j * n + i] = v;
    };
    for i in 0..b {
        for j in 0..b {
            set(&mut d, i, j, base.dist(i, j));
        }
        for (a, &x) in new1.iter().enumerate() {
            set(&mut d, i, b + a, f1.dist(x, idx1[i]));
        }
        for (c, &y) in new2.iter().enumerate() {
            set(&mut d, i, b + n1 + c, f2.dist(y, idx2[i]));
        }
    }
    for (a, &x) in new1.iter().enumerate() {
        for (a2, &x2) in new1.iter().enumerate() {
            set(&mut d, b + a, b + a2, f1.dist(x, x2));
        }
    }
    for (c, &y) in new2.iter().enumerate() {
        for (c2, &y2) in new2.iter().enumerate() {
            set(&mut d, b + n1 + c, b + n1 + c2, f2.dist(y, y2));
        }
    }
    let cross: Vec<(usize, usize)> = (0..n1).flat_map(|a| (0..n2).map(move |c| (a, c))).collect();
    let mut choice = vec![0u8; cross.len()];
    let size = lat.len() as u8;
    loop {
        for (k, &(a, c)) in cross.iter().enumerate() {
            set(&mut d, b + a, b + n1 + c, Elem(choice[k]));
        }
        if triangles_hold(lat, n, |i, j| d[i * n + j]) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < size {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Default instance bounds for [`amalgamation_failure_probe`].
pub const PROBE_MAX_BASE: usize = 3;
pub const PROBE_MAX_NEW: usize = 2;

/// Searches for an amalgamation problem with no completion at all, over bases
/// of at most three points and at most two new points per factor. Returns the
/// first failure found in order of base size, then factor sizes.
pub fn amalgamation_failure_probe(lat: &Arc<FiniteLattice>) -> Option<AmalgamInstance> {
    amalgamation_failure_probe_with(lat, PROBE_MAX_BASE, PROBE_MAX_NEW)
}

pub fn amalgamation_failure_probe_with(
    lat: &Arc<FiniteLattice>,
    max_base: usize,
    max_new: usize,
) -> Option<AmalgamInstance> {
    let mut shapes = Vec::new();
    for total in 2..=2 * max_new {
        for n1 in 1..=max_new {
            if total > n1 && total - n1 <= max_new {
                shapes.push((n1, total - n1));
            }
        }
    }
    let distributive = lat.is_distributive();
    let mut found = None;
    for size in 0..=max_base {
        for base in base_spaces(lat, size) {
            let first = extensions(&base, max_new, NEW_POINT_OFFSET);
            let second = extensions(&base, max_new, 2 * NEW_POINT_OFFSET);
            for &(n1, n2) in &shapes {
                for f1 in &first[n1 - 1] {
                    for f2 in &second[n2 - 1] {
                        let ok = distributive && canonical_amalgam(&base, f1, f2).is_ok_and(|a| a.space.is_valid());
                        if !ok && !has_completion(&base, f1, f2) {
                            found = Some(AmalgamInstance { base: base.clone(), f1: f1.clone(), f2: f2.clone() });
                            return found;
                        }
                    }
                }
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    fn space(lat: &Arc<FiniteLattice>, n: usize, entries: &[(usize, usize, &str)]) -> LambdaSpace {
        let mut d = vec![lat.top(); n * n];
        for i in 0..n {
            d[i * n + i] = lat.bottom();
        }
        for &(i, j, name) in entries {
            let e = lat.elem(name).unwrap();
            d[i * n + j] = e;
            d[j * n + i] = e;
        }
        LambdaSpace::new(lat.clone(), (1..=n as PointId).collect(), d).unwrap()
    }

    #[test]
    fn single_point_is_valid() {
        let lat = arc(FiniteLattice::chain(3));
        assert!(validate_space(&space(&lat, 1, &[])).is_valid());
    }

    #[test]
    fn zero_distance_is_invalid() {
        let lat = arc(FiniteLattice::chain(3));
        let s = space(&lat, 2, &[(0, 1, "0")]);
        assert_eq!(validate_space(&s).violations, vec![SpaceViolation::ZeroDistance { x: 1, y: 2 }]);
    }

    #[test]
    fn boolean_triangle_example() {
        let lat = arc(FiniteLattice::boolean(2));
        let s = space(&lat, 3, &[(0, 1, "a"), (1, 2, "b"), (0, 2, "1")]);
        assert!(validate_space(&s).is_valid());
        let e = equivalences_from_space(&s);
        assert_eq!(e.classes_of(lat.elem("a").unwrap()), vec![vec![1, 2], vec![3]]);
        assert_eq!(e.classes_of(lat.top()), vec![vec![1, 2, 3]]);
        assert_eq!(e.classes_of(lat.bottom()).len(), 3);
    }

    #[test]
    fn triangle_violation_is_reported() {
        let lat = arc(FiniteLattice::chain(3));
        let s = space(&lat, 3, &[(0, 1, "e1"), (1, 2, "e1"), (0, 2, "1")]);
        let report = validate_space(&s);
        assert!(report.violations.contains(&SpaceViolation::Triangle { x: 1, y: 2, z: 3 }));
    }

    #[test]
    fn meet_formula_on_a_chain() {
        let lat = arc(FiniteLattice::chain(3));
        let e_mid = lat.elem("e1").unwrap();
        let mut classes = vec![vec![0, 1, 2]; 3];
        classes[lat.top().index()] = vec![0, 0, 0];
        classes[e_mid.index()] = vec![0, 0, 1];
        let sys = EquivalenceSystem::new(lat.clone(), vec![1, 2, 3], classes).unwrap();
        assert!(validate_equivalences(&sys).is_empty());
        let s = space_from_equivalences(&sys);
        assert_eq!(s.dist(0, 1), e_mid);
        assert_eq!(s.dist(0, 2), lat.top());
        assert_eq!(s.dist(1, 2), lat.top());
    }

    #[test]
    fn discrete_only_system() {
        let lat = arc(FiniteLattice::chain(2));
        let sys = EquivalenceSystem::new(lat.clone(), vec![1, 2], vec![vec![0, 1], vec![0, 0]]).unwrap();
        let s = space_from_equivalences(&sys);
        assert_eq!(s.dist(0, 1), lat.top());
    }

    #[test]
    fn one_base_point_amalgam_is_the_join() {
        let lat = arc(FiniteLattice::boolean(2));
        let (a, b) = (lat.elem("a").unwrap(), lat.elem("b").unwrap());
        let base = space(&lat, 1, &[]);
        let f1 = LambdaSpace::from_fn(lat.clone(), vec![1, 10], |_, _| a);
        let f2 = LambdaSpace::from_fn(lat.clone(), vec![1, 20], |_, _| b);
        let am = canonical_amalgam(&base, &f1, &f2).unwrap();
        assert_eq!(am.space.dist_by_id(10, 20), Some(lat.join(a, b)));
        assert!(am.space.is_valid());
    }

    #[test]
    fn amalgam_with_trivial_first_factor_is_second() {
        let lat = arc(FiniteLattice::chain(4));
        let base = space(&lat, 2, &[(0, 1, "e2")]);
        let mut f2 = base.clone();
        f2.push_point(7, &[lat.elem("e1").unwrap(), lat.elem("e2").unwrap()]);
        let am = canonical_amalgam(&base, &base, &f2).unwrap();
        assert_eq!(am.space, f2);
    }

    #[test]
    fn meet_reducible_bottom_forces_identification() {
        let lat = arc(FiniteLattice::boolean(2));
        let (a, b) = (lat.elem("a").unwrap(), lat.elem("b").unwrap());
        let base = space(&lat, 2, &[]);
        let mut f1 = base.clone();
        f1.push_point(10, &[a, b]);
        let mut f2 = base.clone();
        f2.push_point(20, &[a, b]);
        let am = canonical_amalgam(&base, &f1, &f2).unwrap();
        assert_eq!(am.identified, vec![(20, 10)]);
        assert_eq!(am.space.len(), 3);
        assert!(am.space.is_valid());
    }

    #[test]
    fn amalgam_errors() {
        let m3 = arc(FiniteLattice::m3());
        let base = space(&m3, 1, &[]);
        assert!(matches!(canonical_amalgam(&base, &base, &base), Err(Error::NonDistributive(_))));

        let lat = arc(FiniteLattice::chain(3));
        let base = space(&lat, 1, &[]);
        let mut f1 = base.clone();
        f1.push_point(5, &[lat.top()]);
        let f2 = f1.clone();
        assert!(matches!(canonical_amalgam(&base, &f1, &f2), Err(Error::PointCollision(5))));

        let bad = LambdaSpace::from_fn(lat.clone(), vec![1, 6], |_, _| lat.bottom());
        assert!(matches!(canonical_amalgam(&base, &bad, &f1), Err(Error::InvalidFactor { which: "first", .. })));
    }

    #[test]
    fn base_spaces_are_iso_reduced() {
        let lat = arc(FiniteLattice::chain(3));
        // two values {e1, 1}: 2-point spaces: 2; 3-point valid triangles up to
        // symmetry: (e1,e1,e1), (e1,1,1), (1,1,1)
        assert_eq!(base_spaces(&lat, 2).len(), 2);
        assert_eq!(base_spaces(&lat, 3).len(), 3);
    }

    #[test]
    fn probe_finds_failures_exactly_for_non_distributive() {
        for lat in [FiniteLattice::m3(), FiniteLattice::n5()] {
            let lat = arc(lat);
            let inst = amalgamation_failure_probe(&lat).expect("failure expected");
            assert!(!has_completion(&inst.base, &inst.f1, &inst.f2));
        }
        assert!(amalgamation_failure_probe_with(&arc(FiniteLattice::chain(4)), 2, 2).is_none());
    }
}
