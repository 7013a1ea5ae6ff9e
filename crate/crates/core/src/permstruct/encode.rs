//! Chain-cover encoding of an ordered Λ-ultrametric structure by linear orders.
//!
//! For each chain `E_1 < … < E_m` of the cover, a maximal chain of the lattice
//! through it is chosen and the step orders along it are composed
//! lexicographically into a base order, convex for every `E_j`. The pairs
//! first related at `E_j` (level `j`; level `m + 1` for pairs related only at
//! `1`) are told apart by `⌈log₂(m+1)⌉` companion orders: companion `b`
//! reverses the steps of every level whose code `j mod 2^k` has bit `b` set.
//!
//! A step `μ ⋖ ν` without an order of its own in the source takes the
//! restriction to `ν` of a source order from `m` to `t` with `m ∧ ν = μ` and
//! `ν ≤ t`. In a distributive lattice such an order exists whenever every
//! meet-irreducible is the bottom of some source order, so the emitted orders
//! stay definable from the source; a seeded random filler is used only when
//! no order qualifies.

use std::sync::Arc;

use rand::seq::SliceRandom;
use serde::Serialize;

use super::PermStructure;
use crate::error::{Error, Result};
use crate::lattice::chains::{companion_count, dimension_bounds, lambda_zero, ChainCover};
use crate::lattice::{meet_irreducibles, Elem, FiniteLattice};
use crate::sqorder::{compose_lex, restrict_to, OrderedLambdaStructure, SubquotientOrder};
use crate::ultrametric::LambdaSpace;
use crate::{seeded_rng, Rng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverChoice {
    /// A cover minimising the emitted order count.
    Auto,
    Given(ChainCover),
}

/// A set of orientation masks, listed in increasing order.
pub type MaskSet = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCode {
    pub element: String,
    /// `x E y` (for `x ≠ y`) iff the orientation of `(x, y)` is listed.
    pub masks: MaskSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCode {
    pub bottom: String,
    pub top: String,
    /// `x < y` iff the orientation of `(x, y)` is listed.
    pub masks: MaskSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Codebook {
    pub orders: usize,
    /// One entry per lattice element, in element order.
    pub relations: Vec<RelationCode>,
    /// One entry per subquotient order of the source, in signature order.
    pub suborders: Vec<OrderCode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Encoding {
    pub perm: PermStructure,
    pub codebook: Codebook,
    /// The chain cover used, as lattice element names.
    pub cover: Vec<Vec<String>>,
    /// `|𝓛| + Σ ⌈log₂(|L|+1)⌉` for that cover.
    pub bound: usize,
    /// What each emitted order is, for reports.
    pub roles: Vec<String>,
}

/// One emitted chain block: the base order and its companions.
struct ChainBlock {
    members: Vec<Elem>,
    first: usize,
    companions: usize,
}

impl ChainBlock {
    /// Level (1-based) of a pair from its orientation, or `None` when the
    /// agree/disagree code is not used by any level.
    fn level(&self, mask: u32) -> Option<usize> {
        let base = mask >> self.first & 1;
        let code =
            (0..self.companions).fold(0usize, |c, b| c | (((mask >> (self.first + 1 + b) & 1) ^ base) as usize) << b);
        let m = self.members.len();
        let modulus = 1usize << self.companions;
        (1..=m + 1).find(|&j| j % modulus == code)
    }

    /// Whether pairs with this orientation are `E_j`-related (`j` 1-based).
    fn related(&self, mask: u32, j: usize) -> bool {
        self.level(mask).is_some_and(|l| l <= j)
    }
}

fn find_order(s: &OrderedLambdaStructure, bottom: Elem, top: Elem) -> Option<usize> {
    s.orders.iter().position(|o| o.bottom() == bottom && o.top() == top)
}

/// A uniformly random order from `bottom` to `top`: the `bottom`-classes of
/// each `top`-class in shuffled order.
fn filler(space: &LambdaSpace, bottom: Elem, top: Elem, rng: &mut Rng) -> SubquotientOrder {
    let classes = space.partition(bottom);
    let count = classes.iter().max().map_or(0, |m| m + 1) as usize;
    let mut perm: Vec<i64> = (0..count as i64).collect();
    perm.shuffle(rng);
    let ranks: Vec<i64> = classes.iter().map(|&c| perm[c as usize]).collect();
    SubquotientOrder::from_ranks(space, bottom, top, &ranks).expect("one rank per point")
}

/// The order used for the step `lo ⋖ hi`: a source order on exactly that
/// step, else a restriction of one (see the module docs), else a filler.
fn step_order(s: &OrderedLambdaStructure, lo: Elem, hi: Elem, rng: &mut Rng) -> SubquotientOrder {
    let lat = s.space.lattice();
    if let Some(i) = find_order(s, lo, hi) {
        return s.orders[i].clone();
    }
    s.orders
        .iter()
        .find(|o| lat.meet(o.bottom(), hi) == lo && lat.leq(hi, o.top()))
        .map(|o| restrict_to(&s.space, o, hi).expect("hi lies below the top").order)
        .unwrap_or_else(|| filler(&s.space, lo, hi, rng))
}

/// Next element of a maximal chain from `mu` towards `target` (`mu < target`):
/// the unique cover when `mu` is meet-irreducible, else the first upper cover
/// below `target`.
fn step_towards(lat: &FiniteLattice, mu: Elem, target: Elem) -> Elem {
    if let Some(c) = lat.unique_cover(mu) {
        return c;
    }
    lat.upper_covers(mu)
        .into_iter()
        .find(|&c| lat.leq(c, target))
        .expect("some cover lies below a strictly larger element")
}

/// Steps `(μ_{t-1}, μ_t)` of a maximal chain through `stops` (increasing),
/// each tagged with its level: one plus the number of stops at or below its
/// lower end.
fn maximal_chain(lat: &FiniteLattice, stops: &[Elem]) -> Vec<(Elem, Elem, usize)> {
    let mut steps = Vec::new();
    let mut mu = lat.bottom();
    for (level, &target) in (1..).zip(stops.iter().chain(std::iter::once(&lat.top()))) {
        while mu != target {
            let next = step_towards(lat, mu, target);
            steps.push((mu, next, level));
            mu = next;
        }
    }
    steps
}

fn linear_ranks(o: &SubquotientOrder) -> Vec<u32> {
    debug_assert!(o.keys().iter().all(|k| k.scale == o.keys()[0].scale));
    o.keys().iter().map(|k| k.rank).collect()
}

fn compose_all(space: &LambdaSpace, parts: &[SubquotientOrder]) -> SubquotientOrder {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = compose_lex(space, &acc, p).expect("steps chain up");
    }
    acc
}

/// Encodes `s` by linear orders as described in the module docs. Subquotient
/// orders of `s` serve as steps where their levels match; other steps are
/// restrictions of them, or seeded random fillers when none applies. Orders
/// of `s` that are not steps of any chain are emitted as extra orders, with
/// steps chosen the same way below and above them.
pub fn encode_orders(s: &OrderedLambdaStructure, cover: &CoverChoice, seed: u64) -> Result<Encoding> {
    let space = &s.space;
    let lat: Arc<FiniteLattice> = space.lattice().clone();
    let bounds = dimension_bounds(&lat)?;
    for m in meet_irreducibles(&lat) {
        if !s.orders.iter().any(|o| o.bottom() == m) {
            return Err(Error::MissingMeetIrreducible(lat.name(m).into()));
        }
    }
    if space.is_empty() {
        return Err(Error::Shape("cannot encode an empty structure".into()));
    }
    let members = lambda_zero(&lat);
    let cover = match cover {
        CoverChoice::Auto => bounds.cover.clone(),
        CoverChoice::Given(c) => {
            let mut c = c.clone();
            for chain in &mut c.chains {
                chain.sort_by(|&a, &b| {
                    if lat.lt(a, b) {
                        std::cmp::Ordering::Less
                    } else if lat.lt(b, a) {
                        std::cmp::Ordering::Greater
                    } else {
                        a.cmp(&b)
                    }
                });
            }
            let idx: Vec<usize> = members.iter().map(|e| e.index()).collect();
            c.check(&lat.poset(), &idx)?;
            c
        }
    };

    let mut rng = seeded_rng(seed);
    let mut emitted: Vec<Vec<u32>> = Vec::new();
    let mut roles = Vec::new();
    let mut blocks = Vec::new();
    let mut carrier: Vec<Option<usize>> = vec![None; s.orders.len()];

    for chain in &cover.chains {
        let steps = maximal_chain(&lat, chain);
        let orders: Vec<SubquotientOrder> = steps
            .iter()
            .map(|&(lo, hi, _)| match find_order(s, lo, hi) {
                Some(i) => {
                    carrier[i].get_or_insert(emitted.len());
                    s.orders[i].clone()
                }
                None => step_order(s, lo, hi, &mut rng),
            })
            .collect();
        let m = chain.len();
        let k = companion_count(m);
        let names: Vec<&str> = chain.iter().map(|&e| lat.name(e)).collect();
        let first = emitted.len();
        emitted.push(linear_ranks(&compose_all(space, &orders)));
        roles.push(format!("base order for chain {}", names.join("<")));
        let modulus = 1usize << k;
        for b in 0..k {
            let flipped: Vec<SubquotientOrder> = orders
                .iter()
                .zip(&steps)
                .map(|(o, &(_, _, level))| if (level % modulus) >> b & 1 == 1 { o.reversed() } else { o.clone() })
                .collect();
            emitted.push(linear_ranks(&compose_all(space, &flipped)));
            roles.push(format!("companion {b} for chain {}", names.join("<")));
        }
        blocks.push(ChainBlock { members: chain.to_vec(), first, companions: k });
    }

    for (i, o) in s.orders.iter().enumerate() {
        if carrier[i].is_some() {
            continue;
        }
        let below = maximal_chain(&lat, &[o.bottom()]);
        let above = maximal_chain(&lat, &[o.top()]);
        let mut parts: Vec<SubquotientOrder> = below
            .iter()
            .filter(|&&(_, hi, _)| lat.leq(hi, o.bottom()))
            .map(|&(lo, hi, _)| step_order(s, lo, hi, &mut rng))
            .collect();
        if o.bottom() != o.top() {
            parts.push(o.clone());
        }
        parts.extend(
            above
                .iter()
                .filter(|&&(lo, _, _)| lat.leq(o.top(), lo))
                .map(|&(lo, hi, _)| step_order(s, lo, hi, &mut rng)),
        );
        carrier[i] = Some(emitted.len());
        emitted.push(if parts.is_empty() {
            // the lattice is a single element; any order will do
            (0..space.len() as u32).collect()
        } else {
            linear_ranks(&compose_all(space, &parts))
        });
        roles.push(format!("extra order carrying {} -> {}", lat.name(o.bottom()), lat.name(o.top())));
    }

    let perm = PermStructure::new(emitted)?;
    let n = perm.dimension();
    if n > 20 {
        return Err(Error::InvalidConfig(format!("{n} orders: codebook would be too large")));
    }
    let all_masks: Vec<u32> = (0..1u32 << n).collect();

    // x E_λ y iff x E_μ y for every meet-irreducible μ ≥ λ in Λ₀
    let in_relation = |lambda: Elem, mask: u32| -> bool {
        if lambda == lat.top() {
            return true;
        }
        if lambda == lat.bottom() {
            return false;
        }
        members.iter().filter(|&&mu| lat.leq(lambda, mu)).all(|&mu| {
            let (block, j) = blocks
                .iter()
                .find_map(|b: &ChainBlock| b.members.iter().position(|&e| e == mu).map(|p| (b, p + 1)))
                .expect("cover contains Λ₀");
            block.related(mask, j)
        })
    };
    let relations = lat
        .elements()
        .map(|l| RelationCode {
            element: lat.name(l).into(),
            masks: all_masks.iter().copied().filter(|&m| in_relation(l, m)).collect(),
        })
        .collect();
    let suborders = s
        .orders
        .iter()
        .zip(&carrier)
        .map(|(o, c)| {
            let bit = c.expect("every order is carried");
            OrderCode {
                bottom: lat.name(o.bottom()).into(),
                top: lat.name(o.top()).into(),
                masks: all_masks
                    .iter()
                    .copied()
                    .filter(|&m| m >> bit & 1 == 1 && in_relation(o.top(), m) && !in_relation(o.bottom(), m))
                    .collect(),
            }
        })
        .collect();

    let names = |c: &Vec<Elem>| c.iter().map(|&e| lat.name(e).to_string()).collect();
    Ok(Encoding {
        codebook: Codebook { orders: n, relations, suborders },
        cover: cover.chains.iter().map(names).collect(),
        bound: cover.order_cost(),
        perm,
        roles,
    })
}

/// Pairs where the codebook disagrees with the source structure, described
/// as text (empty when the encoding is faithful on this sample).
pub fn codebook_mismatches(s: &OrderedLambdaStructure, enc: &Encoding) -> Vec<String> {
    let lat = s.space.lattice();
    let n = s.len();
    let mut out = Vec::new();
    for (l, code) in lat.elements().zip(&enc.codebook.relations) {
        'pairs: for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let mask = enc.perm.orientation(x, y);
                if s.space.related(l, x, y) != code.masks.binary_search(&mask).is_ok() {
                    out.push(format!("relation {} on points {x}, {y}", code.element));
                    break 'pairs;
                }
            }
        }
    }
    for (i, (o, code)) in s.orders.iter().zip(&enc.codebook.suborders).enumerate() {
        'pairs: for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let mask = enc.perm.orientation(x, y);
                if o.less(x, y) != code.masks.binary_search(&mask).is_ok() {
                    out.push(format!("order {i} ({} -> {}) on points {x}, {y}", code.bottom, code.top));
                    break 'pairs;
                }
            }
        }
    }
    out
}
