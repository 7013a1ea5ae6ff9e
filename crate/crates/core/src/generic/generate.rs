use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng as _;
use serde::Serialize;

use super::checks::{extension_property_check, ExtensionReport};
use super::{check_realizable_signature, empty_type, enumerate_one_point_types, realize_in_place, type_of};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::seeded_rng;
use crate::sqorder::{OrderedLambdaStructure, SubquotientOrder};
use crate::ultrametric::{LambdaSpace, PointId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationConfig {
    pub seed: u64,
    pub target_size: usize,
    /// Largest base set `A` whose one-point types are scheduled.
    pub saturation_depth: usize,
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_size == 0 {
            return Err(Error::InvalidConfig("target size must be at least 1".into()));
        }
        if self.saturation_depth == 0 {
            return Err(Error::InvalidConfig("saturation depth must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub depth: usize,
    /// Points added to realize a scheduled, previously missing type.
    pub scheduled_points: usize,
    /// Points added over the empty set because every scheduled type was
    /// already realized.
    pub filler_points: usize,
    pub extension: ExtensionReport,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub structure: OrderedLambdaStructure,
    pub report: SaturationReport,
    pub lints: Vec<String>,
}

/// Round-robin position over subsets: by size, then lexicographically.
struct Cursor {
    comb: Vec<usize>,
}

impl Cursor {
    fn advance(&mut self, n: usize, depth: usize) {
        let r = self.comb.len();
        // next combination of the same size
        for i in (0..r).rev() {
            if self.comb[i] < n - (r - i) {
                self.comb[i] += 1;
                for j in i + 1..r {
                    self.comb[j] = self.comb[j - 1] + 1;
                }
                return;
            }
        }
        let next = r + 1;
        self.comb = if next <= depth.min(n) { (0..next).collect() } else { Vec::new() };
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Builds a finite approximation of the generic structure with the given
/// orders (`(bottom, top)` pairs).
///
/// Each step visits subsets of at most `saturation_depth` points round-robin
/// (by size, then lexicographically) until one has a one-point type that no
/// point realizes yet, picks one such type with the seeded generator and
/// realizes it. When nothing is missing, a point over the empty set is added.
/// The output depends only on the arguments.
pub fn generate_generic(
    lat: Arc<FiniteLattice>,
    signature: &[(Elem, Elem)],
    cfg: GenerationConfig,
) -> Result<Generated> {
    cfg.validate()?;
    check_realizable_signature(&lat, signature)?;
    let mut lints = Vec::new();
    for (i, a) in signature.iter().enumerate() {
        for b in &signature[i + 1..] {
            if a == b {
                lints.push(format!("two orders share bottom `{}` and top `{}`", lat.name(a.0), lat.name(a.1)));
            }
        }
    }

    let mut rng = seeded_rng(cfg.seed);
    let orders = signature.iter().map(|&(b, t)| SubquotientOrder::from_keys(b, t, Vec::new())).collect();
    let mut s = OrderedLambdaStructure { space: LambdaSpace::empty(lat.clone()), orders };
    let mut cursor = Cursor { comb: Vec::new() };
    let (mut scheduled, mut fillers) = (0, 0);

    while s.len() < cfg.target_size {
        let n = s.len();
        let id = n as PointId;
        let cycle: usize = (0..=cfg.saturation_depth.min(n)).map(|r| binomial(n, r)).sum();
        let mut chosen = None;
        for _ in 0..cycle {
            let over = cursor.comb.clone();
            cursor.advance(n, cfg.saturation_depth);
            let realized: HashSet<_> =
                (0..n).filter(|x| over.binary_search(x).is_err()).map(|x| type_of(&s, &over, x)).collect();
            let missing: Vec<_> =
                enumerate_one_point_types(&s, &over)?.into_iter().filter(|t| !realized.contains(t)).collect();
            if !missing.is_empty() {
                let pick = rng.random_range(0..missing.len());
                chosen = Some(missing.into_iter().nth(pick).expect("in range"));
                break;
            }
        }
        match chosen {
            Some(t) => {
                realize_in_place(&mut s, &t, id, &mut rng)?;
                scheduled += 1;
            }
            None => {
                let t = empty_type(&s);
                realize_in_place(&mut s, &t, id, &mut rng)?;
                fillers += 1;
            }
        }
    }

    debug_assert!(s.space.is_valid());
    debug_assert!(s.validate().iter().all(|r| r.is_valid()));
    let extension = extension_property_check(&s, cfg.saturation_depth);
    Ok(Generated {
        structure: s,
        report: SaturationReport {
            depth: cfg.saturation_depth,
            scheduled_points: scheduled,
            filler_points: fillers,
            extension,
        },
        lints,
    })
}
