use thiserror::Error;

use crate::lattice::{LatticeReport, SublatticeWitness};
use crate::sqorder::SqReport;
use crate::ultrametric::{PointId, SpaceReport};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a lattice: {0}")]
    InvalidLattice(LatticeReport),

    #[error("lattice is not distributive (witness {0:?})")]
    NonDistributive(SublatticeWitness),

    #[error("unknown lattice element `{0}`")]
    UnknownElement(String),

    #[error("size {requested} exceeds the supported maximum {max}")]
    SizeCap { requested: usize, max: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid space: {0}")]
    InvalidSpace(SpaceReport),

    #[error("factor {which} is not a valid space: {report}")]
    InvalidFactor { which: &'static str, report: SpaceReport },

    #[error("base point {0} is missing from a factor or embedded with different distances")]
    EmbeddingMismatch(PointId),

    #[error("point id {0} occurs outside the base in both factors")]
    PointCollision(PointId),

    #[error("spaces are over different lattices")]
    LatticeMismatch,

    #[error("restriction to `{g}` is undefined for an order from `{bottom}` to `{top}`")]
    UndefinedRestriction { bottom: String, top: String, g: String },

    #[error("top of the lower order (`{lo_top}`) differs from bottom of the upper order (`{hi_bottom}`)")]
    TopBottomMismatch { lo_top: String, hi_bottom: String },

    #[error("`{relation}` is not convex for the order: points {witness:?} interleave")]
    NotConvex { relation: String, witness: (PointId, PointId, PointId) },

    #[error("invalid subquotient order: {0}")]
    InvalidOrder(SqReport),

    #[error("bottom relation `{0}` is not meet-irreducible")]
    MeetReducibleBottom(String),

    #[error("meet-irreducible `{0}` is not the bottom relation of any order")]
    MissingMeetIrreducible(String),

    #[error("the type is already realized by point {0}; a fresh point would be identified with it")]
    ForcedIdentification(PointId),

    #[error("inconsistent one-point type: {0}")]
    InconsistentType(String),

    #[error("invalid chain cover: {0}")]
    InvalidCover(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid permutation structure: {0}")]
    InvalidPerm(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    File { path: std::path::PathBuf, source: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
