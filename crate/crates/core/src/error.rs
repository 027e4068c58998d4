use thiserror::Error;

use crate::fan::ConeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linearly dependent basis")]
    DependentBasis,
    #[error("zero ray generator at index {0}")]
    ZeroRay(usize),
    #[error("rays {0} and {1} are positive multiples of each other")]
    DuplicateRay(usize, usize),
    #[error("cone {rays:?} is not strictly convex")]
    NotStrictlyConvex { rays: Vec<usize> },
    #[error("ray {ray} is not an extreme ray of cone {rays:?}")]
    NotExtreme { ray: usize, rays: Vec<usize> },
    #[error("cones {first:?} and {second:?} do not intersect in a common face")]
    NotAFace { first: Vec<usize>, second: Vec<usize> },
    #[error("unknown cone id {0}")]
    UnknownCone(ConeId),
    #[error("cone {0} is not a facet of cone {1}")]
    NotFacet(ConeId, ConeId),
    #[error("cone {0} is not a face of cone {1}")]
    NotFace(ConeId, ConeId),
    #[error("fan is not purely {0}-dimensional")]
    NotPure(usize),
    #[error("fan is complete")]
    Complete,
    #[error("fan is not complete")]
    NotComplete,
    #[error("degenerate cone: {0}")]
    Degenerate(String),
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan is not quasi-convex (failing cones {0:?})")]
    NotQuasiConvex(Vec<ConeId>),
    #[error("not a refinement: {0}")]
    NotRefinement(String),
    #[error("function is not strictly convex: {0}")]
    NotStrictlyConvexFunction(String),
    #[error("degree {0} exceeds the computation bound {1}")]
    DegreeBound(u32, u32),
    #[error("sheaf data missing for cone {0}")]
    MissingCone(ConeId),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
