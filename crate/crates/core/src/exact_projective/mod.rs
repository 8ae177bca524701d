//! Exact rational projective geometry of the plane: points, lines, conics,
//! tangency, and fitting a conic to incidence and tangency conditions.
//!
//! Homogeneous triples are stored as primitive integer vectors with the
//! first nonzero entry positive, so equality and hashing are componentwise.

mod conic;
mod fit;
mod linalg;
mod point;
mod rational;
mod transform;

use thiserror::Error;

pub use conic::{classify_conic, tangent_at, Conic, LinePair};
pub use fit::fit_conic;
pub use point::{bracket, intersect_lines, line_through, P1Point, ProjectiveLine, ProjectivePoint};
pub use rational::{clear_denominators, format_rational, integer, parse_rational, rational, Rational};
pub use transform::Projectivity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("homogeneous coordinates are all zero")]
    ZeroVector,
    #[error("the two points coincide")]
    EqualPoints,
    #[error("the two lines coincide")]
    EqualLines,
    #[error("point is not on the conic")]
    NotOnConic,
    #[error("point is the node of the conic")]
    AtNode,
    #[error("conditions do not determine a unique conic")]
    Underdetermined,
    #[error("conditions are inconsistent")]
    Inconsistent,
    #[error("fitted conic is a double line")]
    DegenerateRankOne,
    #[error("conic has rank one (double line)")]
    RankOne,
    #[error("rank-2 conic does not split over the rationals")]
    IrrationalSplit,
    #[error("matrix is singular")]
    Singular,
    #[error("{0}")]
    Parse(String),
}
