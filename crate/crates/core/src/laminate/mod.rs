//! Exact laminate constructions on top of a certified operator.
//!
//! - [`profile`]: the periodic profile `h` and its antiderivatives.
//! - [`geometry`]: rectangles, strip clipping, areas, inner covers.
//! - [`field`]: one-level fields, refinement, volume fractions, rebalancing.
//! - [`tree`]: finite-order laminates as weighted point masses.

pub mod field;
pub mod geometry;
pub mod profile;
pub mod tree;

use num_traits::{One, Signed};

use crate::linalg::vector;
use crate::operator::CertifiedOperator;
use crate::Rational;

pub use field::{
    rebalance, refine_field, simple_laminate_field, ExactnessSummary, FieldStats, GridRow, Layer, PiecewisePolyField,
    Rebalance, Refinement, SimpleLaminate,
};
pub use geometry::Rect;
pub use profile::{Antiderivative, Profile};
pub use tree::{LaminateTree, SplitRecord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaminateError {
    #[error("symbol at the chosen direction is not a nonzero multiple of the jump")]
    NotAWaveDirection,
    #[error("illegal split: {0}")]
    IllegalSplit(String),
    #[error("value is not a leaf of the laminate")]
    UnknownLeaf,
    #[error("fractions admit no rebalancing step")]
    InfeasibleFractions,
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// `parent = s·b + (1-s)·c`, `s ∈ (0, 1)`, `b ≠ c` and `b - c` in the wave cone.
pub fn check_split(
    op: &CertifiedOperator,
    parent: &[Rational],
    b: &[Rational],
    c: &[Rational],
    s: &Rational,
) -> Result<(), LaminateError> {
    if !s.is_positive() || *s >= Rational::one() {
        return Err(LaminateError::IllegalSplit("s must lie in (0, 1)".into()));
    }
    if parent.len() != 3 || b.len() != 3 || c.len() != 3 {
        return Err(LaminateError::IllegalSplit("values must lie in R^3".into()));
    }
    let diff = vector::sub(b, c);
    if vector::is_zero(&diff) {
        return Err(LaminateError::IllegalSplit("endpoints coincide".into()));
    }
    let mix = vector::add(&vector::scale(b, s), &vector::scale(c, &(Rational::one() - s)));
    if mix != parent {
        return Err(LaminateError::IllegalSplit("parent is not s·b + (1-s)·c".into()));
    }
    let verdict = op.wave_cone_member(&diff).map_err(|e| LaminateError::IllegalSplit(e.to_string()))?;
    if !verdict.member {
        return Err(LaminateError::IllegalSplit(format!("b - c is not in the wave cone ({})", verdict.certificate())));
    }
    Ok(())
}
