//! Exact certificates for a four-state convex-integration example.
//!
//! The crate rebuilds a degree-11 operator family `B(ξ) = (q1, q2, q3)(ξ)` in two
//! variables from a large T4 configuration in `R^3`, checks every algebraic
//! claim behind it with exact rational arithmetic (each claim through two
//! independent routes where one exists), and builds exact piecewise-polynomial
//! laminate fields on top of the resulting operator.
//!
//! The linear-algebra and polynomial kernels are generic over [`Scalar`]; the
//! certificate layers work over [`Rational`].

#![allow(clippy::needless_range_loop)]

pub mod data;
mod intarith;
pub mod laminate;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod t4;
pub mod verify;

pub use linalg::{LinalgError, Matrix};
pub use poly::{Axis, HomPoly2, Poly2, PolyError, UniPoly};
pub use scalar::{format_rational, parse_rational, Scalar};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;
pub type QMatrix = Matrix<Rational>;
pub type QVector = Vec<Rational>;
pub type QHomPoly2 = HomPoly2<Rational>;
pub type QUniPoly = UniPoly<Rational>;
pub type QPoly2 = Poly2<Rational>;

/// Double-precision instantiations, handy for quick numeric exploration.
pub type FMatrix = Matrix<f64>;
pub type FHomPoly2 = HomPoly2<f64>;
