//! Betti numbers of orbit spaces `S/𝔖_k` of symmetric semi-algebraic sets.
//!
//! A symmetric set is described by a closed formula over symmetric
//! polynomials. The formula is rewritten in power sums, the orbit space is
//! identified with a region of the image of the power-sum map, and that
//! region is sampled on a grid and handed to a cubical homology engine.
//!
//! The polynomial layer is generic over the scalar: exact [`Rational`]
//! for symbolic work, `f64`/`f32` for the numerical kernels.

pub mod error;
pub mod homology;
pub mod pipeline;
pub mod poly;
pub mod scalar;
pub mod symmetry;
pub mod vandermonde;
pub mod weyl;

pub use error::{Error, Result};
pub use homology::{BettiVector, CubicalComplex, Field, GridBox};
pub use pipeline::{ProblemSpec, QuotientReport};
pub use poly::{BlockSpec, ClosedFormula, Interval, Polynomial};
pub use scalar::{Rational, Real, Scalar};
pub use vandermonde::{FibreConfig, Membership};
pub use weyl::Composition;

/// Exact polynomial with rational coefficients.
pub type QPolynomial = Polynomial<Rational>;
/// Double-precision polynomial used for grid sampling.
pub type F64Polynomial = Polynomial<f64>;
/// Single-precision polynomial.
pub type F32Polynomial = Polynomial<f32>;
/// Double-precision interval.
pub type F64Interval = Interval<f64>;
