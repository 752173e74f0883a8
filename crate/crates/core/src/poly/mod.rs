//! Exact polynomials, closed formulas, their parser, and interval evaluation.

pub mod blocks;
pub mod formula;
pub mod interval;
pub mod parser;
pub mod polynomial;

pub use blocks::{multidegree, BlockSpec};
pub use formula::{ClosedFormula, FormulaNode, NumericAtom, NumericFormula, Relation, SignAtom};
pub use interval::{gradient_norm_bound, interval_evaluate, interval_evaluate_f64, Interval};
pub use parser::{parse_formula, parse_formula_with_prefix, parse_polynomial, ParseError};
pub use polynomial::{Monomial, Polynomial};
