//! Weighted power sums on chamber faces, the fibre solver for the power-sum
//! map, image membership, and the maximizing section.
//!
//! A face `W_λ` of the chamber `x_1 <= ... <= x_k` is parametrized by
//! `t_1 <= ... <= t_ℓ` with `x = (t_1 repeated λ_1 times, ...)`, so that
//! `p_m(x) = Σ_i λ_i t_i^m`.

mod fibre;
mod membership;

pub use fibre::{solve_fibre, FibreConfig, FibreSearch, FibreSolution};
pub use membership::{
    arnold_section, combined_status, image_membership, image_membership_blocks, Membership, MembershipReport, SectionReport,
};

use crate::error::{Error, Result};
use crate::poly::{ClosedFormula, FormulaNode, Polynomial, Relation, SignAtom};
use crate::scalar::{rational_from_int, Scalar};
use crate::weyl::Composition;

/// The face `W_λ` of the chamber in `R^k`, `k = |λ|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    lambda: Composition,
}

impl Face {
    pub fn new(lambda: Composition) -> Self {
        Face { lambda }
    }

    pub fn lambda(&self) -> &Composition {
        &self.lambda
    }

    pub fn ambient_k(&self) -> usize {
        self.lambda.k()
    }

    /// Dimension of the face (and of its linear span `L_λ`).
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Maps face coordinates to the point of `R^k` they represent.
    pub fn embed<T: Clone>(&self, t: &[T]) -> Vec<T> {
        self.lambda.expand(t)
    }
}

/// `Σ_i λ_i t_i^m`; exact when `S` is rational.
pub fn weighted_power_sum<S: Scalar>(lambda: &Composition, m: u32, t: &[S]) -> Result<S> {
    if t.len() != lambda.len() {
        return Err(Error::DimensionMismatch { expected: lambda.len(), got: t.len() });
    }
    let mut acc = S::zero();
    for (&w, ti) in lambda.parts().iter().zip(t) {
        let mut pw = S::one();
        for _ in 0..m {
            pw = pw * ti.clone();
        }
        acc = acc + S::from_i64(w as i64) * pw;
    }
    Ok(acc)
}

/// `Σ_i λ_i t_i^m` as a polynomial in `t_1..t_ℓ`.
pub fn face_power_sum(lambda: &Composition, m: u32) -> Polynomial {
    let l = lambda.len();
    let mut p = Polynomial::zero(l);
    for (i, &w) in lambda.parts().iter().enumerate() {
        p = p + Polynomial::var(l, i).pow(m).scale(&rational_from_int(w as i64));
    }
    p
}

/// Restricts a formula over `z_1..z_{d'}` to the face `W_λ`: substitutes
/// `z_m := Σ λ_i t_i^m` and conjoins the chamber conditions `t_i - t_{i+1} <= 0`.
pub fn restrict_to_face(f: &ClosedFormula, lambda: &Composition, d_prime: usize) -> Result<ClosedFormula> {
    if f.var_count() != d_prime {
        return Err(Error::DimensionMismatch { expected: d_prime, got: f.var_count() });
    }
    let l = lambda.len();
    let images: Vec<Polynomial> = (1..=d_prime as u32).map(|m| face_power_sum(lambda, m)).collect();
    let restricted = f.map_polynomials(l, "t", |p| p.compose(&images))?;
    if l == 1 {
        return Ok(restricted);
    }
    let mut children = vec![restricted.tree().clone()];
    for i in 0..l - 1 {
        let poly = Polynomial::var(l, i) - Polynomial::var(l, i + 1);
        children.push(FormulaNode::Atom(SignAtom { poly, relation: Relation::Le }));
    }
    ClosedFormula::from_tree(l, "t", FormulaNode::And(children))
}
