use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

/// Exponent vector ordered graded-lexicographically: total degree first, then
/// lexicographic with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(var_count: usize) -> Self {
        Monomial(vec![0; var_count])
    }

    pub fn var(var_count: usize, index: usize) -> Self {
        let mut e = vec![0; var_count];
        e[index] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Pure lexicographic comparison, ignoring degree.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial in canonical form: no zero coefficients,
/// terms keyed by graded-lex monomials, so equality is syntactic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<S: Scalar = Rational> {
    var_count: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(var_count: usize) -> Self {
        Polynomial { var_count, terms: BTreeMap::new() }
    }

    pub fn constant(var_count: usize, c: S) -> Self {
        Self::from_terms(var_count, [(Monomial::one(var_count), c)])
    }

    pub fn one(var_count: usize) -> Self {
        Self::constant(var_count, S::one())
    }

    /// The coordinate function `x_{index+1}` (zero-based `index`).
    pub fn var(var_count: usize, index: usize) -> Self {
        assert!(index < var_count, "variable index {index} out of range for {var_count} variables");
        Self::from_terms(var_count, [(Monomial::var(var_count, index), S::one())])
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging repeats
    /// and dropping zeros.
    pub fn from_terms<I>(var_count: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Polynomial::zero(var_count);
        for (m, c) in terms {
            assert_eq!(m.0.len(), var_count, "exponent vector length must equal var_count");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> S {
        self.terms.get(&Monomial::one(self.var_count)).cloned().unwrap_or_else(S::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().next_back().map(Monomial::degree).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Degree restricted to the variables in `range`.
    pub fn degree_in_range(&self, range: std::ops::Range<usize>) -> u32 {
        self.terms.keys().map(|m| m.0[range.clone()].iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Lexicographically largest monomial and its coefficient.
    pub fn lex_leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.var_count);
        }
        Polynomial {
            var_count: self.var_count,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.var_count);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.var_count);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; self.var_count];
            for (i, &a) in m.0.iter().enumerate() {
                e[perm[i]] = a;
            }
            (Monomial(e), c.clone())
        });
        Polynomial::from_terms(self.var_count, terms)
    }

    /// Substitutes `images[i]` for variable `i`. All images must share a
    /// common variable count, which becomes the result's.
    pub fn compose(&self, images: &[Polynomial<S>]) -> Result<Polynomial<S>> {
        if images.len() != self.var_count {
            return Err(Error::DimensionMismatch { expected: self.var_count, got: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.var_count,
            None => return Ok(Polynomial::constant(0, self.constant_term())),
        };
        if let Some(bad) = images.iter().find(|p| p.var_count != target) {
            return Err(Error::DimensionMismatch { expected: target, got: bad.var_count });
        }
        let mut powers: Vec<Vec<Polynomial<S>>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * &table[1];
                    table.push(next);
                }
                term = &term * &table[e as usize];
            }
            out = out + term;
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] -= 1;
            (Monomial(exps), c.clone() * S::from_i64(e as i64))
        });
        Polynomial::from_terms(self.var_count, terms)
    }

    /// Re-embeds into `var_count` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, var_count: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.var_count);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; var_count];
            for (i, &a) in m.0.iter().enumerate() {
                e[map[i]] += a;
            }
            (Monomial(e), c.clone())
        });
        Polynomial::from_terms(var_count, terms)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_terms(self.var_count, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact evaluation in the coefficient ring.
    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        if x.len() != self.var_count {
            return Err(Error::DimensionMismatch { expected: self.var_count, got: x.len() });
        }
        let max_deg: Vec<u32> = (0..self.var_count).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<S>> = x
            .iter()
            .zip(&max_deg)
            .map(|(xi, &d)| {
                let mut row = Vec::with_capacity(d as usize + 1);
                row.push(S::one());
                for k in 1..=d as usize {
                    let next = row[k - 1].clone() * xi.clone();
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * powers[i][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }
}

impl Polynomial<Rational> {
    /// Evaluates a rational polynomial in another scalar type (e.g. `f64`).
    pub fn evaluate_as<T: Scalar>(&self, x: &[T]) -> Result<T> {
        self.map_coeffs(T::from_rational).evaluate(x)
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(f64::from_rational)
    }

    /// Human-readable canonical form using `prefix` for variable names,
    /// highest graded-lex term first: `x1^2 + 1/2*x2 - 3`.
    pub fn display_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{e}", i + 1) })
                .collect();
            if vars.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().rev().map(|(m, c)| (&m.0, c))).finish()
    }
}

impl<S: Scalar> Add for Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(mut self, rhs: Polynomial<S>) -> Polynomial<S> {
        assert_eq!(self.var_count, rhs.var_count);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        self.clone() + rhs.clone()
    }
}

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        Polynomial { var_count: self.var_count, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<S: Scalar> Sub for Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Polynomial<S>) -> Polynomial<S> {
        self + (-rhs)
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        self.clone() - rhs.clone()
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        assert_eq!(self.var_count, rhs.var_count);
        let mut out = Polynomial::zero(self.var_count);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Mul for Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: Polynomial<S>) -> Polynomial<S> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_from_int as q;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn canonical_form_merges_and_cancels() {
        let p = x(2, 0) + x(2, 1) - x(2, 0);
        assert_eq!(p, x(2, 1));
        assert_eq!(p.term_count(), 1);
        assert!((x(1, 0) - x(1, 0)).is_zero());
    }

    #[test]
    fn sum_of_two_variables_at_one_two() {
        let p = x(2, 0) + x(2, 1);
        assert_eq!(p.evaluate(&[q(1), q(2)]).unwrap(), q(3));
    }

    #[test]
    fn key_example_values() {
        // sum_i (x_i - 1)^2 (x_i - 2)^2 over three variables
        let n = 3;
        let mut p = Polynomial::zero(n);
        for i in 0..n {
            let a = (x(n, i) - Polynomial::constant(n, q(1))).pow(2);
            let b = (x(n, i) - Polynomial::constant(n, q(2))).pow(2);
            p = p + &a * &b;
        }
        assert_eq!(p.evaluate(&[q(1), q(2), q(2)]).unwrap(), q(0));
        // (0-1)^2 (0-2)^2 = 4 per coordinate, three coordinates
        assert_eq!(p.evaluate(&[q(0), q(0), q(0)]).unwrap(), q(12));
    }

    #[test]
    fn evaluation_dimension_mismatch() {
        let p = x(2, 0);
        assert!(matches!(p.evaluate(&[q(1)]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn display_is_graded_lex_descending() {
        let p = x(3, 0).pow(2) + x(3, 1).pow(2) + x(3, 2).pow(2) - Polynomial::constant(3, q(1));
        assert_eq!(p.to_string(), "x1^2 + x2^2 + x3^2 - 1");
        let half = Rational::new(1.into(), 2.into());
        let r = x(2, 0).scale(&half) - x(2, 1);
        assert_eq!(r.to_string(), "1/2*x1 - x2");
    }

    #[test]
    fn compose_and_derivative() {
        // (x1 + x2)^2 with x1 := t, x2 := t gives 4 t^2
        let p = (x(2, 0) + x(2, 1)).pow(2);
        let t = x(1, 0);
        let r = p.compose(&[t.clone(), t.clone()]).unwrap();
        assert_eq!(r, t.pow(2).scale(&q(4)));
        let d = p.partial_derivative(0);
        assert_eq!(d, (x(2, 0) + x(2, 1)).scale(&q(2)));
    }

    #[test]
    fn float_instantiation() {
        let p: Polynomial<f64> = Polynomial::var(2, 0) * Polynomial::var(2, 1);
        assert_eq!(p.evaluate(&[1.5, 2.0]).unwrap(), 3.0);
    }
}
