//! Block-symmetric polynomials and their rewriting in the power-sum basis.
//!
//! A polynomial invariant under permutations within each block is reduced to
//! elementary symmetric polynomials by repeated lex-leading-term subtraction,
//! then each `e_j` is replaced by its Newton-identity expression in the power
//! sums `p_1, ..., p_j`. A block of `k` variables with degree cap `d` only
//! needs `p_1, ..., p_{min(k, d)}`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{multidegree, BlockSpec, ClosedFormula, Monomial, Polynomial};
use crate::scalar::{rational_from_int, Rational};

/// `x_{start+1}^m + ... + x_{start+len}^m` in `var_count` variables.
pub fn power_sum(var_count: usize, vars: std::ops::Range<usize>, m: u32) -> Polynomial {
    let mut p = Polynomial::zero(var_count);
    for i in vars {
        p = p + Polynomial::var(var_count, i).pow(m);
    }
    p
}

/// Elementary symmetric polynomials `e_0, ..., e_{len}` of the given variables.
pub fn elementary_polynomials(var_count: usize, vars: std::ops::Range<usize>) -> Vec<Polynomial> {
    let len = vars.len();
    let mut e = vec![Polynomial::zero(var_count); len + 1];
    e[0] = Polynomial::one(var_count);
    for (r, v) in vars.enumerate() {
        let x = Polynomial::var(var_count, v);
        for j in (1..=r + 1).rev() {
            e[j] = &e[j] + &(&x * &e[j - 1]);
        }
    }
    e
}

/// Newton's identities solved for the elementary polynomials:
/// `e_j = (1/j) sum_{i=1..j} (-1)^{i-1} e_{j-i} p_i`, for `j = 0..=max`,
/// as polynomials in `z_1..z_max` (placed at `offset..offset+max` among
/// `var_count` variables).
pub fn elementary_in_power_sums(max: usize, var_count: usize, offset: usize) -> Vec<Polynomial> {
    let mut e: Vec<Polynomial> = Vec::with_capacity(max + 1);
    e.push(Polynomial::one(var_count));
    for j in 1..=max {
        let mut acc = Polynomial::zero(var_count);
        for i in 1..=j {
            let term = &e[j - i] * &Polynomial::var(var_count, offset + i - 1);
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc.scale(&Rational::new(1.into(), (j as i64).into())));
    }
    e
}

/// Newton's identities solved for the power sums:
/// `p_m = (-1)^{m-1} m e_m + sum_{i=1..m-1} (-1)^{m-1+i} e_{m-i} p_i`,
/// as polynomials in `e_1..e_max` (variables `0..max`).
pub fn power_sums_in_elementary(max: usize) -> Vec<Polynomial> {
    let e = |j: usize| Polynomial::var(max, j - 1);
    let mut p: Vec<Polynomial> = vec![Polynomial::zero(max)];
    for m in 1..=max {
        let sign = |n: usize| if n % 2 == 0 { Rational::one() } else { -Rational::one() };
        let mut acc = e(m).scale(&(sign(m - 1) * rational_from_int(m as i64)));
        for i in 1..m {
            acc = acc + (&e(m - i) * &p[i]).scale(&sign(m - 1 + i));
        }
        p.push(acc);
    }
    p
}

/// True iff `p` is fixed by every adjacent transposition inside each block.
/// Adjacent transpositions generate each symmetric group factor.
pub fn check_symmetric(p: &Polynomial, blocks: &BlockSpec) -> Result<bool> {
    blocks.check_covers(p)?;
    let n = p.var_count();
    for b in 0..blocks.block_count() {
        let range = blocks.block_range(b);
        for i in range.start..range.end.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            if p.permute_vars(&perm) != *p {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A symmetric polynomial written in power sums: `poly` is a polynomial in
/// `z^{(1)}_1..z^{(1)}_{d_1'}, z^{(2)}_1, ...` (flattened block by block), and
/// substituting `z^{(i)}_m := p_m(X^{(i)})` recovers the original.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumForm {
    pub block_arities: Vec<usize>,
    pub poly: Polynomial,
}

impl PowerSumForm {
    /// `d' = sum_i d_i'`, the number of z-variables.
    pub fn arity(&self) -> usize {
        self.block_arities.iter().sum()
    }

    /// The z-variable images `p^{(i)}_m(X^{(i)})` as polynomials in x.
    pub fn power_sum_images(blocks: &BlockSpec) -> Vec<Polynomial> {
        let n = blocks.total_vars();
        let arities = blocks.reduced_degrees();
        let mut images = Vec::new();
        for (b, &a) in arities.iter().enumerate() {
            for m in 1..=a {
                images.push(power_sum(n, blocks.block_range(b), m as u32));
            }
        }
        images
    }

    /// Expands back into the x-variables.
    pub fn expand(&self, blocks: &BlockSpec) -> Result<Polynomial> {
        self.poly.compose(&Self::power_sum_images(blocks))
    }

    /// Evaluates `P~(p_1(x), ..., p_{d'}(x))` exactly.
    pub fn evaluate_at(&self, blocks: &BlockSpec, x: &[Rational]) -> Result<Rational> {
        let ys = power_sum_vector(blocks, x)?;
        self.poly.evaluate(&ys)
    }
}

/// `(p^{(1)}_1(x), ..., p^{(1)}_{d_1'}(x), p^{(2)}_1(x), ...)`.
pub fn power_sum_vector(blocks: &BlockSpec, x: &[Rational]) -> Result<Vec<Rational>> {
    if x.len() != blocks.total_vars() {
        return Err(Error::DimensionMismatch { expected: blocks.total_vars(), got: x.len() });
    }
    let mut out = Vec::with_capacity(blocks.image_dim());
    for (b, &a) in blocks.reduced_degrees().iter().enumerate() {
        let xs = &x[blocks.block_range(b)];
        for m in 1..=a {
            out.push(xs.iter().fold(Rational::zero(), |acc, v| acc + num_traits::pow(v.clone(), m)));
        }
    }
    Ok(out)
}

/// Rewrites a block-symmetric polynomial in the power-sum basis.
pub fn power_sum_rewrite(p: &Polynomial, blocks: &BlockSpec) -> Result<PowerSumForm> {
    if !check_symmetric(p, blocks)? {
        return Err(Error::NotSymmetric);
    }
    let degrees = multidegree(p, blocks)?;
    for (b, (&deg, &cap)) in degrees.iter().zip(blocks.degree_caps()).enumerate() {
        if deg > cap {
            return Err(Error::DegreeCapExceeded { block: b, degree: deg, cap });
        }
    }

    let n = blocks.total_vars();
    let arities = blocks.reduced_degrees();
    // e-variable layout: block b owns k_b consecutive slots e^{(b)}_1..e^{(b)}_{k_b}
    let e_count = n;
    let mut elementary = Vec::with_capacity(e_count);
    for b in 0..blocks.block_count() {
        elementary.extend(elementary_polynomials(n, blocks.block_range(b)).into_iter().skip(1));
    }

    let mut power_cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
    let mut in_e = Polynomial::zero(e_count);
    let mut rest = p.clone();
    while let Some((lead, coeff)) = rest.lex_leading_term() {
        let (lead, coeff) = (lead.clone(), coeff.clone());
        let mut e_exp = vec![0u32; e_count];
        for b in 0..blocks.block_count() {
            let range = blocks.block_range(b);
            let a = &lead.exponents()[range.clone()];
            for j in 0..a.len() {
                let next = a.get(j + 1).copied().unwrap_or(0);
                if a[j] < next {
                    return Err(Error::NotSymmetric);
                }
                let e = a[j] - next;
                if e > 0 && j + 1 > arities[b] {
                    // a degree-d symmetric polynomial never needs e_j with j > d
                    return Err(Error::DegreeCapExceeded { block: b, degree: (j + 1) as u32, cap: arities[b] as u32 });
                }
                e_exp[range.start + j] = e;
            }
        }
        let mut product = Polynomial::constant(n, coeff.clone());
        for (slot, &e) in e_exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = power_cache.entry((slot, e)).or_insert_with(|| elementary[slot].pow(e));
            product = &product * factor;
        }
        rest = rest - product;
        in_e = in_e + Polynomial::from_terms(e_count, [(Monomial(e_exp), coeff)]);
    }

    let z_count: usize = arities.iter().sum();
    let mut images = Vec::with_capacity(e_count);
    let mut offset = 0;
    for (b, &k_b) in blocks.block_sizes().iter().enumerate() {
        let table = elementary_in_power_sums(arities[b], z_count.max(1), offset);
        for j in 1..=k_b {
            images.push(table.get(j).cloned().unwrap_or_else(|| Polynomial::zero(z_count.max(1))));
        }
        offset += arities[b];
    }
    let poly = in_e.compose(&images)?;
    Ok(PowerSumForm { block_arities: arities, poly })
}

/// Result of [`rewrite_formula`]: same tree, atoms over the z-variables.
#[derive(Clone, Debug)]
pub struct RewrittenFormula {
    pub block_arities: Vec<usize>,
    pub formula: ClosedFormula,
}

impl RewrittenFormula {
    pub fn arity(&self) -> usize {
        self.block_arities.iter().sum()
    }
}

/// Replaces every atom polynomial by its power-sum form.
pub fn rewrite_formula(f: &ClosedFormula, blocks: &BlockSpec) -> Result<RewrittenFormula> {
    let arities = blocks.reduced_degrees();
    let z_count: usize = arities.iter().sum();
    let mut memo: HashMap<Polynomial, Polynomial> = HashMap::new();
    for p in f.polynomial_set() {
        let form = power_sum_rewrite(p, blocks)?;
        memo.insert(p.clone(), form.poly);
    }
    let formula = f.map_polynomials(z_count, "z", |p| Ok(memo[p].clone()))?;
    Ok(RewrittenFormula { block_arities: arities, formula })
}
