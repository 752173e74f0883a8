//! Closed intervals with outward rounding.
//!
//! Every operation widens its result by a few ulps so the returned enclosure
//! contains the exact real result.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, FromPrimitive};

use crate::error::{Error, Result};
use crate::poly::polynomial::Polynomial;
use crate::scalar::Rational;

#[derive(Clone, Copy, PartialEq)]
pub struct Interval<F: Float = f64> {
    lo: F,
    hi: F,
}

fn down<F: Float>(x: F) -> F {
    if x.is_infinite() {
        return x;
    }
    x - (x.abs() * F::epsilon() + F::min_positive_value())
}

fn up<F: Float>(x: F) -> F {
    if x.is_infinite() {
        return x;
    }
    x + (x.abs() * F::epsilon() + F::min_positive_value())
}

impl<F: Float + FromPrimitive> Interval<F> {
    pub fn new(lo: F, hi: F) -> Self {
        assert!(lo <= hi, "interval lower bound exceeds upper bound");
        Interval { lo, hi }
    }

    pub fn point(x: F) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(q: &Rational) -> Self {
        let v = F::from_f64(crate::scalar::rational_to_f64(q)).unwrap_or_else(F::nan);
        Interval { lo: down(v), hi: up(v) }
    }

    pub fn lo(&self) -> F {
        self.lo
    }

    pub fn hi(&self) -> F {
        self.hi
    }

    pub fn width(&self) -> F {
        self.hi - self.lo
    }

    pub fn mid(&self) -> F {
        self.lo + (self.hi - self.lo) / (F::one() + F::one())
    }

    pub fn contains(&self, x: F) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval<F>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Largest absolute value attained.
    pub fn mag(&self) -> F {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn split(&self) -> (Self, Self) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn scale(&self, c: F) -> Self {
        let a = self.lo * c;
        let b = self.hi * c;
        Interval { lo: down(a.min(b)), hi: up(a.max(b)) }
    }

    /// Tight power: even exponents over a zero-straddling interval start at 0.
    pub fn powi(&self, e: u32) -> Self {
        if e == 0 {
            return Interval::point(F::one());
        }
        let a = self.lo.powi(e as i32);
        let b = self.hi.powi(e as i32);
        if e % 2 == 1 || self.lo >= F::zero() {
            Interval { lo: down(a), hi: up(b) }
        } else if self.hi <= F::zero() {
            Interval { lo: down(b), hi: up(a) }
        } else {
            Interval { lo: F::zero(), hi: up(a.max(b)) }
        }
    }
}

impl<F: Float + FromPrimitive> Add for Interval<F> {
    type Output = Interval<F>;
    fn add(self, rhs: Self) -> Self {
        Interval { lo: down(self.lo + rhs.lo), hi: up(self.hi + rhs.hi) }
    }
}

impl<F: Float + FromPrimitive> Sub for Interval<F> {
    type Output = Interval<F>;
    fn sub(self, rhs: Self) -> Self {
        Interval { lo: down(self.lo - rhs.hi), hi: up(self.hi - rhs.lo) }
    }
}

impl<F: Float + FromPrimitive> Neg for Interval<F> {
    type Output = Interval<F>;
    fn neg(self) -> Self {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl<F: Float + FromPrimitive> Mul for Interval<F> {
    type Output = Interval<F>;
    fn mul(self, rhs: Self) -> Self {
        let c = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = c.iter().copied().fold(F::infinity(), F::min);
        let hi = c.iter().copied().fold(F::neg_infinity(), F::max);
        Interval { lo: down(lo), hi: up(hi) }
    }
}

impl<F: Float + fmt::Display> fmt::Debug for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Natural interval extension of `p` over an axis-aligned box. The result
/// encloses the true range of `p` on the box.
pub fn interval_evaluate<F: Float + FromPrimitive>(p: &Polynomial<Rational>, bx: &[Interval<F>]) -> Result<Interval<F>> {
    if bx.len() != p.var_count() {
        return Err(Error::DimensionMismatch { expected: p.var_count(), got: bx.len() });
    }
    let mut acc = Interval::point(F::zero());
    for (m, c) in p.terms() {
        let mut t = Interval::from_rational(c);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = t * bx[i].powi(e);
            }
        }
        acc = acc + t;
    }
    Ok(acc)
}

/// [`interval_evaluate`] for a polynomial with `f64` coefficients.
pub fn interval_evaluate_f64(p: &Polynomial<f64>, bx: &[Interval<f64>]) -> Result<Interval<f64>> {
    if bx.len() != p.var_count() {
        return Err(Error::DimensionMismatch { expected: p.var_count(), got: bx.len() });
    }
    let mut acc = Interval::point(0.0);
    for (m, &c) in p.terms() {
        let mut t = Interval::new(down(c), up(c));
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = t * bx[i].powi(e);
            }
        }
        acc = acc + t;
    }
    Ok(acc)
}

/// Enclosure of the Euclidean norm of the gradient of `p` over the box.
pub fn gradient_norm_bound<F: Float + FromPrimitive>(p: &Polynomial<Rational>, bx: &[Interval<F>]) -> Result<F> {
    let mut sq = F::zero();
    for v in 0..p.var_count() {
        let g = interval_evaluate(&p.partial_derivative(v), bx)?.mag();
        sq = sq + g * g;
    }
    Ok(up(sq.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_from_int as q;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn square_over_symmetric_interval() {
        let p = Polynomial::var(1, 0).pow(2);
        let r = interval_evaluate(&p, &[iv(-1.0, 1.0)]).unwrap();
        assert!(r.contains_interval(&iv(0.0, 1.0)));
        assert!(r.lo() >= -1e-12 && r.hi() <= 1.0 + 1e-12);
    }

    #[test]
    fn sum_over_unit_square() {
        let p: Polynomial = Polynomial::var(2, 0) + Polynomial::var(2, 1);
        let r = interval_evaluate(&p, &[iv(0.0, 1.0), iv(0.0, 1.0)]).unwrap();
        assert!(r.contains_interval(&iv(0.0, 2.0)));
    }

    #[test]
    fn product_encloses_sampled_range() {
        let p: Polynomial = Polynomial::var(2, 0) * Polynomial::var(2, 1);
        let r = interval_evaluate(&p, &[iv(-1.0, 1.0), iv(-1.0, 1.0)]).unwrap();
        let pf = p.to_f64();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..100 {
            for j in 0..100 {
                let x = -1.0 + 2.0 * i as f64 / 99.0;
                let y = -1.0 + 2.0 * j as f64 / 99.0;
                let v = pf.evaluate(&[x, y]).unwrap();
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        // corners are on the grid, so the sampled range is exactly [-1, 1]
        assert_eq!((lo, hi), (-1.0, 1.0));
        assert!(r.contains_interval(&iv(lo, hi)));
    }

    #[test]
    fn dimension_mismatch() {
        let p: Polynomial = Polynomial::var(2, 0);
        assert!(interval_evaluate(&p, &[iv(0.0, 1.0)]).is_err());
    }

    #[test]
    fn gradient_bound_of_sphere() {
        let mut p: Polynomial = Polynomial::constant(2, -q(1));
        for i in 0..2 {
            p = p + Polynomial::var(2, i).pow(2);
        }
        let g = gradient_norm_bound(&p, &[iv(-1.0, 1.0), iv(-1.0, 1.0)]).unwrap();
        assert!(g >= 8f64.sqrt() && g < 8f64.sqrt() + 1e-9);
    }
}
