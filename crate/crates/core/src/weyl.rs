//! Compositions of `k` as faces of the Weyl chamber `x_1 <= ... <= x_k`.
//!
//! A composition `(l_1, ..., l_m)` is stored as its breakpoint set
//! `{l_1, l_1 + l_2, ...} ⊆ {1, ..., k-1}`, encoded as a bitmask. The face
//! order `λ ≺ μ` (`W_λ ⊆ W_μ`) is breakpoint inclusion and the meet is
//! intersection.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::BlockSpec;

pub const MAX_K: usize = 64;
/// Enumeration limit on the number of faces.
pub const MAX_FACES: usize = 1 << 16;
/// Enumeration limit on the number of chains.
pub const MAX_CHAINS: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Composition {
    k: usize,
    // bit b-1 set <=> b is a breakpoint
    mask: u64,
}

impl Composition {
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition("no parts".into()));
        }
        if let Some(p) = parts.iter().find(|&&p| p == 0) {
            return Err(Error::InvalidComposition(format!("nonpositive part {p}")));
        }
        let k: usize = parts.iter().sum();
        if k > MAX_K {
            return Err(Error::InvalidComposition(format!("k = {k} exceeds {MAX_K}")));
        }
        let mut mask = 0u64;
        let mut acc = 0;
        for &p in &parts[..parts.len() - 1] {
            acc += p;
            mask |= 1 << (acc - 1);
        }
        Ok(Composition { k, mask })
    }

    pub fn from_breakpoints(k: usize, breakpoints: &[usize]) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::InvalidComposition(format!("k = {k} must lie in 1..={MAX_K}")));
        }
        let mut mask = 0u64;
        for &b in breakpoints {
            if b == 0 || b >= k {
                return Err(Error::InvalidComposition(format!("breakpoint {b} outside 1..{k}")));
            }
            mask |= 1 << (b - 1);
        }
        Ok(Composition { k, mask })
    }

    pub fn from_mask(k: usize, mask: u64) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::InvalidComposition(format!("k = {k} must lie in 1..={MAX_K}")));
        }
        let allowed = if k == 1 { 0 } else { u64::MAX >> (64 - (k - 1)) };
        if mask & !allowed != 0 {
            return Err(Error::InvalidComposition(format!("mask {mask:#b} has breakpoints outside 1..{k}")));
        }
        Ok(Composition { k, mask })
    }

    /// The one-part composition `(k)`, the bottom of the poset.
    pub fn whole(k: usize) -> Result<Self> {
        Composition::from_mask(k, 0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Number of parts, `card(breakpoints) + 1`.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn breakpoints(&self) -> Vec<usize> {
        (1..self.k).filter(|b| self.mask >> (b - 1) & 1 == 1).collect()
    }

    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut prev = 0;
        for b in self.breakpoints().into_iter().chain(std::iter::once(self.k)) {
            out.push(b - prev);
            prev = b;
        }
        out
    }

    fn same_k(&self, other: &Composition) -> Result<()> {
        if self.k != other.k {
            return Err(Error::CompositionMismatch(self.k, other.k));
        }
        Ok(())
    }

    /// `self ≺ other`, i.e. `W_self ⊆ W_other` (reflexive).
    pub fn precedes(&self, other: &Composition) -> Result<bool> {
        self.same_k(other)?;
        Ok(self.mask & !other.mask == 0)
    }

    /// Greatest lower bound: `W_meet = W_self ∩ W_other`.
    pub fn meet(&self, other: &Composition) -> Result<Composition> {
        self.same_k(other)?;
        Ok(Composition { k: self.k, mask: self.mask & other.mask })
    }

    /// Embeds face coordinates `t` into `R^k` by repeating `t_i` `λ_i` times.
    pub fn expand<T: Clone>(&self, t: &[T]) -> Vec<T> {
        assert_eq!(t.len(), self.len());
        self.parts().iter().zip(t).flat_map(|(&p, v)| std::iter::repeat_n(v.clone(), p)).collect()
    }

    fn sort_key(&self) -> (usize, Vec<usize>) {
        (self.len(), self.parts())
    }
}

impl Ord for Composition {
    /// Canonical listing order: by length, then parts lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.k.cmp(&other.k).then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts().serialize(s)
    }
}

/// Strictly increasing sequence of faces over a common `k`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Chain(Vec<Composition>);

impl Chain {
    pub fn new(elements: Vec<Composition>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("chains are nonempty".into()));
        }
        for w in elements.windows(2) {
            if !w[0].precedes(&w[1])? || w[0] == w[1] {
                return Err(Error::InvalidArgument(format!("{} does not strictly precede {}", w[0], w[1])));
            }
        }
        Ok(Chain(elements))
    }

    pub fn elements(&self) -> &[Composition] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" ≺ "))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One composition per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiComposition(pub Vec<Composition>);

impl MultiComposition {
    pub fn new(parts: Vec<Composition>, blocks: &BlockSpec) -> Result<Self> {
        if parts.len() != blocks.block_count() {
            return Err(Error::DimensionMismatch { expected: blocks.block_count(), got: parts.len() });
        }
        for (c, &k) in parts.iter().zip(blocks.block_sizes()) {
            if c.k() != k {
                return Err(Error::CompositionMismatch(c.k(), k));
            }
        }
        Ok(MultiComposition(parts))
    }

    /// Componentwise order.
    pub fn precedes(&self, other: &MultiComposition) -> Result<bool> {
        if self.0.len() != other.0.len() {
            return Err(Error::DimensionMismatch { expected: self.0.len(), got: other.0.len() });
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.precedes(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn compositions_of(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < parts {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        for mut rest in compositions_of(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `CompMax(k, d)`: length-`d` compositions with `λ_1 = λ_3 = λ_5 = ... = 1`.
/// By convention `comp_max(k, 1) = {(k)}`.
pub fn comp_max(k: usize, d: usize) -> Result<Vec<Composition>> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidArgument("k and d must be positive".into()));
    }
    if d > k {
        return Err(Error::InvalidArgument(format!("comp_max needs d <= k (got d = {d}, k = {k}); use comp_kd")));
    }
    if d == 1 {
        return Ok(vec![Composition::whole(k)?]);
    }
    let fixed = d.div_ceil(2);
    let free = d / 2;
    let mut out = Vec::new();
    for evens in compositions_of(k - fixed, free) {
        let mut parts = Vec::with_capacity(d);
        for i in 0..d {
            parts.push(if i % 2 == 0 { 1 } else { evens[i / 2] });
        }
        out.push(Composition::from_parts(&parts)?);
    }
    out.sort();
    Ok(out)
}

/// `Comp(k, d)`: the downward closure of `CompMax(k, d)` when `d <= k`, all
/// of `Comp(k)` otherwise.
pub fn comp_kd(k: usize, d: usize) -> Result<Vec<Composition>> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidArgument("k and d must be positive".into()));
    }
    let tops: Vec<u64> = if d >= k {
        if k - 1 > 16 {
            return Err(Error::SizeLimit(format!("Comp({k}) has 2^{} elements", k - 1)));
        }
        vec![if k == 1 { 0 } else { u64::MAX >> (64 - (k - 1)) }]
    } else {
        comp_max(k, d)?.iter().map(|c| c.mask()).collect()
    };
    let mut seen: HashSet<u64> = HashSet::new();
    for top in tops {
        let mut sub = top;
        loop {
            seen.insert(sub);
            if seen.len() > MAX_FACES {
                return Err(Error::SizeLimit(format!("Comp({k},{d}) exceeds {MAX_FACES} faces")));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & top;
        }
    }
    let mut out: Vec<Composition> = seen.into_iter().map(|m| Composition { k, mask: m }).collect();
    out.sort();
    Ok(out)
}

/// Covering pairs `(i, j)` of the poset (indices into `faces`).
pub fn hasse_edges(faces: &[Composition]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if a.k == b.k && a.mask & !b.mask == 0 && b.len() == a.len() + 1 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Number of nonempty chains of a face family, by the recursion
/// `f(λ) = 1 + Σ_{μ ≺ λ, μ ≠ λ} f(μ)`, total `Σ_λ f(λ)`.
pub fn count_chains_in(faces: &[Composition]) -> BigUint {
    let index: HashMap<u64, usize> = faces.iter().enumerate().map(|(i, c)| (c.mask, i)).collect();
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by_key(|&i| faces[i].mask.count_ones());
    let mut f: Vec<BigUint> = vec![BigUint::zero(); faces.len()];
    for &i in &order {
        let top = faces[i].mask;
        let mut acc = BigUint::one();
        if top != 0 {
            let mut sub = (top - 1) & top;
            loop {
                if let Some(&j) = index.get(&sub) {
                    acc += &f[j];
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & top;
            }
        }
        f[i] = acc;
    }
    f.into_iter().sum()
}

/// Exact number of nonempty chains of `Comp(k, d)`.
pub fn count_chains(k: usize, d: usize) -> Result<BigUint> {
    Ok(count_chains_in(&comp_kd(k, d)?))
}

/// Lists every nonempty chain of `Comp(k, d)` in canonical order (by length,
/// then elementwise in face order).
pub fn enumerate_chains(k: usize, d: usize) -> Result<Vec<Chain>> {
    let faces = comp_kd(k, d)?;
    let above: Vec<Vec<usize>> = faces
        .iter()
        .map(|a| (0..faces.len()).filter(|&j| faces[j] != *a && a.mask & !faces[j].mask == 0).collect())
        .collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..faces.len()).rev().map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        if out.len() >= MAX_CHAINS {
            return Err(Error::SizeLimit(format!("more than {MAX_CHAINS} chains")));
        }
        let last = *chain.last().unwrap();
        for &j in above[last].iter().rev() {
            let mut next = chain.clone();
            next.push(j);
            stack.push(next);
        }
        out.push(chain);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out.into_iter().map(|idx| Chain(idx.into_iter().map(|i| faces[i]).collect())).collect())
}

/// Chain list together with the independently computed count.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub chains: Vec<Chain>,
    #[serde(serialize_with = "crate::scalar::serialize_biguint")]
    pub count: BigUint,
}

/// Enumerates the chains of `Comp(k, d)` and checks the enumeration against
/// the recursive count.
pub fn chains(k: usize, d: usize) -> Result<ChainReport> {
    let chains = enumerate_chains(k, d)?;
    let count = count_chains(k, d)?;
    if BigUint::from(chains.len()) != count {
        return Err(Error::InvalidArgument(format!("chain enumeration ({}) disagrees with count ({count})", chains.len())));
    }
    Ok(ChainReport { chains, count })
}

/// The closed-form chain bound
/// `F(d, k) = (2^d - 1) Π_{i=1}^{⌊d/2⌋-1} (k - ⌈d/2⌉ - i)` for `d <= k`, and
/// `(2^k - 1)(k - 1)!` for `d > k`.
pub fn paper_chain_bound(k: usize, d: usize) -> BigUint {
    if d > k {
        let mut fact = BigUint::one();
        for i in 1..k {
            fact *= BigUint::from(i);
        }
        return ((BigUint::one() << k) - BigUint::one()) * fact;
    }
    let mut acc = (BigUint::one() << d) - BigUint::one();
    let half_up = d.div_ceil(2);
    for i in 1..(d / 2) {
        acc *= BigUint::from(k - half_up - i);
    }
    acc
}

/// Product of per-block exact chain counts.
pub fn multi_chains(blocks: &BlockSpec) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for (&k, &d) in blocks.block_sizes().iter().zip(blocks.degree_caps()) {
        acc *= count_chains(k, d as usize)?;
    }
    Ok(acc)
}

/// An instance where the exact chain count exceeds the closed-form bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainDiscrepancy {
    pub k: usize,
    pub d: usize,
    #[serde(serialize_with = "crate::scalar::serialize_biguint")]
    pub exact: BigUint,
    #[serde(serialize_with = "crate::scalar::serialize_biguint")]
    pub bound: BigUint,
}

pub fn chain_discrepancy(k: usize, d: usize) -> Result<Option<ChainDiscrepancy>> {
    let exact = count_chains(k, d)?;
    let bound = paper_chain_bound(k, d);
    Ok((exact > bound).then_some(ChainDiscrepancy { k, d, exact, bound }))
}
