//! Cubical complexes sampled from a membership oracle and their Betti
//! numbers over `Q` and `Z/2`.
//!
//! Cells are addressed in doubled coordinates: along each axis an even value
//! `2i` is the grid point `i` and an odd value `2i + 1` the interval
//! `[i, i + 1]`. A cell's dimension is its number of odd coordinates.

use std::collections::{BTreeMap, HashMap};

use bitvec::prelude::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vandermonde::Membership;

pub const MAX_AMBIENT_DIM: usize = 6;
pub const MAX_CELLS_PER_AXIS: usize = 512;
/// Upper limit on the size of the doubled grid.
pub const MAX_GRID_CELLS: usize = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Z2")]
    Z2,
}

impl Field {
    pub fn parse(text: &str) -> Result<Field> {
        match text.trim() {
            "Q" | "q" | "QQ" | "rational" => Ok(Field::Rational),
            "Z2" | "z2" | "F2" | "GF2" => Ok(Field::Z2),
            other => Err(Error::InvalidArgument(format!("unknown field {other:?} (expected Q or Z2)"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Field::Rational => "Q",
            Field::Z2 => "Z2",
        }
    }
}

/// `b^0, ..., b^n` over one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub field: Field,
    pub values: Vec<usize>,
    pub euler: i64,
}

impl BettiVector {
    pub fn new(field: Field, values: Vec<usize>) -> Self {
        let euler = values.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        BettiVector { field, values, euler }
    }

    pub fn get(&self, i: usize) -> usize {
        self.values.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }

    /// Drops entries above degree `max_degree`.
    pub fn truncated(&self, max_degree: usize) -> Vec<usize> {
        (0..=max_degree).map(|i| self.get(i)).collect()
    }
}

/// An axis-aligned box `Π [lo_j, hi_j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl GridBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidArgument("box bounds must be nonempty and of equal length".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u) || !l.is_finite() || !u.is_finite()) {
            return Err(Error::InvalidArgument("box needs finite bounds with lo < hi on every axis".into()));
        }
        Ok(GridBox { lower, upper })
    }

    /// The cube `[-r, r]^n`.
    pub fn cube(n: usize, r: f64) -> Result<Self> {
        GridBox::new(vec![-r; n], vec![r; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// A cubical complex on a regular grid, stored as a bitset over doubled
/// coordinates and closed under taking faces.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    shape: Vec<usize>,
    extent: Vec<usize>,
    strides: Vec<usize>,
    bounds: GridBox,
    resolution: f64,
    cells: BitVec,
    undecided_cells: usize,
}

impl CubicalComplex {
    /// An empty complex on an `N_1 × ... × N_n` grid.
    pub fn empty(shape: Vec<usize>, bounds: GridBox, resolution: f64) -> Result<Self> {
        let n = shape.len();
        if n == 0 || n > MAX_AMBIENT_DIM {
            return Err(Error::SizeLimit(format!("ambient dimension {n} outside 1..={MAX_AMBIENT_DIM}")));
        }
        if bounds.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: bounds.dim() });
        }
        if shape.iter().any(|&s| s == 0 || s > MAX_CELLS_PER_AXIS) {
            return Err(Error::SizeLimit(format!("grid shape {shape:?} needs 1..={MAX_CELLS_PER_AXIS} cells per axis")));
        }
        let extent: Vec<usize> = shape.iter().map(|&s| 2 * s + 1).collect();
        let mut total: usize = 1;
        for &e in &extent {
            total = total.checked_mul(e).filter(|&t| t <= MAX_GRID_CELLS).ok_or_else(|| {
                Error::SizeLimit(format!("grid {shape:?} exceeds {MAX_GRID_CELLS} doubled cells"))
            })?;
        }
        let mut strides = vec![1; n];
        for j in 1..n {
            strides[j] = strides[j - 1] * extent[j - 1];
        }
        Ok(CubicalComplex { shape, extent, strides, bounds, resolution, cells: bitvec![0; total], undecided_cells: 0 })
    }

    /// The complex generated by the given cells (doubled coordinates) on a
    /// grid of the given shape over the unit-spaced box.
    pub fn from_cells(shape: Vec<usize>, cells: &[Vec<usize>]) -> Result<Self> {
        let bounds = GridBox::new(vec![0.0; shape.len()], shape.iter().map(|&s| s as f64).collect())?;
        let mut c = CubicalComplex::empty(shape, bounds, 1.0)?;
        for code in cells {
            if code.len() != c.shape.len() || code.iter().zip(&c.extent).any(|(&v, &e)| v >= e) {
                return Err(Error::InvalidArgument(format!("cell {code:?} is not on the grid")));
            }
            let idx = c.encode(code);
            c.add_with_faces(idx);
        }
        Ok(c)
    }

    pub fn ambient_dim(&self) -> usize {
        self.shape.len()
    }

    pub fn grid_shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn bounds(&self) -> &GridBox {
        &self.bounds
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn undecided_cells(&self) -> usize {
        self.undecided_cells
    }

    fn encode(&self, code: &[usize]) -> usize {
        code.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    fn decode(&self, mut idx: usize, out: &mut [usize]) {
        for (j, &e) in self.extent.iter().enumerate() {
            out[j] = idx % e;
            idx /= e;
        }
    }

    fn cell_dim(&self, idx: usize) -> usize {
        let mut idx = idx;
        let mut d = 0;
        for &e in &self.extent {
            d += (idx % e) & 1;
            idx /= e;
        }
        d
    }

    pub fn contains(&self, code: &[usize]) -> bool {
        code.len() == self.shape.len() && code.iter().zip(&self.extent).all(|(&v, &e)| v < e) && self.cells[self.encode(code)]
    }

    /// Inserts a cell and all of its faces.
    fn add_with_faces(&mut self, idx: usize) {
        let n = self.shape.len();
        let mut code = vec![0; n];
        self.decode(idx, &mut code);
        let odd: Vec<usize> = (0..n).filter(|&j| code[j] & 1 == 1).collect();
        // every face picks, per odd axis, the interval itself or one endpoint
        let combos = 3usize.pow(odd.len() as u32);
        for mut c in 0..combos {
            let mut face = idx;
            for &j in &odd {
                match c % 3 {
                    1 => face -= self.strides[j],
                    2 => face += self.strides[j],
                    _ => {}
                }
                c /= 3;
            }
            self.cells.set(face, true);
        }
    }

    /// Iterator over the linear indices of stored cells.
    fn stored(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter_ones()
    }

    /// Doubled coordinates of every stored cell, in index order.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let n = self.shape.len();
        self.stored()
            .map(|idx| {
                let mut code = vec![0; n];
                self.decode(idx, &mut code);
                code
            })
            .collect()
    }

    /// Number of stored cells of each dimension `0..=n`.
    pub fn cell_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.shape.len() + 1];
        for idx in self.stored() {
            counts[self.cell_dim(idx)] += 1;
        }
        counts
    }

    pub fn cell_count(&self) -> usize {
        self.cells.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.not_any()
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.cell_counts().iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// True when every face of a stored cell is stored.
    pub fn is_closed(&self) -> bool {
        let n = self.shape.len();
        let mut code = vec![0; n];
        for idx in self.stored() {
            self.decode(idx, &mut code);
            for j in 0..n {
                if code[j] & 1 == 1 && !(self.cells[idx - self.strides[j]] && self.cells[idx + self.strides[j]]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.ambient_dim(),
            "resolution": self.resolution,
            "shape": self.shape,
            "lower": self.bounds.lower,
            "upper": self.bounds.upper,
            "cells": self.cells(),
        })
    }

    /// Union of two complexes on the same grid.
    pub fn union(&self, other: &CubicalComplex) -> Result<CubicalComplex> {
        if self.shape != other.shape {
            return Err(Error::InvalidArgument("complexes live on different grids".into()));
        }
        let mut out = self.clone();
        out.cells |= &other.cells;
        out.undecided_cells += other.undecided_cells;
        Ok(out)
    }

    /// Intersection of two complexes on the same grid.
    pub fn intersection(&self, other: &CubicalComplex) -> Result<CubicalComplex> {
        if self.shape != other.shape {
            return Err(Error::InvalidArgument("complexes live on different grids".into()));
        }
        let mut out = self.clone();
        out.cells &= &other.cells;
        Ok(out)
    }
}

/// Per-axis cell counts for a box sampled at edge length `resolution`.
pub fn grid_shape(bounds: &GridBox, resolution: f64) -> Result<Vec<usize>> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::InvalidArgument(format!("resolution must be positive, got {resolution}")));
    }
    bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(l, u)| {
            let n = ((u - l) / resolution - 1e-9).ceil().max(1.0);
            if n > MAX_CELLS_PER_AXIS as f64 {
                Err(Error::SizeLimit(format!(
                    "resolution {resolution} gives {n} cells on an axis of width {}; limit is {MAX_CELLS_PER_AXIS}",
                    u - l
                )))
            } else {
                Ok(n as usize)
            }
        })
        .collect()
}

/// Samples `oracle` at the centre of every top cell of the grid over
/// `bounds`; cells reported inside or undecided are kept with their faces.
pub fn build_cubical<O>(oracle: O, bounds: &GridBox, resolution: f64) -> Result<CubicalComplex>
where
    O: Fn(&[f64]) -> Result<Membership> + Sync,
{
    let shape = grid_shape(bounds, resolution)?;
    let mut complex = CubicalComplex::empty(shape.clone(), bounds.clone(), resolution)?;
    let n = shape.len();
    let edge: Vec<f64> = (0..n).map(|j| (bounds.upper[j] - bounds.lower[j]) / shape[j] as f64).collect();
    let top: usize = shape.iter().product();
    let statuses: Vec<Membership> = (0..top)
        .into_par_iter()
        .map(|mut cell| {
            let mut centre = vec![0.0; n];
            for j in 0..n {
                let i = cell % shape[j];
                cell /= shape[j];
                centre[j] = bounds.lower[j] + (i as f64 + 0.5) * edge[j];
            }
            oracle(&centre)
        })
        .collect::<Result<_>>()?;
    let mut code = vec![0; n];
    for (mut cell, status) in statuses.into_iter().enumerate() {
        if status == Membership::Outside {
            continue;
        }
        if status == Membership::Undecided {
            complex.undecided_cells += 1;
        }
        for j in 0..n {
            code[j] = 2 * (cell % shape[j]) + 1;
            cell /= shape[j];
        }
        let idx = complex.encode(&code);
        complex.add_with_faces(idx);
    }
    Ok(complex)
}

/// Removes free-face pairs until none remain. The result is a subset of the
/// cells with the same homotopy type.
fn collapse(c: &CubicalComplex) -> BitVec {
    let n = c.shape.len();
    let mut present = c.cells.clone();
    let mut queue: Vec<usize> = c.stored().filter(|&i| c.cell_dim(i) < n).collect();
    let mut code = vec![0; n];
    while let Some(s) = queue.pop() {
        if !present[s] {
            continue;
        }
        c.decode(s, &mut code);
        let mut count = 0;
        let mut coface = 0;
        for j in 0..n {
            if code[j] & 1 == 1 {
                continue;
            }
            if code[j] > 0 && present[s - c.strides[j]] {
                count += 1;
                coface = s - c.strides[j];
            }
            if code[j] + 1 < c.extent[j] && present[s + c.strides[j]] {
                count += 1;
                coface = s + c.strides[j];
            }
            if count > 1 {
                break;
            }
        }
        if count != 1 {
            continue;
        }
        present.set(s, false);
        present.set(coface, false);
        for cell in [s, coface] {
            c.decode(cell, &mut code);
            for j in 0..n {
                if code[j] & 1 == 1 {
                    for f in [cell - c.strides[j], cell + c.strides[j]] {
                        if present[f] {
                            queue.push(f);
                        }
                    }
                }
            }
        }
    }
    present
}

/// Signed boundary of a cell as `(face index, ±1)` pairs.
fn boundary(c: &CubicalComplex, idx: usize, code: &mut [usize]) -> Vec<(usize, i8)> {
    c.decode(idx, code);
    let mut out = Vec::new();
    let mut sign = 1i8;
    for j in 0..code.len() {
        if code[j] & 1 == 1 {
            out.push((idx + c.strides[j], sign));
            out.push((idx - c.strides[j], -sign));
            sign = -sign;
        }
    }
    out
}

fn rank_z2(columns: Vec<Vec<u32>>) -> usize {
    let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut rank = 0;
    for mut col in columns {
        col.sort_unstable();
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(p) => col = symmetric_difference(&col, p),
                None => {
                    pivots.insert(low, col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

type QColumn = Vec<(u32, BigInt)>;

/// `a*x - b*y` on sorted sparse columns, reduced by the content gcd.
fn combine(x: &QColumn, a: &BigInt, y: &QColumn, b: &BigInt) -> QColumn {
    let mut out: QColumn = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && g != BigInt::from(1) {
        for (_, v) in out.iter_mut() {
            *v = &*v / &g;
        }
    }
    out
}

/// Rank over `Q` by fraction-free column elimination on integer columns.
fn rank_q(columns: Vec<QColumn>) -> usize {
    let mut pivots: HashMap<u32, QColumn> = HashMap::new();
    let mut rank = 0;
    for mut col in columns {
        col.sort_unstable_by_key(|e| e.0);
        while let Some((low, lv)) = col.last().cloned() {
            match pivots.get(&low) {
                Some(p) => {
                    let pv = &p.last().unwrap().1;
                    col = combine(&col, pv, p, &lv);
                }
                None => {
                    if lv.is_negative() {
                        for e in col.iter_mut() {
                            e.1 = -&e.1;
                        }
                    }
                    pivots.insert(low, col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Betti numbers `b^0..b^n` of the complex over `field`.
///
/// The complex is first reduced by elementary collapses; ranks of the
/// boundary maps of what remains give `b^i = c_i - rank ∂_i - rank ∂_{i+1}`.
pub fn betti_numbers(c: &CubicalComplex, field: Field) -> BettiVector {
    let n = c.ambient_dim();
    let core = collapse(c);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for idx in core.iter_ones() {
        by_dim[c.cell_dim(idx)].push(idx);
    }
    let position: Vec<HashMap<usize, u32>> =
        by_dim.iter().map(|cells| cells.iter().enumerate().map(|(i, &idx)| (idx, i as u32)).collect()).collect();
    let mut ranks = vec![0usize; n + 2];
    let mut code = vec![0; n];
    for q in 1..=n {
        let cells = &by_dim[q];
        if cells.is_empty() || by_dim[q - 1].is_empty() {
            continue;
        }
        ranks[q] = match field {
            Field::Z2 => rank_z2(
                cells.iter().map(|&idx| boundary(c, idx, &mut code).into_iter().map(|(f, _)| position[q - 1][&f]).collect()).collect(),
            ),
            Field::Rational => rank_q(
                cells
                    .iter()
                    .map(|&idx| {
                        boundary(c, idx, &mut code).into_iter().map(|(f, s)| (position[q - 1][&f], BigInt::from(s))).collect()
                    })
                    .collect(),
            ),
        };
    }
    let values = (0..=n).map(|q| by_dim[q].len() - ranks[q] - ranks[q + 1]).collect();
    let betti = BettiVector::new(field, values);
    debug_assert_eq!(betti.euler, c.euler_characteristic());
    betti
}

/// Betti report with a two-resolution stability flag.
#[derive(Clone, Debug, Serialize)]
pub struct BettiReport {
    pub field: Field,
    pub betti: Vec<usize>,
    pub euler: i64,
    pub stable: bool,
    pub undecided_cells: usize,
    #[serde(skip)]
    pub coarse: Vec<usize>,
    #[serde(skip)]
    pub resolution: f64,
}

/// Computes Betti numbers at `resolution` and `resolution / 2`; the finer
/// result is returned and `stable` records whether the two agree.
pub fn stable_betti<O>(oracle: O, bounds: &GridBox, resolution: f64, field: Field) -> Result<(BettiReport, CubicalComplex)>
where
    O: Fn(&[f64]) -> Result<Membership> + Sync,
{
    let coarse = betti_numbers(&build_cubical(&oracle, bounds, resolution)?, field);
    let fine_complex = build_cubical(&oracle, bounds, resolution / 2.0)?;
    let fine = betti_numbers(&fine_complex, field);
    let report = BettiReport {
        field,
        stable: coarse.values == fine.values,
        euler: fine.euler,
        coarse: coarse.values,
        betti: fine.values,
        undecided_cells: fine_complex.undecided_cells(),
        resolution: resolution / 2.0,
    };
    Ok((report, fine_complex))
}

/// Right-hand side of the Mayer–Vietoris inequality
/// `b^i(S_1 ∪ ... ∪ S_s) <= Σ_{j=1}^{i+1} Σ_{|J|=j} b^{i-j+1}(S_J)`,
/// where `S_J` is the intersection over `J` (1-based indices).
pub fn mv_union_bound(set_count: usize, bettis: &BTreeMap<Vec<usize>, Vec<usize>>, i: usize) -> Result<usize> {
    if set_count == 0 {
        return Err(Error::InvalidArgument("need at least one set".into()));
    }
    let mut total = 0;
    for j in 1..=(i + 1).min(set_count) {
        for subset in subsets(set_count, j) {
            let b = bettis.get(&subset).ok_or_else(|| Error::MissingSubset(subset.clone()))?;
            total += b.get(i + 1 - j).copied().unwrap_or(0);
        }
    }
    Ok(total)
}

/// `j`-element subsets of `{1..s}` in lexicographic order.
fn subsets(s: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=j).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..j).rev().find(|&p| cur[p] < s - (j - 1 - p)) else { return out };
        cur[pos] += 1;
        for q in pos + 1..j {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inside_if(pred: impl Fn(&[f64]) -> bool + Sync) -> impl Fn(&[f64]) -> Result<Membership> + Sync {
        move |p| Ok(if pred(p) { Membership::Inside } else { Membership::Outside })
    }

    #[test]
    fn full_square_is_contractible() {
        let b = GridBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let c = build_cubical(inside_if(|_| true), &b, 0.125).unwrap();
        assert!(c.is_closed());
        assert_eq!(c.cell_counts(), vec![81, 144, 64]);
        for field in [Field::Rational, Field::Z2] {
            assert_eq!(betti_numbers(&c, field).values, vec![1, 0, 0]);
        }
    }

    #[test]
    fn annulus() {
        let b = GridBox::cube(2, 3.0).unwrap();
        let oracle = inside_if(|p| {
            let r = p[0] * p[0] + p[1] * p[1];
            (1.0..=4.0).contains(&r)
        });
        let (report, c) = stable_betti(oracle, &b, 1.0 / 32.0, Field::Rational).unwrap();
        assert!(c.is_closed());
        assert_eq!(report.betti, vec![1, 1, 0]);
        assert_eq!(report.coarse, vec![1, 1, 0]);
        assert!(report.stable);
        assert_eq!(report.euler, c.euler_characteristic());
    }

    #[test]
    fn empty_complex() {
        let b = GridBox::cube(3, 1.0).unwrap();
        let c = build_cubical(inside_if(|_| false), &b, 0.5).unwrap();
        assert!(c.is_empty());
        assert_eq!(betti_numbers(&c, Field::Z2).values, vec![0, 0, 0, 0]);
    }

    #[test]
    fn small_explicit_complexes() {
        let v = CubicalComplex::from_cells(vec![1, 1], &[vec![0, 0]]).unwrap();
        assert_eq!(betti_numbers(&v, Field::Rational).values, vec![1, 0, 0]);
        let hollow = CubicalComplex::from_cells(vec![1, 1], &[vec![1, 0], vec![1, 2], vec![0, 1], vec![2, 1]]).unwrap();
        assert_eq!(hollow.cell_counts(), vec![4, 4, 0]);
        for field in [Field::Rational, Field::Z2] {
            assert_eq!(betti_numbers(&hollow, field).values, vec![1, 1, 0]);
        }
        let two = CubicalComplex::from_cells(vec![4, 1], &[vec![1, 1], vec![7, 1]]).unwrap();
        assert_eq!(betti_numbers(&two, Field::Rational).values, vec![2, 0, 0]);
        assert!(CubicalComplex::from_cells(vec![1, 1], &[vec![3, 0]]).is_err());
    }

    #[test]
    fn hollow_cube_has_a_void() {
        // boundary of the unit cube in R^3
        let mut cells = Vec::new();
        for axis in 0..3 {
            for end in [0, 2] {
                let mut code = vec![1, 1, 1];
                code[axis] = end;
                cells.push(code);
            }
        }
        let c = CubicalComplex::from_cells(vec![1, 1, 1], &cells).unwrap();
        for field in [Field::Rational, Field::Z2] {
            let b = betti_numbers(&c, field);
            assert_eq!(b.values, vec![1, 0, 1, 0]);
            assert_eq!(b.euler, 2);
        }
    }

    #[test]
    fn thin_slab_is_unstable() {
        let b = GridBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let (report, _) = stable_betti(inside_if(|p| (0.09..=0.10).contains(&p[0])), &b, 0.125, Field::Z2).unwrap();
        assert!(!report.stable);
        assert_eq!(report.betti, vec![1, 0, 0]);
        assert_eq!(report.coarse, vec![0, 0, 0]);
    }

    #[test]
    fn undecided_counts_as_inside() {
        let b = GridBox::new(vec![0.0], vec![1.0]).unwrap();
        let c = build_cubical(|p: &[f64]| Ok(if p[0] < 0.5 { Membership::Undecided } else { Membership::Outside }), &b, 0.25).unwrap();
        assert_eq!(c.undecided_cells(), 2);
        assert_eq!(betti_numbers(&c, Field::Rational).values, vec![1, 0]);
    }

    #[test]
    fn grid_limits() {
        let b = GridBox::cube(1, 1.0).unwrap();
        assert!(build_cubical(inside_if(|_| true), &b, 1e-4).is_err());
        assert!(GridBox::new(vec![1.0], vec![0.0]).is_err());
        assert!(CubicalComplex::empty(vec![2; 7], GridBox::cube(7, 1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn mayer_vietoris_examples() {
        let mut m = BTreeMap::new();
        m.insert(vec![1], vec![1, 0]);
        assert_eq!(mv_union_bound(1, &m, 0).unwrap(), 1);
        m.insert(vec![2], vec![1, 0]);
        m.insert(vec![1, 2], vec![0, 0]);
        assert_eq!(mv_union_bound(2, &m, 0).unwrap(), 2);
        // two arcs of a circle meeting in two points
        m.insert(vec![1, 2], vec![2, 0]);
        assert_eq!(mv_union_bound(2, &m, 1).unwrap(), 2);
        m.remove(&vec![1, 2]);
        assert!(matches!(mv_union_bound(2, &m, 1), Err(Error::MissingSubset(s)) if s == vec![1, 2]));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(2, 2), vec![vec![1, 2]]);
    }
}
