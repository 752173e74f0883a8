use crate::error::{Error, Result};
use crate::poly::Interval;
use crate::scalar::Real;
use crate::vandermonde::Face;
use crate::weyl::Composition;

/// Tunables for [`solve_fibre`].
#[derive(Clone, Debug)]
pub struct FibreConfig<F: Real = f64> {
    /// Maximum residual `max_m |Σ λ_i t_i^m - y_m|` of an accepted solution.
    pub tol: F,
    /// Half-width of the search box; derived from `y_2` when absent.
    pub box_radius: Option<F>,
    /// Newton starts per surviving box.
    pub newton_starts: usize,
    pub max_newton_iters: usize,
    /// Solutions closer than `dedup_factor * tol` are merged.
    pub dedup_factor: F,
    /// Allowed violation of `t_i <= t_{i+1}`.
    pub order_tol: F,
    /// Boxes inside this ∞-norm ball around a known solution are resolved.
    pub exclusion_radius: F,
    /// Boxes narrower than this that are neither excluded nor resolved are
    /// reported as undecided.
    pub min_box_width: F,
    /// Newton is only attempted on boxes at most this wide (relative to the
    /// search radius).
    pub newton_width_fraction: F,
    pub max_boxes: usize,
    /// Adjacent coordinates closer than this are tried on the merged face.
    pub wall_snap: F,
}

impl<F: Real> Default for FibreConfig<F> {
    fn default() -> Self {
        let c = |v: f64| F::from_f64(v).unwrap();
        FibreConfig {
            tol: c(1e-9),
            box_radius: None,
            newton_starts: 8,
            max_newton_iters: 60,
            dedup_factor: c(10.0),
            order_tol: c(1e-6),
            exclusion_radius: c(1e-3),
            min_box_width: c(1e-7),
            newton_width_fraction: c(0.25),
            max_boxes: 50_000,
            wall_snap: c(1e-4),
        }
    }
}

impl<F: Real> FibreConfig<F> {
    pub fn with_tol(tol: F) -> Self {
        FibreConfig { tol, ..Default::default() }
    }
}

/// A point `t` of the face `W_λ` with `Σ λ_i t_i^m ≈ y_m` for `m = 1..d'`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreSolution<F: Real = f64> {
    face: Face,
    t: Vec<F>,
    residual: F,
}

impl<F: Real> FibreSolution<F> {
    /// Checks the residual and ordering invariants.
    pub fn new(face: Face, t: Vec<F>, y: &[F], cfg: &FibreConfig<F>) -> Option<Self> {
        if t.len() != face.dim() {
            return None;
        }
        let residual = residual(face.lambda(), &t, y);
        if !(residual <= cfg.tol) {
            return None;
        }
        if t.windows(2).any(|w| w[0] - w[1] > cfg.order_tol) {
            return None;
        }
        Some(FibreSolution { face, t, residual })
    }

    pub fn face(&self) -> &Face {
        &self.face
    }

    pub fn t(&self) -> &[F] {
        &self.t
    }

    pub fn residual(&self) -> F {
        self.residual
    }

    /// The solution as a point of `R^k`.
    pub fn point(&self) -> Vec<F> {
        self.face.embed(&self.t)
    }

    /// `p_m` at the solution.
    pub fn power_sum(&self, m: u32) -> F {
        weighted(self.face.lambda(), m, &self.t)
    }
}

/// Outcome of a fibre search on one face.
#[derive(Clone, Debug)]
pub struct FibreSearch<F: Real = f64> {
    pub solutions: Vec<FibreSolution<F>>,
    /// Boxes that could be neither excluded nor attached to a solution.
    pub undecided_boxes: usize,
    pub boxes_processed: usize,
}

impl<F: Real> FibreSearch<F> {
    /// True when the search certified that no solution exists.
    pub fn certified_empty(&self) -> bool {
        self.solutions.is_empty() && self.undecided_boxes == 0
    }
}

fn weights<F: Real>(lambda: &Composition) -> Vec<F> {
    lambda.parts().iter().map(|&p| F::from_usize(p).unwrap()).collect()
}

fn weighted<F: Real>(lambda: &Composition, m: u32, t: &[F]) -> F {
    lambda.parts().iter().zip(t).fold(F::zero(), |acc, (&w, &ti)| acc + F::from_usize(w).unwrap() * ti.powi(m as i32))
}

fn residual<F: Real>(lambda: &Composition, t: &[F], y: &[F]) -> F {
    y.iter().enumerate().fold(F::zero(), |acc, (m, &ym)| {
        let r = (weighted(lambda, m as u32 + 1, t) - ym).abs();
        if r.is_nan() {
            F::infinity()
        } else {
            acc.max(r)
        }
    })
}

/// Solves `A x = b` for small dense systems; `None` when singular.
fn solve_dense<F: Real>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() <= F::min_positive_value() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![F::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Damped Gauss-Newton (Levenberg-Marquardt) on the residual vector.
fn newton<F: Real>(lambda: &Composition, y: &[F], start: &[F], cfg: &FibreConfig<F>) -> Vec<F> {
    let w = weights::<F>(lambda);
    let l = start.len();
    let mut t = start.to_vec();
    let mut mu = F::from_f64(1e-3).unwrap();
    let eval = |t: &[F]| -> Vec<F> { (0..y.len()).map(|m| weighted(lambda, m as u32 + 1, t) - y[m]).collect() };
    let norm2 = |r: &[F]| r.iter().fold(F::zero(), |a, &v| a + v * v);
    let mut r = eval(&t);
    let mut cost = norm2(&r);
    let target = cfg.tol * F::from_f64(1e-3).unwrap();
    for _ in 0..cfg.max_newton_iters {
        if !cost.is_finite() || r.iter().all(|v| v.abs() <= target) {
            break;
        }
        // J[m][i] = (m+1) λ_i t_i^m
        let jac: Vec<Vec<F>> = (0..y.len())
            .map(|m| (0..l).map(|i| F::from_usize(m + 1).unwrap() * w[i] * t[i].powi(m as i32)).collect())
            .collect();
        let mut jtj = vec![vec![F::zero(); l]; l];
        let mut jtr = vec![F::zero(); l];
        for m in 0..y.len() {
            for i in 0..l {
                jtr[i] = jtr[i] + jac[m][i] * r[m];
                for j in 0..l {
                    jtj[i][j] = jtj[i][j] + jac[m][i] * jac[m][j];
                }
            }
        }
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = row[i] + mu * (F::one() + jtj[i][i]);
            }
            let Some(step) = solve_dense(a, jtr.iter().map(|&v| -v).collect()) else {
                mu = mu * F::from_f64(10.0).unwrap();
                continue;
            };
            let cand: Vec<F> = t.iter().zip(&step).map(|(&a, &s)| a + s).collect();
            let rc = eval(&cand);
            let cc = norm2(&rc);
            if cc.is_finite() && cc < cost {
                t = cand;
                r = rc;
                cost = cc;
                mu = (mu * F::from_f64(0.3).unwrap()).max(F::from_f64(1e-12).unwrap());
                improved = true;
                break;
            }
            mu = mu * F::from_f64(10.0).unwrap();
        }
        if !improved {
            break;
        }
    }
    t
}

/// Low-discrepancy points in `[0,1]^dim` (Halton sequence, bases 2, 3, 5, ...).
fn halton<F: Real>(index: usize, dim: usize) -> Vec<F> {
    const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    (0..dim)
        .map(|d| {
            let base = PRIMES[d % PRIMES.len()];
            let (mut f, mut r, mut i) = (1.0f64, 0.0f64, index);
            while i > 0 {
                f /= base as f64;
                r += f * (i % base) as f64;
                i /= base;
            }
            F::from_f64(r).unwrap()
        })
        .collect()
}

fn box_width<F: Real>(bx: &[Interval<F>]) -> F {
    bx.iter().fold(F::zero(), |a, iv| a.max(iv.width()))
}

fn inf_dist<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&u, &v)| acc.max((u - v).abs()))
}

/// Tightens the box with the chamber order and tests whether it can still
/// hold a point of the closed chamber. Returns `None` when it cannot.
fn chamber_contract<F: Real>(bx: &[Interval<F>], slack: F) -> Option<Vec<Interval<F>>> {
    let mut lo: Vec<F> = bx.iter().map(|iv| iv.lo()).collect();
    let mut hi: Vec<F> = bx.iter().map(|iv| iv.hi()).collect();
    for i in 1..lo.len() {
        lo[i] = lo[i].max(lo[i - 1] - slack);
    }
    for i in (0..hi.len().saturating_sub(1)).rev() {
        hi[i] = hi[i].min(hi[i + 1] + slack);
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return None;
    }
    Some(lo.into_iter().zip(hi).map(|(l, h)| Interval::new(l, h)).collect())
}

fn excluded_by_intervals<F: Real>(w: &[F], y: &[F], bx: &[Interval<F>], tol: F) -> bool {
    for (m, &ym) in y.iter().enumerate() {
        let mut acc = Interval::point(-ym);
        for (iv, &wi) in bx.iter().zip(w) {
            acc = acc + iv.powi(m as u32 + 1).scale(wi);
        }
        if acc.lo() > tol || acc.hi() < -tol {
            return true;
        }
    }
    false
}

pub(crate) fn default_radius<F: Real>(lambda: &Composition, y: &[F]) -> F {
    if y.len() >= 2 {
        y[1].max(F::zero()).sqrt() + F::one()
    } else {
        let w = F::from_usize(lambda.parts()[0]).unwrap();
        (y[0] / w).abs() + F::one()
    }
}

/// Finds the points of the face `W_λ` (ordered `t_1 <= ... <= t_ℓ`) whose
/// weighted power sums match `y = (y_1, ..., y_{d'})`.
///
/// Requires `ℓ <= d'`: the system is square or overdetermined, so solutions
/// are isolated. With `stop_at_first`, the search ends at the first solution.
pub(crate) fn search<F: Real>(lambda: &Composition, y: &[F], cfg: &FibreConfig<F>, stop_at_first: bool) -> Result<FibreSearch<F>> {
    let l = lambda.len();
    if y.is_empty() {
        return Err(Error::InvalidArgument("empty target vector".into()));
    }
    if l > y.len() {
        return Err(Error::InvalidArgument(format!(
            "face {lambda} has dimension {l} > {} equations; its fibre is not finite",
            y.len()
        )));
    }
    if !(cfg.tol > F::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite target".into()));
    }
    let face = Face::new(*lambda);
    let w = weights::<F>(lambda);
    let radius = cfg.box_radius.unwrap_or_else(|| default_radius(lambda, y));
    let scale = radius.max(F::one());
    let min_width = cfg.min_box_width * scale;
    let exclusion = cfg.exclusion_radius * scale;
    let newton_width = cfg.newton_width_fraction * radius * F::from_f64(2.0).unwrap();

    let mut solutions: Vec<FibreSolution<F>> = Vec::new();
    let mut undecided = 0usize;
    let mut processed = 0usize;
    let mut stack = vec![(vec![Interval::new(-radius, radius); l], F::infinity())];
    let polish_width = F::from_f64(1e-2).unwrap() * scale;

    let accept = |sol: FibreSolution<F>, solutions: &mut Vec<FibreSolution<F>>| {
        let merge = cfg.dedup_factor * cfg.tol;
        if let Some(existing) = solutions.iter_mut().find(|s| inf_dist(&s.t, &sol.t) <= merge.max(exclusion)) {
            if sol.residual < existing.residual {
                *existing = sol;
            }
        } else {
            solutions.push(sol);
        }
    };

    while let Some((bx, parent_width)) = stack.pop() {
        processed += 1;
        if processed > cfg.max_boxes {
            undecided += stack.len() + 1;
            break;
        }
        let Some(bx) = chamber_contract(&bx, cfg.order_tol) else { continue };
        if excluded_by_intervals(&w, y, &bx, cfg.tol) {
            continue;
        }
        let center: Vec<F> = bx.iter().map(|iv| iv.mid()).collect();
        let near_known = |p: &[F], solutions: &[FibreSolution<F>]| solutions.iter().any(|s| inf_dist(&s.t, p) <= exclusion);
        let half = box_width(&bx) / F::from_f64(2.0).unwrap();
        if solutions.iter().any(|s| inf_dist(&s.t, &center) + half <= exclusion) {
            continue;
        }
        let width = box_width(&bx);
        let crossing = width <= newton_width && parent_width > newton_width;
        if crossing || processed == 1 || width <= polish_width {
            let starts = if crossing || processed == 1 { cfg.newton_starts.max(1) } else { 1 };
            for s in 0..starts {
                let start: Vec<F> = if s == 0 {
                    center.clone()
                } else {
                    halton::<F>(s, l).iter().zip(&bx).map(|(&u, iv)| iv.lo() + u * iv.width()).collect()
                };
                let t = newton(lambda, y, &start, cfg);
                if let Some(sol) = FibreSolution::new(face, t, y, cfg) {
                    let fresh = !near_known(&sol.t, &solutions);
                    accept(sol, &mut solutions);
                    if stop_at_first {
                        return Ok(FibreSearch { solutions, undecided_boxes: 0, boxes_processed: processed });
                    }
                    if fresh {
                        break;
                    }
                }
            }
            if solutions.iter().any(|s| inf_dist(&s.t, &center) + half <= exclusion) {
                continue;
            }
        }
        if width <= min_width {
            undecided += 1;
            continue;
        }
        let axis = (0..l).max_by(|&i, &j| bx[i].width().partial_cmp(&bx[j].width()).unwrap()).unwrap();
        let (a, b) = bx[axis].split();
        let mut left = bx.clone();
        left[axis] = a;
        let mut right = bx;
        right[axis] = b;
        stack.push((right, width));
        stack.push((left, width));
    }
    solutions.sort_by(|a, b| {
        a.t.iter().zip(&b.t).map(|(u, v)| u.partial_cmp(v).unwrap()).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(FibreSearch { solutions, undecided_boxes: undecided, boxes_processed: processed })
}

/// Tries to move a near-wall solution onto the lower face obtained by merging
/// adjacent coordinates closer than `wall_snap`.
pub(crate) fn snap_to_wall<F: Real>(sol: FibreSolution<F>, y: &[F], cfg: &FibreConfig<F>) -> FibreSolution<F> {
    let mut current = sol;
    loop {
        let t = current.t();
        let Some(i) = (0..t.len().saturating_sub(1)).find(|&i| (t[i + 1] - t[i]).abs() <= cfg.wall_snap) else {
            return current;
        };
        let parts = current.face().lambda().parts();
        let mut merged_parts = parts.clone();
        merged_parts[i] += merged_parts[i + 1];
        merged_parts.remove(i + 1);
        let merged = Composition::from_parts(&merged_parts).expect("merging parts keeps a valid composition");
        let (wa, wb) = (F::from_usize(parts[i]).unwrap(), F::from_usize(parts[i + 1]).unwrap());
        let mut start = t.to_vec();
        start[i] = (wa * t[i] + wb * t[i + 1]) / (wa + wb);
        start.remove(i + 1);
        let polished = newton(&merged, y, &start, cfg);
        match FibreSolution::new(Face::new(merged), polished, y, cfg) {
            Some(s) if inf_dist(&s.point(), &current.point()) <= cfg.wall_snap * F::from_f64(10.0).unwrap() => current = s,
            _ => return current,
        }
    }
}

/// All chamber-ordered solutions of `Σ λ_i t_i^m = y_m` (`m = 1..d'`) on the
/// face `W_λ`, by interval subdivision over `[-R, R]^ℓ` with Newton
/// refinement. Boxes that neither interval evaluation nor a nearby solution
/// resolves are counted in `undecided_boxes`.
pub fn solve_fibre<F: Real>(lambda: &Composition, y: &[F], cfg: &FibreConfig<F>) -> Result<FibreSearch<F>> {
    search(lambda, y, cfg, false)
}
