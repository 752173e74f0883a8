use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::BlockSpec;
use crate::scalar::{f64_to_rational, Real};
use crate::vandermonde::fibre::{search, snap_to_wall};
use crate::vandermonde::{FibreConfig, FibreSolution};
use crate::weyl::{comp_kd, comp_max, Composition};

/// Tri-state answer of the image oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Outside,
    Undecided,
}

impl Membership {
    pub fn as_str(&self) -> &'static str {
        match self {
            Membership::Inside => "inside",
            Membership::Outside => "outside",
            Membership::Undecided => "undecided",
        }
    }

    /// Conjunction over blocks: outside dominates undecided, which dominates inside.
    pub fn and(self, other: Membership) -> Membership {
        use Membership::*;
        match (self, other) {
            (Outside, _) | (_, Outside) => Outside,
            (Undecided, _) | (_, Undecided) => Undecided,
            _ => Inside,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipReport<F: Real = f64> {
    pub status: Membership,
    /// A preimage when the status is inside and a face search produced one.
    pub witness: Option<FibreSolution<F>>,
    pub faces_checked: usize,
    pub undecided_faces: Vec<Composition>,
}

impl<F: Real> MembershipReport<F> {
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = serde_json::json!({
            "status": self.status,
            "faces_checked": self.faces_checked,
            "undecided_faces": self.undecided_faces.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        });
        if let Some(w) = &self.witness {
            out["face"] = serde_json::json!(w.face().lambda().parts());
            out["t"] = serde_json::json!(w.t().iter().map(|v| v.to_f64().unwrap()).collect::<Vec<_>>());
            out["x"] = serde_json::json!(w.point().iter().map(|v| v.to_f64().unwrap()).collect::<Vec<_>>());
            out["residual"] = serde_json::json!(w.residual().to_f64().unwrap());
        }
        out
    }
}

/// Exact test of `k y_2 < y_1^2 - tol (y_1^2 + k |y_2|)`: a certified
/// violation of the Cauchy–Schwarz condition `k y_2 >= y_1^2` that every
/// image point satisfies. The margin keeps rounded images of diagonal
/// points from being rejected.
fn violates_cauchy_schwarz<F: Real>(k: usize, y: &[F], tol: F) -> bool {
    if y.len() < 2 {
        return false;
    }
    let conv = |v: F| f64_to_rational(v.to_f64().unwrap());
    match (conv(y[0]), conv(y[1]), conv(tol)) {
        (Ok(y1), Ok(y2), Ok(tol)) => {
            let ky2 = crate::scalar::rational_from_int(k as i64) * y2;
            let sq = y1.clone() * y1;
            let margin = tol * (sq.clone() + num_traits::Signed::abs(&ky2));
            ky2 < sq - margin
        }
        _ => false,
    }
}

fn check_point<F: Real>(k: usize, d: usize, y: &[F]) -> Result<usize> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidArgument("k and d must be positive".into()));
    }
    let d_prime = k.min(d);
    if y.len() != d_prime {
        return Err(Error::DimensionMismatch { expected: d_prime, got: y.len() });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coordinate".into()));
    }
    Ok(d_prime)
}

/// Decides whether `y` lies in the image of `x ↦ (p_1(x), ..., p_{d'}(x))`,
/// `d' = min(k, d)`, by searching every face of `Comp(k, d')`.
pub fn image_membership<F: Real>(k: usize, d: usize, y: &[F], cfg: &FibreConfig<F>) -> Result<MembershipReport<F>> {
    let d_prime = check_point(k, d, y)?;
    if d_prime == 1 {
        let whole = Composition::whole(k)?;
        let t = vec![y[0] / F::from_usize(k).unwrap()];
        let witness = FibreSolution::new(crate::vandermonde::Face::new(whole), t, y, cfg);
        return Ok(MembershipReport { status: Membership::Inside, witness, faces_checked: 0, undecided_faces: vec![] });
    }
    if violates_cauchy_schwarz(k, y, cfg.tol) {
        return Ok(MembershipReport { status: Membership::Outside, witness: None, faces_checked: 0, undecided_faces: vec![] });
    }
    let faces = comp_kd(k, d_prime)?;
    let mut undecided_faces = Vec::new();
    let mut checked = 0;
    // generic points of the image are hit on the top faces
    for lambda in faces.iter().rev() {
        checked += 1;
        let found = search(lambda, y, cfg, true)?;
        if let Some(sol) = found.solutions.into_iter().next() {
            return Ok(MembershipReport { status: Membership::Inside, witness: Some(sol), faces_checked: checked, undecided_faces });
        }
        if found.undecided_boxes > 0 {
            undecided_faces.push(*lambda);
        }
    }
    let status = if undecided_faces.is_empty() { Membership::Outside } else { Membership::Undecided };
    Ok(MembershipReport { status, witness: None, faces_checked: checked, undecided_faces })
}

/// Membership in the product image over blocks; `y` concatenates the
/// per-block targets of lengths `d_i'`.
pub fn image_membership_blocks<F: Real>(blocks: &BlockSpec, y: &[F], cfg: &FibreConfig<F>) -> Result<Vec<MembershipReport<F>>> {
    let reduced = blocks.reduced_degrees();
    let expected: usize = reduced.iter().sum();
    if y.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: y.len() });
    }
    let mut offset = 0;
    let mut out = Vec::with_capacity(reduced.len());
    for (i, &dp) in reduced.iter().enumerate() {
        let k = blocks.block_sizes()[i];
        let report = image_membership(k, dp, &y[offset..offset + dp], cfg)?;
        let outside = report.status == Membership::Outside;
        out.push(report);
        if outside {
            break;
        }
        offset += dp;
    }
    Ok(out)
}

/// Combined status of a per-block report list.
pub fn combined_status<F: Real>(reports: &[MembershipReport<F>]) -> Membership {
    reports.iter().fold(Membership::Inside, |acc, r| acc.and(r.status))
}

/// Extrema of `p_{d+1}` on a fibre of the power-sum map.
#[derive(Clone, Debug)]
pub struct SectionReport<F: Real = f64> {
    /// The maximizer of `p_{d+1}` on the fibre.
    pub solution: FibreSolution<F>,
    pub value: F,
    pub maximizer_below_compmax: bool,
    pub minimizer: FibreSolution<F>,
    pub min_value: F,
    pub minimizer_below_compmax: bool,
    /// Number of distinct critical points found.
    pub candidates: usize,
    /// Another fibre point attains the maximum up to tolerance.
    pub ambiguous: bool,
}

impl<F: Real> SectionReport<F> {
    pub fn to_json(&self) -> serde_json::Value {
        let f = |v: &F| v.to_f64().unwrap();
        let point = |s: &FibreSolution<F>| {
            serde_json::json!({
                "face": s.face().lambda().parts(),
                "t": s.t().iter().map(f).collect::<Vec<_>>(),
                "x": s.point().iter().map(f).collect::<Vec<_>>(),
                "residual": f(&s.residual()),
            })
        };
        serde_json::json!({
            "status": "inside",
            "face": self.solution.face().lambda().parts(),
            "t": self.solution.t().iter().map(f).collect::<Vec<_>>(),
            "x": self.solution.point().iter().map(f).collect::<Vec<_>>(),
            "residual": f(&self.solution.residual()),
            "value": f(&self.value),
            "below_compmax": self.maximizer_below_compmax,
            "minimizer": point(&self.minimizer),
            "min_value": f(&self.min_value),
            "minimizer_below_compmax": self.minimizer_below_compmax,
            "candidates": self.candidates,
            "ambiguous": self.ambiguous,
        })
    }
}

/// Compositions of `k` with at most `max_len` parts.
fn faces_up_to_length(k: usize, max_len: usize) -> Result<Vec<Composition>> {
    let mut out = Vec::new();
    let slots = k - 1;
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(1, Vec::new())];
    while let Some((next, cuts)) = stack.pop() {
        out.push(Composition::from_breakpoints(k, &cuts)?);
        if out.len() > crate::weyl::MAX_FACES {
            return Err(Error::SizeLimit(format!("more than {} faces", crate::weyl::MAX_FACES)));
        }
        if cuts.len() + 1 < max_len {
            for b in next..=slots {
                let mut c = cuts.clone();
                c.push(b);
                stack.push((b + 1, c));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Maximizer and minimizer of `p_{d+1}` on the fibre over `y` of
/// `x ↦ (p_1, ..., p_d)`, `d < k`.
///
/// Critical points of `p_{d+1}` on a fibre have at most `d` distinct
/// coordinates, so every face with at most `d` parts is searched; each
/// extremum is reported with whether its face lies below `CompMax(k, d)`.
pub fn arnold_section<F: Real>(k: usize, d: usize, y: &[F], cfg: &FibreConfig<F>) -> Result<SectionReport<F>> {
    if d >= k {
        return Err(Error::InvalidArgument(format!("section needs d < k, got d={d}, k={k}")));
    }
    check_point(k, d, y)?;
    if violates_cauchy_schwarz(k, y, cfg.tol) {
        return Err(Error::InvalidArgument("point is outside the image".into()));
    }
    let faces = faces_up_to_length(k, d)?;
    let tops = comp_max(k, d)?;
    let below = |s: &FibreSolution<F>| tops.iter().any(|t| s.face().lambda().precedes(t).unwrap_or(false));
    let mut found: Vec<FibreSolution<F>> = Vec::new();
    let mut undecided = false;
    let point_gap = F::from_f64(1e-6).unwrap();
    let same = |a: &FibreSolution<F>, b: &FibreSolution<F>| {
        a.point().iter().zip(b.point()).all(|(u, v)| (*u - v).abs() <= cfg.wall_snap * F::from_f64(10.0).unwrap())
    };
    for lambda in faces.iter().rev() {
        let res = search(lambda, y, cfg, false)?;
        undecided |= res.undecided_boxes > 0;
        for sol in res.solutions {
            let sol = snap_to_wall(sol, y, cfg);
            match found.iter_mut().find(|s| same(s, &sol)) {
                Some(existing) => {
                    if sol.face().dim() < existing.face().dim() {
                        *existing = sol;
                    }
                }
                None => found.push(sol),
            }
        }
    }
    if found.is_empty() {
        return Err(if undecided {
            Error::Undecided(format!("fibre search over {} faces did not resolve", faces.len()))
        } else {
            Error::InvalidArgument("point is outside the image".into())
        });
    }
    let m = d as u32 + 1;
    let (mut best, mut worst) = (0, 0);
    for i in 1..found.len() {
        if found[i].power_sum(m) > found[best].power_sum(m) {
            best = i;
        }
        if found[i].power_sum(m) < found[worst].power_sum(m) {
            worst = i;
        }
    }
    let value = found[best].power_sum(m);
    let min_value = found[worst].power_sum(m);
    let slack = F::from_f64(1e-6).unwrap() * value.abs().max(F::one());
    let ambiguous = found.iter().enumerate().any(|(i, s)| {
        i != best
            && (s.power_sum(m) - value).abs() <= slack
            && s.point().iter().zip(found[best].point()).any(|(u, v)| (*u - v).abs() > point_gap)
    });
    Ok(SectionReport {
        maximizer_below_compmax: below(&found[best]),
        minimizer_below_compmax: below(&found[worst]),
        solution: found[best].clone(),
        minimizer: found[worst].clone(),
        value,
        min_value,
        candidates: found.len(),
        ambiguous,
    })
}
