//! Partial simplices, the rank vector, and a single push.

use complex_core::point::Point;
use complex_core::SimplicialComplex;
use measure::lambda_eig;
use serde::Serialize;

use crate::cone::{snap_image, ConeModel};
use crate::error::{PushoutError, Result};
use crate::maps::g_inverse_in;
use crate::model::{Sample, SetModel};

/// Partial-simplex counts of `Q` per dimension, highest dimension first.
/// The derived order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct RankVector(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialReport {
    /// Partial simplices ordered by dimension (descending), then id.
    pub partials: Vec<usize>,
    pub rank: RankVector,
}

/// `σ ∈ Q` is partial when some sample is interior to it and it is not
/// flagged full. Expects a normalized set.
pub fn detect_partial_and_rank(cx: &SimplicialComplex, s: &SetModel) -> PartialReport {
    let q = cx.q_dim().unwrap_or(0);
    let mut ids: Vec<usize> = s
        .samples
        .iter()
        .map(|x| x.carrier)
        .filter(|&c| cx.in_q(c) && !s.full.contains(&c) && cx.simplices()[c].dim() >= 1)
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let mut counts = vec![0; q];
    for &c in &ids {
        counts[q - cx.simplices()[c].dim()] += 1;
    }
    ids.sort_by_key(|&c| (std::cmp::Reverse(cx.simplices()[c].dim()), c));
    PartialReport {
        partials: ids,
        rank: RankVector(counts),
    }
}

/// Magnification bookkeeping of one push.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushStats {
    pub sigma: usize,
    pub dim: usize,
    /// `W = Σ w` over samples interior to `σ`.
    pub interior_weight: f64,
    /// `Σ w λ(y; z)^a`.
    pub empirical: f64,
    /// `Σ w (diam σ / (z_n − y_n))^a`, summed over all facets.
    pub bound: f64,
    /// Face-bound constant used to accept the apex (quantitative pushes only).
    pub phi: Option<f64>,
    /// Candidate apexes drawn.
    pub draws: usize,
    pub vacuous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushRecord {
    pub sigma: usize,
    pub z0: Point,
    pub cone: ConeModel,
    pub rank_before: RankVector,
    pub rank_after: RankVector,
    pub stats: PushStats,
}

/// Push `S` out of the partial simplex `σ` from the apex `z`:
/// `S′ = g⁻¹(S ∖ σ) ∪ (C_z ∩ Bd σ)`.
///
/// Interior samples move to `h̄(y)` with weight `w λ(y; z)^a` (zero when
/// `a > dim σ − 1`, since the boundary is then `H^a`-null); samples in
/// proper cofaces move to `g⁻¹(y)`; all other samples and all flags stay.
pub fn push(cx: &SimplicialComplex, s: &SetModel, sigma: usize, z: &[f64]) -> Result<(SetModel, PushRecord)> {
    let s = s.normalize(cx);
    let before = detect_partial_and_rank(cx, &s);
    let simplex = cx.simplex(sigma)?;
    if !before.partials.contains(&sigma) {
        return Err(PushoutError::Precondition(format!("simplex {sigma} is not partial")));
    }
    let top = cx.simplices()[before.partials[0]].dim();
    if simplex.dim() < top {
        return Err(PushoutError::Precondition(format!(
            "simplex {sigma} has dimension {} but a partial of dimension {top} remains",
            simplex.dim()
        )));
    }
    let n = simplex.dim();
    let in_sigma = s.samples_in(cx, sigma);
    let points: Vec<(Option<usize>, Point)> = in_sigma
        .iter()
        .map(|&i| (Some(i), s.samples[i].point.clone()))
        .collect();
    let full_faces: Vec<usize> = s
        .full
        .iter()
        .copied()
        .filter(|&f| f != sigma && cx.is_face(f, sigma))
        .collect();
    let cone = ConeModel::build(cx, sigma, z.to_vec(), &points, &full_faces)?;

    let mut stats = PushStats {
        sigma,
        dim: n,
        interior_weight: 0.0,
        empirical: 0.0,
        bound: 0.0,
        phi: None,
        draws: 0,
        vacuous: true,
    };
    let mut image_index = vec![None; s.samples.len()];
    for (k, im) in cone.images.iter().enumerate() {
        if let Some(i) = im.sample {
            image_index[i] = Some(k);
        }
    }
    let (alpha, _) = simplex.barycentric(z);
    let mut samples = Vec::with_capacity(s.samples.len());
    for (i, x) in s.samples.iter().enumerate() {
        if x.carrier == sigma {
            let im = &cone.images[image_index[i].ok_or_else(|| PushoutError::Internal("sample without image".into()))?];
            let r = simplex.radial(z, &x.point)?;
            let lam = lambda_eig(simplex, r.facet, z, &x.point)?;
            let (beta, _) = simplex.barycentric(&x.point);
            let gap = (alpha[r.facet] - beta[r.facet]) * simplex.height(r.facet);
            stats.interior_weight += x.weight;
            stats.empirical += x.weight * lam.powf(s.a);
            stats.bound += x.weight * (simplex.diameter() / gap).powf(s.a);
            let weight = if s.a <= (n - 1) as f64 {
                x.weight * lam.powf(s.a)
            } else {
                0.0
            };
            samples.push(Sample {
                point: im.image.clone(),
                carrier: im.image_carrier,
                weight,
            });
        } else if cx.is_face(sigma, x.carrier) {
            samples.push(Sample {
                point: g_inverse_in(cx, &cone, x.carrier, &x.point)?,
                carrier: x.carrier,
                weight: x.weight,
            });
        } else {
            samples.push(x.clone());
        }
    }
    let out = SetModel {
        a: s.a,
        samples,
        full: s.full.clone(),
    }
    .normalize(cx);
    let after = detect_partial_and_rank(cx, &out);
    if after.rank >= before.rank {
        return Err(PushoutError::Internal(format!(
            "rank did not decrease: {:?} -> {:?}",
            before.rank.0, after.rank.0
        )));
    }
    let record = PushRecord {
        sigma,
        z0: z.to_vec(),
        cone,
        rank_before: before.rank,
        rank_after: after.rank,
        stats,
    };
    Ok((out, record))
}

/// Recompute an image the way [`push`] does, for callers replaying pushes.
pub(crate) fn boundary_image(cx: &SimplicialComplex, sigma: usize, z: &[f64], y: &[f64]) -> Result<Point> {
    let simplex = cx.simplex(sigma)?;
    let r = simplex.radial(z, y)?;
    Ok(snap_image(simplex, &r.weights).0)
}
