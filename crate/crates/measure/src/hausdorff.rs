//! Hausdorff measure estimates: exact counts, weighted sums, and a greedy
//! covering estimator over a ladder of scales.

use complex_core::point::{dist, Point};
use complex_core::Exec;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{MeasureError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Covering,
    ExactCount,
    WeightedSum,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub s: f64,
    pub value: f64,
    /// Scales used, in decreasing order.
    pub delta_ladder: Vec<f64>,
    /// Monotone envelope of the covering sums: entry `k` is the largest
    /// covering sum over scales `≥ delta_ladder[k]`.
    pub ladder_values: Vec<f64>,
    /// Raw greedy covering sum at each scale.
    pub raw_values: Vec<f64>,
    pub method: Method,
}

/// Volume of the unit ball in `R^s`, `π^{s/2} / Γ(s/2 + 1)`, for real `s ≥ 0`.
pub fn omega(s: f64) -> f64 {
    std::f64::consts::PI.powf(s / 2.0) / gamma(s / 2.0 + 1.0)
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(MeasureError::InvalidInput(format!("s must be ≥ 0, got {s}")));
    }
    Ok(())
}

/// `H^s` of a weighted sample: weights already carry the measure.
pub fn hausdorff_weighted(weights: &[f64], s: f64) -> Result<MeasureEstimate> {
    check_s(s)?;
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(MeasureError::InvalidInput("weights must be finite and ≥ 0".into()));
    }
    Ok(MeasureEstimate {
        s,
        value: weights.iter().sum(),
        delta_ladder: Vec::new(),
        ladder_values: Vec::new(),
        raw_values: Vec::new(),
        method: Method::WeightedSum,
    })
}

/// `H^s` of a raw point sample. `s = 0` counts distinct points; `s > 0`
/// runs the greedy covering estimator at every scale of `ladder` (default
/// `{d/8, d/16, d/32}`, `d` the sample diameter) and reports the supremum.
pub fn hausdorff_points(points: &[Point], s: f64, ladder: Option<&[f64]>) -> Result<MeasureEstimate> {
    check_s(s)?;
    if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(MeasureError::InvalidInput("non-finite sample point".into()));
    }
    if s == 0.0 || points.is_empty() {
        let mut keys: Vec<Vec<u64>> = points
            .iter()
            .map(|p| p.iter().map(|x| (x + 0.0).to_bits()).collect())
            .collect();
        keys.sort_unstable();
        keys.dedup();
        return Ok(MeasureEstimate {
            s,
            value: if s == 0.0 { keys.len() as f64 } else { 0.0 },
            delta_ladder: Vec::new(),
            ladder_values: Vec::new(),
            raw_values: Vec::new(),
            method: Method::ExactCount,
        });
    }
    let mut deltas: Vec<f64> = match ladder {
        Some(l) => {
            if l.is_empty() || l.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
                return Err(MeasureError::InvalidInput("ladder scales must be positive".into()));
            }
            l.to_vec()
        }
        None => {
            let d = sample_diameter(points);
            if d == 0.0 {
                return Ok(MeasureEstimate {
                    s,
                    value: 0.0,
                    delta_ladder: Vec::new(),
                    ladder_values: Vec::new(),
                    raw_values: Vec::new(),
                    method: Method::Covering,
                });
            }
            vec![d / 8.0, d / 16.0, d / 32.0]
        }
    };
    deltas.sort_by(|a, b| b.total_cmp(a));
    let raw: Vec<f64> = deltas.iter().map(|&d| covering_sum(points, s, d)).collect();
    let mut env = Vec::with_capacity(raw.len());
    let mut best: f64 = 0.0;
    for r in &raw {
        best = best.max(*r);
        env.push(best);
    }
    Ok(MeasureEstimate {
        s,
        value: best,
        delta_ladder: deltas,
        ladder_values: env,
        raw_values: raw,
        method: Method::Covering,
    })
}

/// Largest pairwise distance.
pub fn sample_diameter(points: &[Point]) -> f64 {
    Exec::default()
        .map_indexed(points.len(), |i| {
            points[i + 1..]
                .iter()
                .map(|q| dist(&points[i], q))
                .fold(0.0, f64::max)
        })
        .into_iter()
        .fold(0.0, f64::max)
}

/// `ω_s Σ (diam C_j / 2)^s` for the greedy farthest-point cover by sets of
/// diameter at most `delta`: centres are added until every point is within
/// `delta / 2` of one, and each point joins its nearest centre.
pub fn covering_sum(points: &[Point], s: f64, delta: f64) -> f64 {
    let r = delta / 2.0;
    let n = points.len();
    let mut centre = vec![0usize; n];
    let mut dmin: Vec<f64> = points.iter().map(|p| dist(p, &points[0])).collect();
    let mut centres = vec![0usize];
    loop {
        let (far, &dfar) = dmin
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        if dfar <= r {
            break;
        }
        let c = centres.len();
        centres.push(far);
        let upd = Exec::default().map_indexed(n, |i| dist(&points[i], &points[far]));
        for (i, d) in upd.into_iter().enumerate() {
            if d < dmin[i] {
                dmin[i] = d;
                centre[i] = c;
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); centres.len()];
    for (i, &c) in centre.iter().enumerate() {
        clusters[c].push(i);
    }
    let diams = Exec::default().map(&clusters, |c| {
        let mut d: f64 = 0.0;
        for (k, &i) in c.iter().enumerate() {
            for &j in &c[k + 1..] {
                d = d.max(dist(&points[i], &points[j]));
            }
        }
        d
    });
    omega(s) * diams.iter().map(|d| (d / 2.0).powf(s)).sum::<f64>()
}
