//! The chain `E_0 ⊃ E_1 ⊃ … ⊃ E_m` joining `S ∩ |Q|` to `S̃ ∩ |Q|` by
//! straight-line homotopies along the push segments.
//!
//! Stage `i` records, for every sample `y` of `S_i` interior to `σ_i`, the
//! segment from `y` to `h_i(y) = h̄_{z_i}(y)`. `E_k` is modeled as the
//! segments of stages `j ≥ k` together with the final samples and flags of
//! `Q`.

use complex_core::point::{dist, dist_to_segment, lerp, Point};
use complex_core::simplex::dist_to_hull;
use complex_core::{Simplex, SimplicialComplex};
use serde::Serialize;

use crate::error::{PushoutError, Result};
use crate::model::SetModel;
use crate::push::{boundary_image, push};
use crate::run::TransportMap;

#[derive(Clone, Debug, Serialize)]
pub struct RetractStage {
    pub sigma: usize,
    pub z: Point,
    /// `(y, h_i(y))` for the samples of `S_i ∩ Int σ_i`.
    pub segments: Vec<(Point, Point)>,
    #[serde(skip)]
    simplex: Simplex,
}

#[derive(Clone, Debug, Serialize)]
pub struct RetractChain {
    pub stages: Vec<RetractStage>,
    /// Samples of `S̃ ∩ |Q|`.
    pub final_points: Vec<Point>,
    /// Vertex coordinates of the flagged simplices of `Q` in `S̃`.
    pub final_flags: Vec<Vec<Point>>,
    pub tol: f64,
}

/// Replay the pushes of `g` on `s` and record the segment bundles.
pub fn retract_chain(cx: &SimplicialComplex, g: &TransportMap, s: &SetModel) -> Result<RetractChain> {
    let mut cur = s.normalize(cx);
    let mut stages = Vec::with_capacity(g.records.len());
    for r in &g.records {
        let simplex = cx.simplex(r.sigma)?.clone();
        let segments = cur
            .samples
            .iter()
            .filter(|x| x.carrier == r.sigma)
            .map(|x| Ok((x.point.clone(), boundary_image(cx, r.sigma, &r.z0, &x.point)?)))
            .collect::<Result<Vec<_>>>()?;
        let (next, replay) = push(cx, &cur, r.sigma, &r.z0)?;
        if replay.rank_after != r.rank_after {
            return Err(PushoutError::InvalidInput(
                "transport map was not produced from this set".into(),
            ));
        }
        stages.push(RetractStage {
            sigma: r.sigma,
            z: r.z0.clone(),
            segments,
            simplex,
        });
        cur = next;
    }
    let final_points = cur
        .samples
        .iter()
        .filter(|x| cx.in_q(x.carrier))
        .map(|x| x.point.clone())
        .collect();
    let final_flags = cur
        .full
        .iter()
        .filter(|&&f| cx.in_q(f))
        .map(|&f| cx.simplices()[f].points().to_vec())
        .collect();
    Ok(RetractChain {
        stages,
        final_points,
        final_flags,
        tol: cx.tol_membership(),
    })
}

impl RetractChain {
    /// Number of stages `m`; the sets are `E_0, …, E_m`.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    fn check(&self, k: usize) -> Result<()> {
        if k > self.stages.len() {
            return Err(PushoutError::InvalidInput(format!(
                "index {k} out of range 0..={}",
                self.stages.len()
            )));
        }
        Ok(())
    }

    /// Whether `y ∈ E_k`, within the membership tolerance.
    pub fn contains(&self, k: usize, y: &[f64]) -> Result<bool> {
        self.check(k)?;
        let tol = self.tol;
        let on_segment = self.stages[k..]
            .iter()
            .flat_map(|st| &st.segments)
            .any(|(a, b)| dist_to_segment(y, a, b) <= tol);
        Ok(on_segment
            || self.final_points.iter().any(|p| dist(p, y) <= tol)
            || self.final_flags.iter().any(|f| dist_to_hull(f, y) <= tol))
    }

    /// `h_i(y)`: radial projection from `z_i` onto `Bd σ_i`.
    pub fn h(&self, i: usize, y: &[f64]) -> Result<Point> {
        let st = self
            .stages
            .get(i)
            .ok_or_else(|| PushoutError::InvalidInput(format!("no stage {i}")))?;
        Ok(st.simplex.radial(&st.z, y)?.hbar)
    }

    /// `F(i, y, t) = y` on `E_{i+1}`, else `(1 − t) y + t h_i(y)`.
    pub fn f(&self, i: usize, y: &[f64], t: f64) -> Result<Point> {
        if i >= self.stages.len() {
            return Err(PushoutError::InvalidInput(format!("no stage {i}")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(PushoutError::Domain(format!("t = {t} outside [0, 1]")));
        }
        if self.contains(i + 1, y)? {
            return Ok(y.to_vec());
        }
        Ok(lerp(y, &self.h(i, y)?, t))
    }

    /// Sample points of `E_k`: nine points along every segment of stages
    /// `j ≥ k`, the final samples, and the vertices and barycenters of the
    /// final flags.
    pub fn e_samples(&self, k: usize) -> Result<Vec<Point>> {
        self.check(k)?;
        let mut out = Vec::new();
        for st in &self.stages[k..] {
            for (a, b) in &st.segments {
                out.extend((0..=8).map(|u| lerp(a, b, u as f64 / 8.0)));
            }
        }
        out.extend(self.final_points.iter().cloned());
        for f in &self.final_flags {
            out.extend(f.iter().cloned());
            let n = f.len() as f64;
            let mut c = vec![0.0; f[0].len()];
            for p in f {
                for (ci, x) in c.iter_mut().zip(p) {
                    *ci += x / n;
                }
            }
            out.push(c);
        }
        Ok(out)
    }
}
