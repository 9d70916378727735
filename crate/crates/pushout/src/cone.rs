//! The cone `C_z` over a finite sample of `S ∩ σ`, and the maps `s` and
//! `ŝ⁻¹` that depend on it.

use complex_core::point::{dist, dist_to_segment, norm, scale, sub, Point};
use complex_core::simplex::{dist_to_hull, snap_weights, support_ids};
use complex_core::{Radial, Simplex, SimplicialComplex};
use measure::APEX_GAP_REL;
use serde::Serialize;

use crate::error::{PushoutError, Result};

/// Two rays from the apex are identified below this angle (radians).
pub const TOL_CONE_ANGLE: f64 = 1e-6;

/// Weights of boundary images at or below this are snapped to zero, so the
/// image is comfortably interior to its recorded carrier.
pub(crate) const TOL_IMAGE_SNAP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeImage {
    /// Index of the generating sample, if any.
    pub sample: Option<usize>,
    pub image: Point,
    pub image_carrier: usize,
}

/// `C_z`: the union of segments from `z` to the boundary images of the
/// samples of `A = S ∩ σ`, together with the cones over flagged faces of `σ`.
#[derive(Clone, Debug, Serialize)]
pub struct ConeModel {
    pub sigma: usize,
    pub z: Point,
    /// The fixed value of `h̄(z)`.
    pub hbar_z: Point,
    pub images: Vec<ConeImage>,
    /// Flagged proper faces of `σ`.
    pub full_faces: Vec<usize>,
    #[serde(skip)]
    simplex: Simplex,
    #[serde(skip)]
    dirs: Vec<Point>,
    #[serde(skip)]
    face_vertices: Vec<Vec<usize>>,
    #[serde(skip)]
    face_hulls: Vec<Vec<Point>>,
}

/// Snap small weights and return the point with its support.
pub(crate) fn snap_image(s: &Simplex, weights: &[f64]) -> (Point, Vec<usize>) {
    let mut w = weights.to_vec();
    for x in w.iter_mut() {
        if *x <= TOL_IMAGE_SNAP {
            *x = 0.0;
        }
    }
    let w = snap_weights(w);
    (s.point_at(&w), support_ids(s.vertex_ids(), &w))
}

fn unit(v: Point) -> Point {
    let n = norm(&v);
    scale(&v, 1.0 / n)
}

/// `exp(−b c / (1 − b))` with `1 − b` supplied separately for accuracy.
pub(crate) fn k_parts(b: f64, one_minus_b: f64, c: f64) -> Result<f64> {
    if one_minus_b <= 0.0 {
        return if c > 0.0 {
            Ok(0.0)
        } else {
            Err(PushoutError::Domain("k(1, 0, 0) is undefined".into()))
        };
    }
    if c == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    Ok((-b * c / one_minus_b).exp())
}

impl ConeModel {
    /// Build the cone with apex `z ∈ Int σ` over `points ⊂ σ` (each tagged
    /// with its sample index) and the flagged faces `full_faces` of `σ`.
    pub fn build(
        cx: &SimplicialComplex,
        sigma: usize,
        z: Point,
        points: &[(Option<usize>, Point)],
        full_faces: &[usize],
    ) -> Result<Self> {
        let simplex = cx.simplex(sigma)?.clone();
        let gap = APEX_GAP_REL * simplex.diameter();
        let hbar_z = simplex.radial(&z, &z)?.hbar;
        let mut images = Vec::with_capacity(points.len());
        for (sample, p) in points {
            if dist(p, &z) < gap {
                return Err(PushoutError::ApexTooClose { point: p.clone(), gap });
            }
            let r = simplex.radial(&z, p)?;
            let (image, support) = snap_image(&simplex, &r.weights);
            let image_carrier = cx
                .id_of(&support)
                .ok_or_else(|| PushoutError::Internal(format!("no face with vertices {support:?}")))?;
            images.push(ConeImage {
                sample: *sample,
                image,
                image_carrier,
            });
        }
        let mut face_vertices = Vec::new();
        let mut face_hulls = Vec::new();
        for &f in full_faces {
            if f == sigma || !cx.is_face(f, sigma) {
                return Err(PushoutError::InvalidInput(format!("{f} is not a proper face of {sigma}")));
            }
            let fs = cx.simplex(f)?;
            face_vertices.push(fs.vertex_ids().to_vec());
            let mut hull = vec![z.clone()];
            hull.extend(fs.points().iter().cloned());
            face_hulls.push(hull);
        }
        let dirs = images.iter().map(|im| unit(sub(&im.image, &z))).collect();
        Ok(ConeModel {
            sigma,
            z,
            hbar_z,
            images,
            full_faces: full_faces.to_vec(),
            simplex,
            dirs,
            face_vertices,
            face_hulls,
        })
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    fn is_apex(&self, y: &[f64]) -> bool {
        dist(y, &self.z) <= 1e-14 * self.simplex.diameter()
    }

    /// `b(y)` and `h̄(y)`; `h̄(z)` is the recorded value.
    pub fn radial(&self, y: &[f64]) -> Result<Radial> {
        Ok(self.simplex.radial(&self.z, y)?)
    }

    /// Whether the boundary point with radial data `r` lies in `C ∩ Bd σ`.
    fn boundary_member(&self, r: &Radial) -> bool {
        let support = support_ids(self.simplex.vertex_ids(), &r.weights);
        if self
            .face_vertices
            .iter()
            .any(|f| support.iter().all(|v| f.contains(v)))
        {
            return true;
        }
        let u = unit(sub(&r.hbar, &self.z));
        let chord = 2.0 * (TOL_CONE_ANGLE / 2.0).sin();
        self.dirs.iter().any(|d| dist(&u, d) < chord)
    }

    /// Whether `y ∈ C_z`.
    pub fn contains(&self, y: &[f64]) -> Result<bool> {
        if self.is_apex(y) {
            return Ok(true);
        }
        let r = self.radial(y)?;
        Ok(self.boundary_member(&r))
    }

    /// `Δ̄ = dist(h̄(y), C)` from radial data; `diam σ` at the apex.
    fn delta_bar_of(&self, y: &[f64], r: &Radial) -> f64 {
        if self.is_apex(y) {
            return self.simplex.diameter();
        }
        if self.boundary_member(r) {
            return 0.0;
        }
        let mut best = dist(&r.hbar, &self.z);
        for im in &self.images {
            best = best.min(dist_to_segment(&r.hbar, &self.z, &im.image));
        }
        for hull in &self.face_hulls {
            best = best.min(dist_to_hull(hull, &r.hbar));
        }
        best
    }

    /// `Δ̄(y) = dist(h̄(y), C)`, with `Δ̄(z) = diam σ`.
    pub fn delta_bar(&self, y: &[f64]) -> Result<f64> {
        let r = self.radial(y)?;
        Ok(self.delta_bar_of(y, &r))
    }

    /// `s(y, t) = (1 − f) h̄(y) + f z` with `f = k(b(y), Δ̄(y), t)`; the
    /// identity on `Bd σ`.
    pub fn s_map(&self, y: &[f64], t: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&t) {
            return Err(PushoutError::Domain(format!("t = {t} outside [0, 1]")));
        }
        let r = self.radial(y)?;
        if r.one_minus_b == 0.0 {
            if t == 0.0 && self.boundary_member(&r) {
                return Err(PushoutError::Domain(format!("{y:?} is in C ∩ Bd σ at t = 0")));
            }
            return Ok(y.to_vec());
        }
        let c = self.delta_bar_of(y, &r) + t;
        let f = k_parts(r.b, r.one_minus_b, c)?;
        Ok(r.hbar
            .iter()
            .zip(&self.z)
            .map(|(h, z)| (1.0 - f) * h + f * z)
            .collect())
    }

    /// Inverse of `y ↦ s(y, t)` for `t > 0`: keep `h̄`, and solve
    /// `k(β, Δ̄, t) = 1 − b(x)` for `β`. The equation reads
    /// `β c / (1 − β) = −ln(1 − b(x))` with `c = Δ̄ + t`, which is linear in
    /// `β / (1 − β)`.
    pub fn s_hat_inverse(&self, x: &[f64], t: f64) -> Result<Point> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(PushoutError::Domain(format!("t = {t} outside (0, 1]")));
        }
        if self.is_apex(x) {
            return Ok(self.z.clone());
        }
        let r = self.radial(x)?;
        if r.one_minus_b == 0.0 {
            return Ok(x.to_vec());
        }
        let l = -r.one_minus_b.ln();
        let c = self.delta_bar_of(x, &r) + t;
        let (beta, one_minus_beta) = (l / (c + l), c / (c + l));
        let y: Point = r.hbar
            .iter()
            .zip(&self.z)
            .map(|(h, z)| beta * h + one_minus_beta * z)
            .collect();
        if y.iter().any(|v| !v.is_finite()) {
            return Err(PushoutError::Numerical(format!("inverse of s at {x:?} is not finite")));
        }
        Ok(y)
    }
}
