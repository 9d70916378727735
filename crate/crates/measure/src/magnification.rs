//! Radial projection onto one facet, its largest stretch `λ(y; z)`, and the
//! per-facet magnification bound.

use complex_core::point::{dist, Point};
use complex_core::{FaceFrame, GeomError, Simplex, TOL_INTERIOR};
use serde::Serialize;

use crate::error::{MeasureError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MagnificationBound {
    /// `Σ w (diam σ / (z_n − y_n))^a`.
    pub bound: f64,
    /// `Σ w λ(y; z)^a`.
    pub empirical: f64,
    /// Number of samples that contributed.
    pub count: usize,
}

fn interior_alpha(sigma: &Simplex, z: &[f64]) -> Result<Vec<f64>> {
    let (alpha, res) = sigma.barycentric(z);
    if sigma.dim() == 0 || res > 1e-9 * sigma.diameter() || alpha.iter().any(|&a| a <= TOL_INTERIOR) {
        return Err(GeomError::Precondition(format!("apex {z:?} is not interior")).into());
    }
    Ok(alpha)
}

/// Whether `y ∈ ζ(z; τ_j)`: `y ∈ σ ∖ {z}` and the ray from `z` through `y`
/// leaves `σ` through the facet opposite vertex `j`.
pub fn in_zeta(sigma: &Simplex, facet: usize, z: &[f64], y: &[f64]) -> Result<bool> {
    let alpha = interior_alpha(sigma, z)?;
    if facet > sigma.dim() {
        return Err(MeasureError::InvalidInput(format!("no facet {facet}")));
    }
    let (beta, res) = sigma.barycentric(y);
    if res > 1e-9 * sigma.diameter() || beta.iter().any(|&b| b < -1e-9) {
        return Ok(false);
    }
    if dist(y, z) <= 1e-14 * sigma.diameter() {
        return Ok(false);
    }
    let ratios: Vec<f64> = beta.iter().zip(&alpha).map(|(b, a)| b / a).collect();
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ratios[facet] <= min + 1e-12)
}

/// `h_{z,τ}(y) = z_n/(z_n − y_n) (y − z) + z` in the facet frame; `None`
/// when `y ∉ ζ(z; τ)` (including `y = z`).
pub fn h_to_face(sigma: &Simplex, facet: usize, z: &[f64], y: &[f64]) -> Result<Option<Point>> {
    if !in_zeta(sigma, facet, z, y)? {
        return Ok(None);
    }
    let frame = FaceFrame::new(sigma, facet)?;
    let (zc, yc) = (frame.coords(z), frame.coords(y));
    let n = zc.len();
    let (zn, yn) = (zc[n - 1], yc[n - 1]);
    if !(yn < zn) {
        return Ok(None);
    }
    let c = zn / (zn - yn);
    let mut xc: Vec<f64> = zc.iter().zip(&yc).map(|(zi, yi)| c * (yi - zi) + zi).collect();
    xc[n - 1] = 0.0;
    Ok(Some(frame.point(&xc)))
}

/// `λ(y; z) = |z − x| / (z_n − y_n)` with `x = h_{z,τ}(y)`, i.e.
/// `|z − y| z_n / (z_n − y_n)²`.
pub fn lambda_eig(sigma: &Simplex, facet: usize, z: &[f64], y: &[f64]) -> Result<f64> {
    if !in_zeta(sigma, facet, z, y)? {
        return Err(MeasureError::Domain(format!(
            "{y:?} is not in the cone over facet {facet}"
        )));
    }
    let frame = FaceFrame::new(sigma, facet)?;
    let (zn, yn) = (frame.height(z), frame.height(y));
    Ok(dist(z, y) * zn / ((zn - yn) * (zn - yn)))
}

/// Bound and empirical magnification of the samples of `A ∩ Int σ` lying
/// in `ζ(z; τ_j)`.
pub fn magnification_bound(
    sigma: &Simplex,
    facet: usize,
    z: &[f64],
    samples: &[(Point, f64)],
    a: f64,
) -> Result<MagnificationBound> {
    let frame = FaceFrame::new(sigma, facet)?;
    let zn = frame.height(z);
    let tol = 1e-9 * sigma.diameter();
    let mut out = MagnificationBound::default();
    for (y, w) in samples {
        if !sigma.is_interior(y, tol) || !in_zeta(sigma, facet, z, y)? {
            continue;
        }
        let yn = frame.height(y);
        let gap = zn - yn;
        let lam = dist(z, y) * zn / (gap * gap);
        out.bound += w * (sigma.diameter() / gap).powf(a);
        out.empirical += w * lam.powf(a);
        out.count += 1;
    }
    Ok(out)
}
