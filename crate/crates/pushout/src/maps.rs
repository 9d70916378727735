//! The deformation `g` of `|P|` built from `s`, and the scalar function `k`.

use complex_core::point::Point;
use complex_core::{Radial, Simplex, SimplicialComplex};

use crate::cone::{k_parts, ConeModel};
use crate::error::{PushoutError, Result};

pub use measure::h_to_face;

/// `b(y)` and `h̄(y)` for the apex `z ∈ Int σ`: `y = b h̄ + (1 − b) z`.
pub fn b_and_hbar(sigma: &Simplex, z: &[f64], y: &[f64]) -> Result<Radial> {
    Ok(sigma.radial(z, y)?)
}

/// `k(β, δ, t) = exp(−β (δ + t) / (1 − β))`, with `k = 0` at `β = 1` when
/// `δ + t > 0`.
pub fn k_fn(beta: f64, delta: f64, t: f64) -> Result<f64> {
    if !((0.0..=1.0).contains(&beta) && delta >= 0.0 && t >= 0.0) {
        return Err(PushoutError::Domain(format!("k({beta}, {delta}, {t}) is outside its domain")));
    }
    k_parts(beta, 1.0 - beta, delta + t)
}

/// Decomposition of `y ∈ Int ρ`, `σ ⊊ ρ`, as `μ σ(y) + (1 − μ) w(y)` with
/// `σ(y) ∈ Int σ` and `w(y)` in the opposite face.
pub(crate) fn split(cx: &SimplicialComplex, sigma: usize, rho: usize, y: &[f64]) -> Result<(f64, Point, Point)> {
    let r = cx.simplex(rho)?;
    let sv = cx.simplex(sigma)?.vertex_ids();
    let (beta, _) = r.barycentric(y);
    let dim = y.len();
    let (mut mu, mut ps, mut pw) = (0.0, vec![0.0; dim], vec![0.0; dim]);
    for (j, b) in beta.iter().enumerate() {
        let b = b.max(0.0);
        let (acc, v) = if sv.contains(&r.vertex_ids()[j]) {
            mu += b;
            (&mut ps, r.vertex(j))
        } else {
            (&mut pw, r.vertex(j))
        };
        for (a, x) in acc.iter_mut().zip(v) {
            *a += b * x;
        }
    }
    let total: f64 = beta.iter().map(|b| b.max(0.0)).sum();
    mu /= total;
    if !(mu > 0.0 && mu < 1.0) {
        return Err(PushoutError::Numerical(format!("degenerate split of {y:?} (μ = {mu})")));
    }
    let ps = ps.iter().map(|x| x / (mu * total)).collect();
    let pw = pw.iter().map(|x| x / ((1.0 - mu) * total)).collect();
    Ok((mu, ps, pw))
}

fn recombine(mu: f64, a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| mu * x + (1.0 - mu) * y).collect()
}

/// `g(y)` for a point with known carrier `rho`.
pub(crate) fn g_in(cx: &SimplicialComplex, cone: &ConeModel, rho: usize, y: &[f64]) -> Result<Point> {
    let sigma = cone.sigma;
    if rho == sigma {
        return cone.s_map(y, 0.0);
    }
    if !cx.is_face(sigma, rho) {
        if cx.is_face(rho, sigma) && cone.contains(y)? {
            return Err(PushoutError::Domain(format!("{y:?} lies in C ∩ Bd σ")));
        }
        return Ok(y.to_vec());
    }
    let (mu, ps, pw) = split(cx, sigma, rho, y)?;
    let s = cone.s_map(&ps, 1.0 - mu)?;
    Ok(recombine(mu, &s, &pw))
}

/// `g(y)`: `s(y, 0)` on `Int σ`, `μ s(σ(y), 1 − μ) + (1 − μ) w(y)` on the
/// interiors of proper cofaces, the identity elsewhere. Undefined on
/// `C ∩ Bd σ`.
pub fn g_map(cx: &SimplicialComplex, cone: &ConeModel, y: &[f64]) -> Result<Point> {
    let rho = cx.locate(y)?.carrier;
    g_in(cx, cone, rho, y)
}

/// `g⁻¹(p)` for a point with known carrier `rho ⊉ σ` or `rho ⊋ σ`.
pub(crate) fn g_inverse_in(cx: &SimplicialComplex, cone: &ConeModel, rho: usize, p: &[f64]) -> Result<Point> {
    let sigma = cone.sigma;
    if rho == sigma {
        return Err(PushoutError::Domain(format!(
            "{p:?} is interior to the pushed simplex"
        )));
    }
    if !cx.is_face(sigma, rho) {
        return Ok(p.to_vec());
    }
    let (mu, ps, pw) = split(cx, sigma, rho, p)?;
    let y = cone.s_hat_inverse(&ps, 1.0 - mu)?;
    Ok(recombine(mu, &y, &pw))
}

/// Inverse of `g` off `σ`: the identity away from the open star, and
/// `μ ŝ⁻¹(σ(p), 1 − μ) + (1 − μ) w(p)` on proper cofaces.
pub fn g_inverse(cx: &SimplicialComplex, cone: &ConeModel, p: &[f64]) -> Result<Point> {
    let rho = cx.locate(p)?.carrier;
    g_inverse_in(cx, cone, rho, p)
}
