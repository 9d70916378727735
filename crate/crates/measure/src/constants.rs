//! Closed-form constants: `φ̃`, `φ`, `γ*`, the filtration counts `N_j^i`,
//! `ψ_m`, `ψ`, and the magnification constants `K₁`, `K₂`, `K`.

use complex_core::SimplicialComplex;
use serde::Serialize;

use crate::error::{MeasureError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiConstants {
    /// `φ̃` at the requested `γ` (at `γ*` when none was given).
    pub phi_tilde: f64,
    /// `φ = φ̃` at `γ*`.
    pub phi: f64,
    pub gamma_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsBundle {
    pub a: f64,
    pub q: usize,
    pub t_min: Option<f64>,
    pub gamma_star: Option<f64>,
    pub phi: Option<f64>,
    pub psi: f64,
    #[serde(rename = "K1")]
    pub k1: Option<f64>,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

/// `γ* = (a + 1) / (r + a)`.
pub fn gamma_star(a: f64, r: usize) -> f64 {
    (a + 1.0) / (r as f64 + a)
}

fn check_art(a: f64, r: usize, t: f64) -> Result<()> {
    if !(a >= 1.0 && (r as f64) >= a + 1.0) {
        return Err(MeasureError::InvalidInput(format!(
            "need r ≥ a + 1 ≥ 2, got a = {a}, r = {r}"
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(MeasureError::InvalidInput(format!("thickness must be positive, got {t}")));
    }
    Ok(())
}

/// `φ̃(a, r, t, γ) = 2^{2r−a−2} r (r+1)^{r−a−1} (r+2) / ((1−γ)^{r−1} γ^{a+1} t^a)`.
pub fn phi_tilde(a: f64, r: usize, t: f64, gamma: f64) -> Result<f64> {
    check_art(a, r, t)?;
    let lo = 1.0 / (2.0 * (r as f64 + 1.0));
    if !(gamma > lo && gamma < 1.0) {
        return Err(MeasureError::InvalidInput(format!(
            "gamma {gamma} outside ({lo}, 1)"
        )));
    }
    let rf = r as f64;
    let num = 2f64.powf(2.0 * rf - a - 2.0) * rf * (rf + 1.0).powf(rf - a - 1.0) * (rf + 2.0);
    let den = (1.0 - gamma).powf(rf - 1.0) * gamma.powf(a + 1.0) * t.powf(a);
    Ok(num / den)
}

/// `φ(a, r, t) = φ̃(a, r, t, γ*)`, evaluated with `1 − γ* = (r−1)/(r+a)`
/// substituted so that integer inputs stay exact.
pub fn phi(a: f64, r: usize, t: f64) -> Result<f64> {
    check_art(a, r, t)?;
    let rf = r as f64;
    let num = 2f64.powf(2.0 * rf - a - 2.0)
        * rf
        * (rf + 1.0).powf(rf - a - 1.0)
        * (rf + 2.0)
        * (rf + a).powf(rf + a);
    let den = (rf - 1.0).powf(rf - 1.0) * (a + 1.0).powf(a + 1.0) * t.powf(a);
    Ok(num / den)
}

pub fn phi_constants(a: f64, r: usize, t: f64, gamma: Option<f64>) -> Result<PhiConstants> {
    let gs = gamma_star(a, r);
    let phi = phi(a, r, t)?;
    let phi_tilde = match gamma {
        Some(g) => phi_tilde(a, r, t, g)?,
        None => phi,
    };
    Ok(PhiConstants {
        phi_tilde,
        phi,
        gamma_star: gs,
    })
}

/// `N_j^i`: strictly increasing chains `V_0 ⊊ V_1 ⊊ … ⊊ V_j` from a fixed
/// `a`-set to a fixed `i`-set, i.e. ordered partitions of the `i − a` extra
/// elements into `j` nonempty blocks.
pub fn filtrations(i: usize, j: usize, a: usize) -> u128 {
    if i < a {
        return 0;
    }
    let m = i - a;
    // surj[k][l]: ordered partitions of a k-set into l nonempty blocks.
    let mut surj = vec![vec![0u128; j + 1]; m + 1];
    surj[0][0] = 1;
    for l in 1..=j {
        for k in 1..=m {
            surj[k][l] = (1..=k).map(|first| binom_u(k, first) * surj[k - first][l - 1]).sum();
        }
    }
    surj[m][j]
}

fn binom_u(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    binom_u(n, k) as f64
}

/// `ψ_m = Σ_j N_j^m φ^j` for `m ≥ a`, `0` for `m < a` (so `ψ_a = 1`).
pub fn psi_m(m: usize, a: usize, phi: f64) -> f64 {
    if m < a {
        return 0.0;
    }
    (0..=m - a)
        .map(|j| filtrations(m, j, a) as f64 * phi.powi(j as i32))
        .sum()
}

/// `ψ = max(ψ_1, …, ψ_q)`.
pub fn psi(q: usize, a: usize, phi: f64) -> f64 {
    (1..=q).map(|m| psi_m(m, a, phi)).fold(0.0, f64::max)
}

/// Constants for the subcomplex `Q` of `cx` and dimension `a`.
///
/// `K₂ = C(q+1, a+1) ψ` on the quantitative path (integer `1 ≤ a < q` with a
/// thickness available); otherwise `ψ = 1` and `K₂ = C(q+1, min(⌊a⌋, q)+1)`.
/// `K₁` is defined for `a = q` as `H^q(|Q|) / min_ω H^q(ω)`.
pub fn k_constants(cx: &SimplicialComplex, a: f64) -> Result<ConstantsBundle> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(MeasureError::InvalidInput(format!("a must be ≥ 0, got {a}")));
    }
    let q = cx.q_dim().unwrap_or(0);
    let t_min = cx.min_thickness(|i| cx.in_q(i) && cx.simplices()[i].dim() as f64 > a);
    let integer = a.fract() == 0.0;
    let ai = a.floor() as usize;
    let mut gamma = None;
    let mut phi_v = None;
    let (psi_v, k2) = match t_min {
        Some(t) if integer && ai >= 1 && ai < q => {
            let p = phi(a, q, t)?;
            gamma = Some(gamma_star(a, q));
            phi_v = Some(p);
            let s = psi(q, ai, p);
            (s, binomial(q + 1, ai + 1) * s)
        }
        _ => (1.0, binomial(q + 1, ai.min(q) + 1)),
    };
    let k1 = if integer && ai == q && q > 0 {
        let vols: Vec<f64> = cx
            .q_ids()
            .into_iter()
            .map(|i| &cx.simplices()[i])
            .filter(|s| s.dim() == q)
            .map(|s| s.volume())
            .collect();
        let min = vols.iter().cloned().fold(f64::INFINITY, f64::min);
        Some(vols.iter().sum::<f64>() / min)
    } else {
        None
    };
    let k = k1.unwrap_or(0.0).max(k2);
    Ok(ConstantsBundle {
        a,
        q,
        t_min,
        gamma_star: gamma,
        phi: phi_v,
        psi: psi_v,
        k1,
        k2,
        k,
    })
}
