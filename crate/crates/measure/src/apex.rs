//! The concentric search simplex `σ_γ` and Monte-Carlo apex selection.

use complex_core::point::{dist, Point};
use complex_core::sampling::uniform_point;
use complex_core::{Exec, Simplex, TOL_INTERIOR};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::phi;
use crate::error::{MeasureError, Result};
use crate::APEX_GAP_REL;

/// `σ_γ = {γ x + (1 − γ) σ̂ : x ∈ σ}` for `γ ∈ (1/(2(n+1)), 1)`.
pub fn sigma_gamma(sigma: &Simplex, gamma: f64) -> Result<Simplex> {
    let n = sigma.dim();
    let lo = 1.0 / (2.0 * (n as f64 + 1.0));
    if !(gamma > lo && gamma < 1.0) {
        return Err(MeasureError::InvalidInput(format!(
            "gamma {gamma} outside ({lo}, 1)"
        )));
    }
    let c = sigma.barycenter();
    let pts = sigma
        .points()
        .iter()
        .map(|v| v.iter().zip(c).map(|(vi, ci)| gamma * vi + (1.0 - gamma) * ci).collect())
        .collect();
    Ok(Simplex::new(sigma.vertex_ids().to_vec(), pts)?)
}

/// `γ* = (a+1)/(n+a)` when it lies in the admissible interval, else `1/2`.
pub fn default_gamma(a: f64, n: usize) -> f64 {
    let g = (a + 1.0) / (n as f64 + a);
    let lo = 1.0 / (2.0 * (n as f64 + 1.0));
    if g > lo && g < 1.0 {
        g
    } else {
        0.5
    }
}

/// Per-facet sums `Σ w (diam σ / (z_n − y_n))^a` over the samples of
/// `A ∩ Int σ` in `ζ(z; τ_j)`, and the interior weight `W = Σ w`.
pub fn face_integrands(sigma: &Simplex, samples: &[(Point, f64)], a: f64, z: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = sigma.dim();
    let (alpha, res) = sigma.barycentric(z);
    if n == 0 || res > 1e-9 * sigma.diameter() || alpha.iter().any(|&x| x <= TOL_INTERIOR) {
        return Err(complex_core::GeomError::Precondition(format!("apex {z:?} is not interior")).into());
    }
    let tol = 1e-9 * sigma.diameter();
    let mut sums = vec![0.0; n + 1];
    let mut total = 0.0;
    for (y, w) in samples {
        let (beta, r) = sigma.barycentric(y);
        if r > tol || beta.iter().any(|&b| b <= TOL_INTERIOR) {
            continue;
        }
        total += w;
        let mut j = 0;
        let mut best = f64::INFINITY;
        for k in 0..=n {
            let q = beta[k] / alpha[k];
            if q < best {
                best = q;
                j = k;
            }
        }
        let gap = (alpha[j] - beta[j]) * sigma.height(j);
        sums[j] += w * (sigma.diameter() / gap).powf(a);
    }
    Ok((sums, total))
}

/// Whether `z ∈ ⋂_j Y(τ_j)`: every facet sum is at most `φ W`.
pub fn z0_in_y(sigma: &Simplex, samples: &[(Point, f64)], a: f64, phi: f64, z: &[f64]) -> Result<bool> {
    let (sums, w) = face_integrands(sigma, samples, a, z)?;
    Ok(w == 0.0 || sums.iter().all(|&s| s <= phi * w))
}

/// Apex admissibility: at least `1e-3 · diam σ` away from every sample.
pub fn admissible(sigma: &Simplex, samples: &[(Point, f64)], z: &[f64]) -> bool {
    let gap = APEX_GAP_REL * sigma.diameter();
    samples.iter().all(|(p, _)| dist(p, z) >= gap)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectOptions {
    pub gamma: Option<f64>,
    /// Face-bound constant; defaults to `φ(a, n, t(σ))`.
    pub phi: Option<f64>,
    /// Draw budget; defaults to `64 (n + 2)`.
    pub budget: Option<usize>,
    pub exec: Exec,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            gamma: None,
            phi: None,
            budget: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Z0Selection {
    pub z: Point,
    /// Index of the accepted draw (draws are numbered from 0).
    pub index: usize,
    pub gamma: f64,
    pub phi: Option<f64>,
    /// True when the face bound was not required.
    pub vacuous: bool,
    pub face_sums: Vec<f64>,
    pub interior_weight: f64,
}

/// Draw `i` of the candidate stream for `seed`: uniform in `σ_γ`.
pub fn candidate(sg: &Simplex, seed: u64, i: usize) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    uniform_point(&mut rng, sg.points())
}

enum Verdict {
    Accept(Vec<f64>),
    TooClose,
    Over(f64),
}

/// Choose the apex: the first candidate (by draw index) that is admissible
/// and satisfies every facet bound. The bound is vacuous when `W = 0`, when
/// `n ≤ a`, or when `a` is not a positive integer.
pub fn select_z0(
    sigma: &Simplex,
    samples: &[(Point, f64)],
    a: f64,
    seed: u64,
    opts: SelectOptions,
) -> Result<Z0Selection> {
    let n = sigma.dim();
    if n == 0 {
        return Err(MeasureError::InvalidInput("a vertex has no interior apex".into()));
    }
    let gamma = opts.gamma.unwrap_or_else(|| default_gamma(a, n));
    let sg = sigma_gamma(sigma, gamma)?;
    let w: f64 = samples
        .iter()
        .filter(|(p, _)| sigma.is_interior(p, 1e-9 * sigma.diameter()))
        .map(|(_, w)| w)
        .sum();
    let quantitative = a >= 1.0 && a.fract() == 0.0 && (n as f64) > a && w > 0.0;
    let phi_v = match (quantitative, opts.phi) {
        (false, p) => p,
        (true, Some(p)) => Some(p),
        (true, None) => Some(phi(a, n, sigma.thickness().expect("dim ≥ 1"))?),
    };
    let budget = opts.budget.unwrap_or(64 * (n + 2));
    let eval = |i: usize| -> Result<Verdict> {
        let z = candidate(&sg, seed, i);
        if !admissible(sigma, samples, &z) {
            return Ok(Verdict::TooClose);
        }
        let (sums, wt) = face_integrands(sigma, samples, a, &z)?;
        if !quantitative {
            return Ok(Verdict::Accept(sums));
        }
        let p = phi_v.expect("quantitative path has φ");
        let worst = sums.iter().cloned().fold(0.0, f64::max) / wt;
        if worst <= p {
            Ok(Verdict::Accept(sums))
        } else {
            Ok(Verdict::Over(worst / p))
        }
    };
    let (mut inadmissible, mut over, mut best_ratio) = (0, 0, f64::INFINITY);
    const CHUNK: usize = 32;
    let mut start = 0;
    while start < budget {
        let len = CHUNK.min(budget - start);
        let verdicts = opts.exec.map_indexed(len, |k| eval(start + k));
        for (k, v) in verdicts.into_iter().enumerate() {
            match v? {
                Verdict::Accept(face_sums) => {
                    return Ok(Z0Selection {
                        z: candidate(&sg, seed, start + k),
                        index: start + k,
                        gamma,
                        phi: phi_v,
                        vacuous: !quantitative,
                        face_sums,
                        interior_weight: w,
                    })
                }
                Verdict::TooClose => inadmissible += 1,
                Verdict::Over(r) => {
                    over += 1;
                    best_ratio = best_ratio.min(r);
                }
            }
        }
        start += len;
    }
    Err(MeasureError::SelectionFailure {
        draws: budget,
        inadmissible,
        over_bound: over,
        best_ratio,
    })
}

/// Number of the first `draws` uniform `σ_γ` candidates lying in `⋂ Y(τ_j)`.
#[allow(clippy::too_many_arguments)]
pub fn acceptance_frequency(
    sigma: &Simplex,
    samples: &[(Point, f64)],
    a: f64,
    phi: f64,
    gamma: f64,
    draws: usize,
    seed: u64,
    exec: Exec,
) -> Result<usize> {
    let sg = sigma_gamma(sigma, gamma)?;
    let hits = exec.map_indexed(draws, |i| z0_in_y(sigma, samples, a, phi, &candidate(&sg, seed, i)));
    let mut n = 0;
    for h in hits {
        if h? {
            n += 1;
        }
    }
    Ok(n)
}
