//! Random points in simplices (uniform via Dirichlet(1) weights).

use rand::Rng;
use rand_distr::Exp1;

use crate::point::{combine, Point};

/// Uniform barycentric weights on the standard `n`-simplex (`n + 1` entries).
pub fn uniform_weights<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..count).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = e.iter().sum();
        if s > 0.0 && e.iter().all(|&x| x > 0.0) {
            return e.into_iter().map(|x| x / s).collect();
        }
    }
}

/// Uniform random point of the simplex spanned by `points`.
pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R, points: &[Point]) -> Point {
    let w = uniform_weights(rng, points.len());
    combine(points, &w)
}
