//! Orthonormal frame adapted to a facet of a simplex.

use crate::error::{GeomError, Result};
use crate::point::{dot, norm, scale, sub, Point};
use crate::simplex::Simplex;

/// Orthonormal frame of `aff σ` in which the facet `τ_j` (opposite vertex
/// `j`) lies in `{last coordinate = 0}` and the opposite vertex has positive
/// last coordinate.
#[derive(Clone, Debug)]
pub struct FaceFrame {
    origin: Point,
    /// `n` orthonormal ambient vectors; the last is the inward unit normal.
    basis: Vec<Point>,
}

impl FaceFrame {
    pub fn new(sigma: &Simplex, facet: usize) -> Result<Self> {
        let n = sigma.dim();
        if n == 0 || facet > n {
            return Err(GeomError::InvalidInput(format!(
                "facet {facet} of a {n}-simplex"
            )));
        }
        let others: Vec<usize> = (0..=n).filter(|&i| i != facet).collect();
        let origin = sigma.vertex(others[0]).to_vec();
        let mut basis: Vec<Point> = Vec::with_capacity(n);
        let push = |v: Point, basis: &mut Vec<Point>| -> Result<()> {
            let mut w = v;
            for _ in 0..2 {
                for e in basis.iter() {
                    let c = dot(&w, e);
                    for (wi, ei) in w.iter_mut().zip(e) {
                        *wi -= c * ei;
                    }
                }
            }
            let l = norm(&w);
            if l == 0.0 {
                return Err(GeomError::Numerical("degenerate frame".into()));
            }
            basis.push(scale(&w, 1.0 / l));
            Ok(())
        };
        for &i in &others[1..] {
            push(sub(sigma.vertex(i), &origin), &mut basis)?;
        }
        push(sub(sigma.vertex(facet), &origin), &mut basis)?;
        Ok(FaceFrame { origin, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Frame coordinates of a point of `aff σ`.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        let d = sub(x, &self.origin);
        self.basis.iter().map(|e| dot(&d, e)).collect()
    }

    /// Ambient point with the given frame coordinates.
    pub fn point(&self, c: &[f64]) -> Point {
        let mut p = self.origin.clone();
        for (ci, e) in c.iter().zip(&self.basis) {
            for (pi, ei) in p.iter_mut().zip(e) {
                *pi += ci * ei;
            }
        }
        p
    }

    /// Signed distance of `x` from the facet hyperplane (positive inside).
    pub fn height(&self, x: &[f64]) -> f64 {
        dot(&sub(x, &self.origin), &self.basis[self.basis.len() - 1])
    }
}
