//! A single geometric simplex with cached geometry.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::point::{combine, dist, dot, is_finite, norm, scale, sub, Point};
use crate::{TOL_INTERIOR, TOL_RANK};

/// Geometric simplex: ordered vertices plus cached barycenter, diameter,
/// radius and the gradients of the barycentric coordinate functions.
#[derive(Clone, Debug)]
pub struct Simplex {
    vertex_ids: Vec<usize>,
    points: Vec<Point>,
    barycenter: Point,
    diameter: f64,
    radius: Option<f64>,
    /// `n x N` pseudo-inverse of `[v1 - v0, ..., vn - v0]`.
    pinv: DMatrix<f64>,
    /// Ambient gradients of `β_0 .. β_n` (empty for a vertex).
    grads: Vec<Point>,
}

/// Result of casting a ray from an interior point to the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct RayHit {
    pub t0: f64,
    pub point: Point,
    /// Sorted vertex ids of the face whose interior contains the hit.
    pub hit_face: Vec<usize>,
    /// Barycentric weights of the hit point, aligned with the simplex order.
    pub weights: Vec<f64>,
}

/// Radial projection of `y` from an interior apex `z` onto the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct Radial {
    /// `b(y) = |y - z| / |h̄(y) - z|`.
    pub b: f64,
    /// `1 - b(y)`, computed directly from barycentric weights for accuracy
    /// near the boundary.
    pub one_minus_b: f64,
    pub hbar: Point,
    /// Barycentric weights of `hbar`, aligned with the simplex order.
    pub weights: Vec<f64>,
    /// Local index `j` of the facet (opposite vertex `j`) whose cone
    /// `ζ(z; τ_j)` contains `y`.
    pub facet: usize,
}

/// Decide geometric independence by a relative rank test on the difference
/// matrix `[v1 - v0, ..., vn - v0]`.
pub fn geometrically_independent(points: &[Point]) -> Result<bool> {
    let Some(first) = points.first() else {
        return Err(GeomError::InvalidInput("empty point list".into()));
    };
    let n_amb = first.len();
    if points.iter().any(|p| p.len() != n_amb) {
        return Err(GeomError::InvalidInput("points of mixed dimension".into()));
    }
    if points.iter().any(|p| !is_finite(p)) {
        return Err(GeomError::InvalidInput("non-finite coordinate".into()));
    }
    let n = points.len() - 1;
    if n == 0 {
        return Ok(true);
    }
    if n > n_amb {
        return Ok(false);
    }
    let d = difference_matrix(points);
    let sv = d.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(false);
    }
    Ok(sv.iter().all(|&s| s > TOL_RANK * max))
}

fn difference_matrix(points: &[Point]) -> DMatrix<f64> {
    let n = points.len() - 1;
    let n_amb = points[0].len();
    DMatrix::from_fn(n_amb, n, |r, c| points[c + 1][r] - points[0][r])
}

impl Simplex {
    /// Build a simplex from vertex ids and their coordinates.
    pub fn new(vertex_ids: Vec<usize>, points: Vec<Point>) -> Result<Self> {
        if vertex_ids.len() != points.len() {
            return Err(GeomError::InvalidInput(
                "vertex id and point counts differ".into(),
            ));
        }
        if !geometrically_independent(&points)? {
            return Err(GeomError::InvalidInput(format!(
                "vertices {vertex_ids:?} are not geometrically independent"
            )));
        }
        let n = points.len() - 1;
        let n_amb = points[0].len();
        let k = (n + 1) as f64;
        let mut barycenter = vec![0.0; n_amb];
        for p in &points {
            for (b, x) in barycenter.iter_mut().zip(p) {
                *b += x / k;
            }
        }
        let mut diameter = 0.0_f64;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                diameter = diameter.max(dist(&points[i], &points[j]));
            }
        }
        let (pinv, grads, radius) = if n == 0 {
            (DMatrix::zeros(0, n_amb), Vec::new(), None)
        } else {
            let d = difference_matrix(&points);
            let pinv = d
                .pseudo_inverse(0.0)
                .map_err(|e| GeomError::Numerical(e.to_string()))?;
            let mut grads = Vec::with_capacity(n + 1);
            let mut g0 = vec![0.0; n_amb];
            let rows: Vec<Point> = (0..n)
                .map(|r| pinv.row(r).iter().cloned().collect())
                .collect();
            for row in &rows {
                for (g, x) in g0.iter_mut().zip(row) {
                    *g -= x;
                }
            }
            grads.push(g0);
            grads.extend(rows);
            let radius = grads
                .iter()
                .map(|g| 1.0 / (k * norm(g)))
                .fold(f64::INFINITY, f64::min);
            (pinv, grads, Some(radius))
        };
        Ok(Simplex {
            vertex_ids,
            points,
            barycenter,
            diameter,
            radius,
            pinv,
            grads,
        })
    }

    /// Simplex on `points` with vertex ids `0..=n`.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        let ids = (0..points.len()).collect();
        Simplex::new(ids, points)
    }

    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn vertex(&self, j: usize) -> &[f64] {
        &self.points[j]
    }

    pub fn barycenter(&self) -> &[f64] {
        &self.barycenter
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Minimum distance from the barycenter to the boundary (`None` for a vertex).
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// `radius / diameter` (`None` for a vertex).
    pub fn thickness(&self) -> Option<f64> {
        self.radius.map(|r| r / self.diameter)
    }

    /// `n`-dimensional volume (1 for a vertex).
    pub fn volume(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        let d = difference_matrix(&self.points);
        let gram = d.transpose() * d;
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        gram.determinant().max(0.0).sqrt() / fact
    }

    /// Ambient gradient of `β_j`.
    pub fn gradient(&self, j: usize) -> &[f64] {
        &self.grads[j]
    }

    /// Distance from vertex `j` to the affine hull of the opposite facet.
    pub fn height(&self, j: usize) -> f64 {
        1.0 / norm(&self.grads[j])
    }

    pub fn local_index(&self, id: usize) -> Option<usize> {
        self.vertex_ids.iter().position(|&v| v == id)
    }

    /// Barycentric weights of the orthogonal projection of `x` onto the
    /// affine hull, and the distance from `x` to that hull.
    pub fn barycentric(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let v0 = &self.points[0];
        let d = sub(x, v0);
        if self.dim() == 0 {
            return (vec![1.0], norm(&d));
        }
        let lam = &self.pinv * DVector::from_column_slice(&d);
        let mut w = Vec::with_capacity(self.dim() + 1);
        w.push(1.0 - lam.iter().sum::<f64>());
        w.extend(lam.iter().cloned());
        let recon = combine(&self.points, &w);
        (w, dist(&recon, x))
    }

    /// Point with the given barycentric weights.
    pub fn point_at(&self, weights: &[f64]) -> Point {
        combine(&self.points, weights)
    }

    /// Whether `x` lies in the closed simplex within distance `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance_to(x) <= tol
    }

    /// Whether `x` lies in the simplicial interior: on the affine hull
    /// (within `tol`) with every weight above [`TOL_INTERIOR`].
    pub fn is_interior(&self, x: &[f64], tol: f64) -> bool {
        let (w, res) = self.barycentric(x);
        res <= tol && w.iter().all(|&b| b > TOL_INTERIOR)
    }

    /// Euclidean distance from `x` to the closed simplex.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        dist_to_hull(&self.points, x)
    }

    /// Sub-simplex on the given local vertex indices.
    pub fn face(&self, local: &[usize]) -> Simplex {
        let ids = local.iter().map(|&j| self.vertex_ids[j]).collect();
        let pts = local.iter().map(|&j| self.points[j].clone()).collect();
        Simplex::new(ids, pts).expect("faces of an independent simplex are independent")
    }

    /// Facet opposite local vertex `j`.
    pub fn facet(&self, j: usize) -> Simplex {
        let local: Vec<usize> = (0..=self.dim()).filter(|&i| i != j).collect();
        self.face(&local)
    }

    fn interior_weights(&self, z: &[f64]) -> Result<Vec<f64>> {
        if self.dim() == 0 {
            return Err(GeomError::Precondition("a vertex has no interior rays".into()));
        }
        let (alpha, res) = self.barycentric(z);
        if res > 1e-9 * self.diameter.max(f64::MIN_POSITIVE) || alpha.iter().any(|&a| a <= TOL_INTERIOR) {
            return Err(GeomError::Precondition(format!(
                "point {z:?} is not interior to the simplex"
            )));
        }
        Ok(alpha)
    }

    /// Unique boundary point `z + t0·dir` of a ray from an interior point.
    pub fn ray_boundary_intersection(&self, z: &[f64], dir: &[f64]) -> Result<RayHit> {
        let alpha = self.interior_weights(z)?;
        let len = norm(dir);
        if len == 0.0 || !len.is_finite() {
            return Err(GeomError::InvalidInput("ray direction has zero length".into()));
        }
        let rates: Vec<f64> = self.grads.iter().map(|g| dot(g, dir)).collect();
        // `Σ rate_j v_j` reconstructs the in-hull part of `dir`.
        let off = norm(&sub(dir, &self.point_at(&rates)));
        if off > 1e-9 * len {
            return Err(GeomError::InvalidInput(
                "ray direction leaves the affine hull".into(),
            ));
        }
        let mut t0 = f64::INFINITY;
        for (a, r) in alpha.iter().zip(&rates) {
            if *r < 0.0 {
                t0 = t0.min(a / -r);
            }
        }
        if !t0.is_finite() {
            return Err(GeomError::Numerical("ray never leaves the simplex".into()));
        }
        let raw: Vec<f64> = alpha.iter().zip(&rates).map(|(a, r)| a + t0 * r).collect();
        let weights = snap_weights(raw);
        let point = self.point_at(&weights);
        let hit_face = support_ids(&self.vertex_ids, &weights);
        Ok(RayHit {
            t0,
            point,
            hit_face,
            weights,
        })
    }

    /// Radial projection `h̄` of `y ∈ σ` from the interior apex `z`.
    ///
    /// For `y = z` the projection is fixed to the ray towards vertex 0.
    pub fn radial(&self, z: &[f64], y: &[f64]) -> Result<Radial> {
        let alpha = self.interior_weights(z)?;
        let (beta, res) = self.barycentric(y);
        let tol = 1e-9 * self.diameter;
        if res > tol || beta.iter().any(|&b| b < -1e-9) {
            return Err(GeomError::InvalidInput(format!(
                "point {y:?} is not in the simplex"
            )));
        }
        if dist(y, z) <= 1e-14 * self.diameter {
            let mut weights = vec![0.0; self.dim() + 1];
            weights[0] = 1.0;
            return Ok(Radial {
                b: 0.0,
                one_minus_b: 1.0,
                hbar: self.points[0].clone(),
                weights,
                facet: 1,
            });
        }
        // ζ(z; τ_j) is selected by the smallest β_j/α_j, i.e. the largest
        // (α_j − β_j)/α_j; ties resolve to the lowest index.
        let mut facet = 0;
        let mut best = f64::INFINITY;
        for (j, (a, b)) in alpha.iter().zip(&beta).enumerate() {
            let r = b / a;
            if r < best {
                best = r;
                facet = j;
            }
        }
        if best <= TOL_INTERIOR {
            let weights = snap_weights(beta);
            return Ok(Radial {
                b: 1.0,
                one_minus_b: 0.0,
                hbar: y.to_vec(),
                weights,
                facet,
            });
        }
        let one_minus_b = best.max(0.0);
        let b = 1.0 - one_minus_b;
        let mut raw: Vec<f64> = alpha
            .iter()
            .zip(&beta)
            .map(|(a, bt)| (bt - one_minus_b * a) / b)
            .collect();
        raw[facet] = 0.0;
        let weights = snap_weights(raw);
        let hbar = self.point_at(&weights);
        Ok(Radial {
            b,
            one_minus_b,
            hbar,
            weights,
            facet,
        })
    }

    /// Face spanned by the vertices of `σ` not in `tau`.
    pub fn opposite_face(&self, tau: &[usize]) -> Result<Simplex> {
        let local = self.proper_face_locals(tau)?;
        let rest: Vec<usize> = (0..=self.dim()).filter(|j| !local.contains(j)).collect();
        Ok(self.face(&rest))
    }

    fn proper_face_locals(&self, tau: &[usize]) -> Result<Vec<usize>> {
        if tau.is_empty() {
            return Err(GeomError::InvalidInput("empty face".into()));
        }
        let mut local = Vec::with_capacity(tau.len());
        for id in tau {
            let j = self
                .local_index(*id)
                .ok_or_else(|| GeomError::InvalidInput(format!("vertex {id} not in simplex")))?;
            if !local.contains(&j) {
                local.push(j);
            }
        }
        if local.len() == self.dim() + 1 {
            return Err(GeomError::InvalidInput("face must be proper".into()));
        }
        Ok(local)
    }

    /// Enlarge `χ` about its face `ξ`: vertices of `ξ` stay, every vertex `v`
    /// of the opposite face moves to `2v − χ̂`. The result has `ξ` as a face,
    /// contains `χ`, and has the opposite face of `χ` in its interior.
    pub fn expand(&self, xi: &[usize]) -> Result<Simplex> {
        let local = self.proper_face_locals(xi)?;
        let pts: Vec<Point> = (0..=self.dim())
            .map(|j| {
                if local.contains(&j) {
                    self.points[j].clone()
                } else {
                    sub(&scale(&self.points[j], 2.0), &self.barycenter)
                }
            })
            .collect();
        let out = Simplex::new(self.vertex_ids.clone(), pts)?;
        let tol = 1e-9 * out.diameter;
        for j in 0..=self.dim() {
            if !out.contains(&self.points[j], tol) {
                return Err(GeomError::Numerical("expanded simplex misses a vertex".into()));
            }
        }
        let zeta: Vec<usize> = (0..=self.dim()).filter(|j| !local.contains(j)).collect();
        let zeta_pts: Vec<Point> = zeta.iter().map(|&j| self.points[j].clone()).collect();
        if !out.is_interior(&combine(&zeta_pts, &vec![1.0 / zeta.len() as f64; zeta.len()]), tol) {
            return Err(GeomError::Numerical(
                "opposite face is not interior to the expanded simplex".into(),
            ));
        }
        Ok(out)
    }
}

/// Zero weights at or below [`TOL_INTERIOR`] and renormalise.
pub fn snap_weights(mut w: Vec<f64>) -> Vec<f64> {
    for x in w.iter_mut() {
        if *x <= TOL_INTERIOR {
            *x = 0.0;
        }
    }
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        for x in w.iter_mut() {
            *x /= s;
        }
    }
    w
}

/// Sorted ids of the vertices carrying positive weight.
pub fn support_ids(ids: &[usize], weights: &[f64]) -> Vec<usize> {
    let mut s: Vec<usize> = ids
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&i, _)| i)
        .collect();
    s.sort_unstable();
    s
}

/// Distance from `x` to the convex hull of affinely independent `points`,
/// by enumerating faces and keeping projections with nonnegative weights.
pub fn dist_to_hull(points: &[Point], x: &[f64]) -> f64 {
    let k = points.len();
    debug_assert!(k > 0 && k <= 16);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(d) = affine_projection_dist(points, &idx, x) {
            best = best.min(d);
        }
    }
    best
}

fn affine_projection_dist(points: &[Point], idx: &[usize], x: &[f64]) -> Option<f64> {
    let v0 = &points[idx[0]];
    if idx.len() == 1 {
        return Some(dist(v0, x));
    }
    let m = idx.len() - 1;
    let cols: Vec<Point> = idx[1..].iter().map(|&i| sub(&points[i], v0)).collect();
    let rhs = sub(x, v0);
    let gram = DMatrix::from_fn(m, m, |r, c| dot(&cols[r], &cols[c]));
    let b = DVector::from_fn(m, |r, _| dot(&cols[r], &rhs));
    let lam = gram.lu().solve(&b)?;
    let l0 = 1.0 - lam.iter().sum::<f64>();
    if l0 < 0.0 || lam.iter().any(|&l| l < 0.0) {
        return None;
    }
    let mut p = v0.clone();
    for (c, l) in cols.iter().zip(lam.iter()) {
        for (pi, ci) in p.iter_mut().zip(c) {
            *pi += l * ci;
        }
    }
    Some(dist(&p, x))
}
