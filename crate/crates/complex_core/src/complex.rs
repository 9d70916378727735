//! Face-closed simplicial complexes with incidence indices and a
//! designated subcomplex `Q`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::point::{dist, is_finite, Point};
use crate::simplex::{snap_weights, support_ids, Simplex};
use crate::{TOL_INTERIOR, TOL_MEMBERSHIP_REL};

/// JSON interchange form: vertex table, simplices as vertex-index lists and
/// `Q` as indices into `simplices` (all of `P` when absent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexData {
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<usize>>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<usize>>,
}

/// Carrier simplex of a point and its strictly positive weights, aligned with
/// the carrier's (sorted) vertex ids.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BarycentricCoords {
    pub carrier: usize,
    pub weights: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    Faces,
    ProperFaces,
    Star,
    ClosedStar,
    Link,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexMetrics {
    pub barycenter: Point,
    pub diameter: f64,
    pub radius: Option<f64>,
    pub thickness: Option<f64>,
}

/// A finite simplicial complex in `R^N`.
///
/// Simplex ids are canonical: simplices are sorted by dimension and then by
/// their sorted vertex tuple, so equal complexes get equal ids.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<Point>,
    simplices: Vec<Simplex>,
    orders: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    cofaces: Vec<Vec<usize>>,
    maximal: Vec<usize>,
    boxes: Vec<(Point, Point)>,
    in_q: Vec<bool>,
    scale: f64,
    notes: Vec<String>,
}

impl SimplicialComplex {
    /// Build from a vertex table and simplices given as (ordered) vertex
    /// lists. Missing faces are added. `q` lists simplices of `Q` by vertex
    /// tuples; `None` means `Q = P`.
    pub fn from_parts(
        vertices: Vec<Point>,
        simplices: &[Vec<usize>],
        q: Option<&[Vec<usize>]>,
    ) -> Result<Self> {
        let n_amb = vertices.first().map_or(0, |v| v.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != n_amb {
                return Err(GeomError::InvalidInput(format!(
                    "vertex {i} has dimension {} (expected {n_amb})",
                    v.len()
                )));
            }
            if !is_finite(v) {
                return Err(GeomError::InvalidInput(format!("vertex {i} is not finite")));
            }
        }
        let mut listed: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (si, s) in simplices.iter().enumerate() {
            check_simplex(si, s, vertices.len(), n_amb)?;
            let mut key = s.clone();
            key.sort_unstable();
            listed.entry(key).or_insert_with(|| s.clone());
        }
        let mut all: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for order in listed.values() {
            for face in subsequences(order) {
                let mut key = face.clone();
                key.sort_unstable();
                all.entry(key).or_insert(face);
            }
        }
        // Orders of listed simplices take precedence over induced ones.
        for (k, o) in &listed {
            all.insert(k.clone(), o.clone());
        }
        let added = all
            .keys()
            .filter(|k| k.len() > 1 && !listed.contains_key(*k))
            .count();
        let mut keyed: Vec<(Vec<usize>, Vec<usize>)> = all.into_iter().collect();
        keyed.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));

        let mut out = SimplicialComplex {
            vertices,
            simplices: Vec::with_capacity(keyed.len()),
            orders: Vec::with_capacity(keyed.len()),
            index: HashMap::with_capacity(keyed.len()),
            cofaces: vec![Vec::new(); keyed.len()],
            maximal: Vec::new(),
            boxes: Vec::new(),
            in_q: vec![false; keyed.len()],
            scale: 1.0,
            notes: Vec::new(),
        };
        for (id, (key, order)) in keyed.into_iter().enumerate() {
            let pts = key.iter().map(|&v| out.vertices[v].clone()).collect();
            let s = Simplex::new(key.clone(), pts)?;
            out.simplices.push(s);
            out.orders.push(order);
            out.index.insert(key, id);
        }
        for id in 0..out.simplices.len() {
            let key = out.simplices[id].vertex_ids().to_vec();
            if key.len() < 2 {
                continue;
            }
            for face in subsequences(&key) {
                if face.len() < key.len() {
                    let f = out.index[&face];
                    out.cofaces[f].push(id);
                }
            }
        }
        out.maximal = (0..out.simplices.len())
            .filter(|&i| out.cofaces[i].is_empty())
            .collect();
        out.boxes = out
            .maximal
            .iter()
            .map(|&m| bbox(out.simplices[m].points()))
            .collect();
        let used: Vec<Point> = out
            .simplices
            .iter()
            .filter(|s| s.dim() == 0)
            .map(|s| s.vertex(0).to_vec())
            .collect();
        if !used.is_empty() {
            let (lo, hi) = bbox(&used);
            let d = dist(&lo, &hi);
            if d > 0.0 {
                out.scale = d;
            }
        }
        if added > 0 {
            out.notes
                .push(format!("auto-closed {added} missing face(s) of positive dimension"));
        }
        match q {
            None => out.in_q = vec![true; out.simplices.len()],
            Some(q) => {
                let mut ids = Vec::with_capacity(q.len());
                for t in q {
                    let id = out.id_of(t).ok_or_else(|| {
                        GeomError::InvalidInput(format!("Q simplex {t:?} is not in the complex"))
                    })?;
                    ids.push(id);
                }
                out.set_q(&ids);
            }
        }
        Ok(out)
    }

    /// Build from the JSON interchange form.
    pub fn from_data(data: &ComplexData) -> Result<Self> {
        let q = match &data.q {
            None => None,
            Some(idx) => {
                let mut t = Vec::with_capacity(idx.len());
                for &i in idx {
                    let s = data.simplices.get(i).ok_or_else(|| {
                        GeomError::InvalidInput(format!("Q references unknown simplex index {i}"))
                    })?;
                    t.push(s.clone());
                }
                Some(t)
            }
        };
        Self::from_parts(data.vertices.clone(), &data.simplices, q.as_deref())
    }

    /// Interchange form listing every simplex in id order, so that loading
    /// it back reproduces the same ids.
    pub fn to_data(&self) -> ComplexData {
        ComplexData {
            vertices: self.vertices.clone(),
            simplices: self.orders.clone(),
            q: Some(self.q_ids()),
        }
    }

    /// Same complex with `Q` replaced by the face closure of `ids`.
    pub fn with_q(&self, ids: &[usize]) -> Result<Self> {
        for &i in ids {
            self.simplex(i)?;
        }
        let mut out = self.clone();
        out.set_q(ids);
        Ok(out)
    }

    fn set_q(&mut self, ids: &[usize]) {
        self.in_q = vec![false; self.simplices.len()];
        for &i in ids {
            for f in self.faces(i) {
                self.in_q[f] = true;
            }
        }
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, |v| v.len())
    }

    /// Largest simplex dimension (0 for an empty complex).
    pub fn dim(&self) -> usize {
        self.simplices.last().map_or(0, |s| s.dim())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> Result<&Simplex> {
        self.simplices.get(id).ok_or(GeomError::InvalidId(id))
    }

    /// Vertex order used by the edgewise subdivision.
    pub fn order(&self, id: usize) -> &[usize] {
        &self.orders[id]
    }

    /// Id of the simplex with the given vertex set (any order).
    pub fn id_of(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    /// Simplices with no proper coface.
    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    /// All proper cofaces, in increasing id order.
    pub fn cofaces(&self, id: usize) -> &[usize] {
        &self.cofaces[id]
    }

    /// All faces of `id`, including itself, in increasing id order.
    pub fn faces(&self, id: usize) -> Vec<usize> {
        let mut f: Vec<usize> = subsequences(self.simplices[id].vertex_ids())
            .into_iter()
            .map(|k| self.index[&k])
            .collect();
        f.sort_unstable();
        f
    }

    /// Whether simplex `a` is a face of simplex `b` (a = b allowed).
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        is_subset(self.simplices[a].vertex_ids(), self.simplices[b].vertex_ids())
    }

    /// Whether the closed simplices `a` and `b` intersect (share a vertex).
    pub fn meet(&self, a: usize, b: usize) -> bool {
        let (x, y) = (self.simplices[a].vertex_ids(), self.simplices[b].vertex_ids());
        x.iter().any(|v| y.contains(v))
    }

    pub fn in_q(&self, id: usize) -> bool {
        self.in_q[id]
    }

    pub fn q_ids(&self) -> Vec<usize> {
        (0..self.simplices.len()).filter(|&i| self.in_q[i]).collect()
    }

    /// Dimension of `Q` (`None` if `Q` is empty).
    pub fn q_dim(&self) -> Option<usize> {
        (0..self.simplices.len())
            .rev()
            .find(|&i| self.in_q[i])
            .map(|i| self.simplices[i].dim())
    }

    /// Diameter proxy of `|P|` (bounding-box diagonal).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Membership tolerance `1e-8 · diam(P)`.
    pub fn tol_membership(&self) -> f64 {
        TOL_MEMBERSHIP_REL * self.scale
    }

    pub fn max_diameter(&self) -> f64 {
        self.simplices.iter().map(|s| s.diameter()).fold(0.0, f64::max)
    }

    /// Incidence query; all relations return sorted simplex ids.
    pub fn incidence(&self, id: usize, rel: Incidence) -> Result<Vec<usize>> {
        self.simplex(id)?;
        Ok(match rel {
            Incidence::Faces => self.faces(id),
            Incidence::ProperFaces => self.faces(id).into_iter().filter(|&f| f != id).collect(),
            Incidence::Star => {
                let mut s = vec![id];
                s.extend_from_slice(&self.cofaces[id]);
                s.sort_unstable();
                s
            }
            Incidence::ClosedStar => self.closed_star(id),
            Incidence::Link => {
                let v = self.simplices[id].vertex_ids();
                self.closed_star(id)
                    .into_iter()
                    .filter(|&f| !self.simplices[f].vertex_ids().iter().any(|x| v.contains(x)))
                    .collect()
            }
        })
    }

    fn closed_star(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = std::iter::once(id)
            .chain(self.cofaces[id].iter().copied())
            .flat_map(|s| self.faces(s))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn metrics(&self, id: usize) -> Result<SimplexMetrics> {
        let s = self.simplex(id)?;
        Ok(SimplexMetrics {
            barycenter: s.barycenter().to_vec(),
            diameter: s.diameter(),
            radius: s.radius(),
            thickness: s.thickness(),
        })
    }

    /// Id of the face of `sigma` carrying the positive entries of `weights`
    /// (aligned with `sigma`'s vertex order).
    pub fn face_of_weights(&self, sigma: usize, weights: &[f64]) -> usize {
        let ids = support_ids(self.simplices[sigma].vertex_ids(), weights);
        self.index[&ids]
    }

    /// Carrier-restricted coordinates of a point of simplex `sigma`, given
    /// weights aligned with `sigma`'s vertex order.
    pub fn restrict(&self, sigma: usize, weights: &[f64]) -> BarycentricCoords {
        let carrier = self.face_of_weights(sigma, weights);
        let w = weights.iter().copied().filter(|&w| w > 0.0).collect();
        BarycentricCoords { carrier, weights: w }
    }

    /// Locate `x` in `|P|`: its carrier and barycentric weights.
    pub fn locate(&self, x: &[f64]) -> Result<BarycentricCoords> {
        if x.len() != self.ambient_dim() || !is_finite(x) {
            return Err(GeomError::InvalidInput(format!("bad point {x:?}")));
        }
        let tol = self.tol_membership();
        for (k, &m) in self.maximal.iter().enumerate() {
            let (lo, hi) = &self.boxes[k];
            if x.iter()
                .zip(lo.iter().zip(hi))
                .any(|(xi, (l, h))| *xi < l - tol || *xi > h + tol)
            {
                continue;
            }
            let s = &self.simplices[m];
            let (w, res) = s.barycentric(x);
            if res > tol || w.iter().any(|&b| b < -1e-6) {
                continue;
            }
            let clamped = snap_weights(w.iter().map(|&b| b.max(0.0)).collect());
            if dist(&s.point_at(&clamped), x) > tol {
                continue;
            }
            return Ok(self.restrict(m, &clamped));
        }
        let (nearest, distance) = self
            .maximal
            .iter()
            .map(|&m| (m, self.simplices[m].distance_to(x)))
            .fold((usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        Err(GeomError::NotInPolytope {
            point: x.to_vec(),
            nearest,
            distance,
        })
    }

    /// Whether `x` lies in `Int σ` (on the hull within tolerance, all
    /// weights above the interior threshold).
    pub fn is_interior(&self, id: usize, x: &[f64]) -> bool {
        let s = &self.simplices[id];
        let (w, res) = s.barycentric(x);
        res <= self.tol_membership() && w.iter().all(|&b| b > TOL_INTERIOR)
    }

    /// Minimum thickness over simplices satisfying `filter` (dim ≥ 1 only).
    pub fn min_thickness(&self, filter: impl Fn(usize) -> bool) -> Option<f64> {
        (0..self.simplices.len())
            .filter(|&i| filter(i))
            .filter_map(|i| self.simplices[i].thickness())
            .reduce(f64::min)
    }
}

fn check_simplex(si: usize, s: &[usize], nv: usize, n_amb: usize) -> Result<()> {
    if s.is_empty() {
        return Err(GeomError::InvalidInput(format!("simplex {si} is empty")));
    }
    if s.len() > n_amb + 1 {
        return Err(GeomError::InvalidInput(format!(
            "simplex {si} has {} vertices in R^{n_amb}",
            s.len()
        )));
    }
    for (k, &v) in s.iter().enumerate() {
        if v >= nv {
            return Err(GeomError::InvalidInput(format!(
                "simplex {si} references unknown vertex {v}"
            )));
        }
        if s[..k].contains(&v) {
            return Err(GeomError::InvalidInput(format!(
                "simplex {si} repeats vertex {v}"
            )));
        }
    }
    Ok(())
}

/// All nonempty subsequences of `v`, preserving order.
pub(crate) fn subsequences(v: &[usize]) -> Vec<Vec<usize>> {
    let k = v.len();
    (1u64..(1u64 << k))
        .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).map(|i| v[i]).collect())
        .collect()
}

/// `a ⊆ b` for sorted slices.
pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

pub(crate) fn bbox(points: &[Point]) -> (Point, Point) {
    let n = points[0].len();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in points {
        for i in 0..n {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    (lo, hi)
}
