//! Edgewise (Freudenthal/Kuhn) subdivision with thickness control.
//!
//! One round splits every maximal `d`-simplex into `2^d` children whose
//! vertices are old vertices and edge midpoints. In Kuhn coordinates
//! `x_i = Σ_{j ≥ i} β_j` the scaled simplex `{2 ≥ x_1 ≥ … ≥ x_d ≥ 0}` is cut
//! into the Freudenthal simplices of the unit lattice. Children keep the
//! lattice path order for `d ≤ 3`, which keeps every descendant a scaled
//! copy of one of finitely many shapes; for `d > 3` a global vertex order
//! is used so shared faces are cut consistently, and the resulting minimum
//! thickness is only measured.

use std::collections::BTreeMap;

use crate::complex::SimplicialComplex;
use crate::error::{GeomError, Result};
use crate::point::{lerp, Point};

/// Subdivided complex with its correspondence to the input.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// For each new simplex, the input simplex whose interior contains its
    /// interior.
    pub parent: Vec<usize>,
    pub rounds: usize,
    /// Minimum thickness over positive-dimensional simplices of the output.
    pub t0: Option<f64>,
}

/// Refine until every simplex has diameter `< eps`; `Q` is carried forward.
pub fn subdivide(cx: &SimplicialComplex, eps: f64) -> Result<Subdivision> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(GeomError::InvalidInput(format!("epsilon must be positive, got {eps}")));
    }
    let mut cur = cx.clone();
    let mut parent: Vec<usize> = (0..cx.len()).collect();
    let mut rounds = 0;
    while cur.max_diameter() >= eps {
        let (next, step) = refine(&cur)?;
        parent = step.iter().map(|&p| parent[p]).collect();
        cur = next;
        rounds += 1;
    }
    let t0 = cur.min_thickness(|_| true);
    Ok(Subdivision {
        complex: cur,
        parent,
        rounds,
        t0,
    })
}

/// One edgewise round. Returns the refined complex and, for each new
/// simplex, its parent in `cx`.
pub fn refine(cx: &SimplicialComplex) -> Result<(SimplicialComplex, Vec<usize>)> {
    let global_order = cx.dim() > 3;
    let mut children: Vec<Vec<(usize, usize)>> = Vec::new();
    for &m in cx.maximal() {
        let order: Vec<usize> = if global_order {
            cx.simplices()[m].vertex_ids().to_vec()
        } else {
            cx.order(m).to_vec()
        };
        children.extend(kuhn_children(&order));
    }
    let mut keys: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for c in &children {
        for k in c {
            keys.insert(*k, 0);
        }
    }
    let mut vertices: Vec<Point> = Vec::with_capacity(keys.len());
    let mut support: Vec<(usize, usize)> = Vec::with_capacity(keys.len());
    for (i, (k, slot)) in keys.iter_mut().enumerate() {
        *slot = i;
        let (a, b) = *k;
        vertices.push(lerp(&cx.vertices()[a], &cx.vertices()[b], 0.5));
        support.push(*k);
    }
    let lists: Vec<Vec<usize>> = children
        .iter()
        .map(|c| {
            let mut l: Vec<usize> = c.iter().map(|k| keys[k]).collect();
            if global_order {
                l.sort_unstable();
            }
            l
        })
        .collect();
    let fine = SimplicialComplex::from_parts(vertices, &lists, None)?;
    let parent: Vec<usize> = fine
        .simplices()
        .iter()
        .map(|s| {
            let mut old: Vec<usize> = s
                .vertex_ids()
                .iter()
                .flat_map(|&v| [support[v].0, support[v].1])
                .collect();
            old.sort_unstable();
            old.dedup();
            cx.id_of(&old).expect("children lie in a single input simplex")
        })
        .collect();
    let q: Vec<usize> = (0..fine.len()).filter(|&i| cx.in_q(parent[i])).collect();
    let fine = fine.with_q(&q)?;
    Ok((fine, parent))
}

/// Children of the simplex with vertex order `o`, as ordered lists of
/// new-vertex keys `(a, b)` (`a == b` for old vertices, else the midpoint).
fn kuhn_children(o: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let d = o.len() - 1;
    if d == 0 {
        return vec![vec![(o[0], o[0])]];
    }
    let key = |p: &[u8]| -> (usize, usize) {
        let mut w = vec![0u8; d + 1];
        w[0] = 2 - p[0];
        for i in 1..d {
            w[i] = p[i - 1] - p[i];
        }
        w[d] = p[d - 1];
        let nz: Vec<usize> = (0..=d).filter(|&i| w[i] > 0).collect();
        let (a, b) = if nz.len() == 1 {
            (o[nz[0]], o[nz[0]])
        } else {
            (o[nz[0]], o[nz[1]])
        };
        (a.min(b), a.max(b))
    };
    let valid = |p: &[u8]| p[0] <= 2 && p.windows(2).all(|w| w[0] >= w[1]);
    let mut out = Vec::new();
    for cube in 0u32..(1 << d) {
        let base: Vec<u8> = (0..d).map(|i| ((cube >> i) & 1) as u8).collect();
        for perm in permutations(d) {
            let mut x = base.clone();
            let mut path = vec![x.clone()];
            for &k in &perm {
                x[k] += 1;
                path.push(x.clone());
            }
            if path.iter().all(|p| valid(p)) {
                out.push(path.iter().map(|p| key(p)).collect());
            }
        }
    }
    debug_assert_eq!(out.len(), 1 << d);
    out
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}
