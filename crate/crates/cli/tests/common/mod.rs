#![allow(dead_code)]

use std::collections::BTreeSet;

use complex_core::point::Point;
use complex_core::sampling::uniform_weights;
use complex_core::SimplicialComplex;
use pushout::{Sample, SetModel};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::from_parts(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        &[vec![0, 1, 2]],
        None,
    )
    .unwrap()
}

/// `k x k` unit squares, two triangles each, interior vertices jittered.
pub fn grid2(k: usize, jitter: f64, seed: u64) -> SimplicialComplex {
    let mut r = rng(seed);
    let idx = |i: usize, j: usize| i * (k + 1) + j;
    let mut v = Vec::new();
    for i in 0..=k {
        for j in 0..=k {
            let inner = i > 0 && i < k && j > 0 && j < k;
            let mut p = vec![i as f64, j as f64];
            if inner {
                p[0] += r.random_range(-jitter..=jitter);
                p[1] += r.random_range(-jitter..=jitter);
            }
            v.push(p);
        }
    }
    let mut s = Vec::new();
    for i in 0..k {
        for j in 0..k {
            s.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            s.push(vec![idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::from_parts(v, &s, None).unwrap()
}

/// `k^3` unit cubes, six Kuhn tetrahedra each, interior vertices jittered.
pub fn grid3(k: usize, jitter: f64, seed: u64) -> SimplicialComplex {
    let mut r = rng(seed);
    let idx = |i: usize, j: usize, l: usize| (i * (k + 1) + j) * (k + 1) + l;
    let mut v = Vec::new();
    for i in 0..=k {
        for j in 0..=k {
            for l in 0..=k {
                let inner = [i, j, l].iter().all(|&c| c > 0 && c < k);
                let mut p = vec![i as f64, j as f64, l as f64];
                if inner {
                    for x in p.iter_mut() {
                        *x += r.random_range(-jitter..=jitter);
                    }
                }
                v.push(p);
            }
        }
    }
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut s = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                for p in perms {
                    let mut c = [i, j, l];
                    let mut tet = vec![idx(c[0], c[1], c[2])];
                    for axis in p {
                        c[axis] += 1;
                        tet.push(idx(c[0], c[1], c[2]));
                    }
                    s.push(tet);
                }
            }
        }
    }
    SimplicialComplex::from_parts(v, &s, None).unwrap()
}

/// Designate the faces of a random nonempty subset of maximal simplices.
pub fn random_q(cx: &SimplicialComplex, r: &mut ChaCha8Rng, frac: f64) -> SimplicialComplex {
    let mut chosen: Vec<usize> = cx
        .maximal()
        .iter()
        .copied()
        .filter(|_| r.random_bool(frac))
        .collect();
    if chosen.is_empty() {
        chosen.push(cx.maximal()[r.random_range(0..cx.maximal().len())]);
    }
    let q: BTreeSet<usize> = chosen.iter().flat_map(|&m| cx.faces(m)).collect();
    cx.with_q(&q.into_iter().collect::<Vec<_>>()).unwrap()
}

/// A point interior to simplex `id`, with every weight above `margin`.
pub fn interior_point(cx: &SimplicialComplex, id: usize, r: &mut ChaCha8Rng, margin: f64) -> Point {
    let s = &cx.simplices()[id];
    loop {
        let w = uniform_weights(r, s.dim() + 1);
        if w.iter().all(|&x| x > margin) {
            return s.point_at(&w);
        }
    }
}

/// Random samples (mostly in top simplices, some on lower faces) and a few
/// flags of dimension `≤ ⌊a⌋`.
pub fn random_set(cx: &SimplicialComplex, r: &mut ChaCha8Rng, a: f64, max_samples: usize) -> SetModel {
    let count = r.random_range(1..=max_samples);
    let ids: Vec<usize> = (0..cx.len()).collect();
    let tops = cx.maximal().to_vec();
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let id = if r.random_bool(0.8) {
            *tops.choose(r).unwrap()
        } else {
            *ids.choose(r).unwrap()
        };
        if cx.simplices()[id].dim() == 0 {
            continue;
        }
        samples.push(Sample {
            point: interior_point(cx, id, r, 0.02),
            carrier: id,
            weight: r.random_range(0.01..=1.0),
        });
    }
    let mut full = BTreeSet::new();
    let flaggable: Vec<usize> = ids
        .iter()
        .copied()
        .filter(|&i| (cx.simplices()[i].dim() as f64) <= a.floor())
        .collect();
    for _ in 0..r.random_range(0..=3) {
        if let Some(&f) = flaggable.choose(r) {
            full.extend(cx.faces(f));
        }
    }
    SetModel { a, samples, full }
}

/// Mixed corpus of 2D and 3D complexes with random `Q` and `S`. Entry `i`
/// depends only on `seed + i` and uses `a = a_values[i % len]`, so corpora
/// built with the same seed share their complexes and `Q`.
pub fn corpus(count: usize, a_values: &[f64], seed: u64) -> Vec<(SimplicialComplex, SetModel)> {
    (0..count)
        .map(|i| {
            let s = seed + i as u64;
            let mut r = rng(s);
            let base = if i % 3 == 2 {
                grid3(2, 0.1, s)
            } else {
                grid2(3 + i % 3, 0.2, s)
            };
            let cx = random_q(&base, &mut r, 0.4);
            let set = random_set(&cx, &mut r, a_values[i % a_values.len()], 200);
            (cx, set)
        })
        .collect()
}
