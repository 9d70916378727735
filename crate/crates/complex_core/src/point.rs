//! Small dense-vector helpers; points are plain `Vec<f64>`.

pub type Point = Vec<f64>;

pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Point {
    a.iter().map(|x| x * s).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `(1 - t) a + t b`.
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Point {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

/// `Σ w_i p_i`.
pub fn combine(points: &[Point], weights: &[f64]) -> Point {
    let mut out = vec![0.0; points.first().map_or(0, |p| p.len())];
    for (p, &w) in points.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(p) {
            *o += w * x;
        }
    }
    out
}

pub fn is_finite(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Distance from `x` to the segment `[a, b]`.
pub fn dist_to_segment(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(&ab, &ab);
    if len2 == 0.0 {
        return dist(x, a);
    }
    let t = (dot(&sub(x, a), &ab) / len2).clamp(0.0, 1.0);
    let p: Point = a.iter().zip(&ab).map(|(ai, d)| ai + t * d).collect();
    dist(x, &p)
}
