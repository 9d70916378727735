//! Validation of complexes: structural checks on raw input plus a sampled
//! interior-overlap test.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{subsequences, ComplexData, SimplicialComplex};
use crate::exec::Exec;
use crate::point::{is_finite, Point};
use crate::sampling::uniform_point;
use crate::simplex::geometrically_independent;

/// Random interior points sampled per simplex (besides the barycenter).
const OVERLAP_SAMPLES: usize = 3;
/// Minimum weight for a sampled point to count as interior to another simplex.
const OVERLAP_MARGIN: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvalidVertex { vertex: usize, reason: String },
    InvalidSimplex { simplex: usize, reason: String },
    InvalidQReference { q_index: usize, value: usize },
    DependentVertices { simplex: usize, vertices: Vec<usize> },
    MissingFace { simplex: usize, face: Vec<usize> },
    QNotFaceClosed { simplex: usize, face: Vec<usize> },
    InteriorOverlap { first: Vec<usize>, second: Vec<usize>, witness: Point },
}

impl Violation {
    /// Missing faces and a non-closed `Q` are repaired by face closure on
    /// load; everything else makes the input unusable.
    pub fn is_fatal(&self) -> bool {
        !matches!(self, Violation::MissingFace { .. } | Violation::QNotFaceClosed { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub overlap_samples: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_fatal(&self) -> bool {
        self.violations.iter().any(Violation::is_fatal)
    }
}

/// Validate raw interchange data.
pub fn validate_data(data: &ComplexData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    let n_amb = data.vertices.first().map_or(0, |p| p.len());
    let mut bad_vertex = vec![false; data.vertices.len()];
    for (i, p) in data.vertices.iter().enumerate() {
        let reason = if p.len() != n_amb {
            Some(format!("dimension {} (expected {n_amb})", p.len()))
        } else if !is_finite(p) {
            Some("non-finite coordinate".to_string())
        } else {
            None
        };
        if let Some(reason) = reason {
            bad_vertex[i] = true;
            v.push(Violation::InvalidVertex { vertex: i, reason });
        }
    }
    let mut good: Vec<Option<Vec<usize>>> = Vec::with_capacity(data.simplices.len());
    for (si, s) in data.simplices.iter().enumerate() {
        let mut key = s.clone();
        key.sort_unstable();
        let reason = if s.is_empty() {
            Some("empty simplex".to_string())
        } else if let Some(&x) = s.iter().find(|&&x| x >= data.vertices.len()) {
            Some(format!("unknown vertex {x}"))
        } else if key.windows(2).any(|w| w[0] == w[1]) {
            Some("repeated vertex".to_string())
        } else if s.iter().any(|&x| bad_vertex[x]) {
            Some("uses an invalid vertex".to_string())
        } else {
            None
        };
        if let Some(reason) = reason {
            v.push(Violation::InvalidSimplex { simplex: si, reason });
            good.push(None);
            continue;
        }
        let pts: Vec<Point> = s.iter().map(|&x| data.vertices[x].clone()).collect();
        if !geometrically_independent(&pts).unwrap_or(false) {
            v.push(Violation::DependentVertices {
                simplex: si,
                vertices: s.clone(),
            });
            good.push(None);
            continue;
        }
        good.push(Some(key));
    }
    let listed: BTreeSet<Vec<usize>> = good.iter().flatten().cloned().collect();
    let mut seen = BTreeSet::new();
    for (si, key) in good.iter().enumerate() {
        let Some(key) = key else { continue };
        for f in subsequences(key) {
            if f.len() > 1 && f.len() < key.len() && !listed.contains(&f) && seen.insert(f.clone()) {
                v.push(Violation::MissingFace { simplex: si, face: f });
            }
        }
    }
    let mut q_keys: Vec<(usize, Vec<usize>)> = Vec::new();
    if let Some(q) = &data.q {
        for (qi, &idx) in q.iter().enumerate() {
            match good.get(idx) {
                Some(Some(k)) => q_keys.push((idx, k.clone())),
                Some(None) => {}
                None => v.push(Violation::InvalidQReference { q_index: qi, value: idx }),
            }
        }
    }
    let q_set: BTreeSet<Vec<usize>> = q_keys.iter().map(|(_, k)| k.clone()).collect();
    let mut seen = BTreeSet::new();
    for (idx, key) in &q_keys {
        for f in subsequences(key) {
            if f.len() > 1 && f.len() < key.len() && !q_set.contains(&f) && seen.insert(f.clone()) {
                v.push(Violation::QNotFaceClosed { simplex: *idx, face: f });
            }
        }
    }
    if report.has_fatal() {
        return report;
    }
    let keys: Vec<Vec<usize>> = listed.into_iter().collect();
    match SimplicialComplex::from_parts(data.vertices.clone(), &keys, None) {
        Ok(cx) => {
            let r = validate_complex(&cx);
            report.overlap_samples = r.overlap_samples;
            report.violations.extend(r.violations);
        }
        Err(e) => report.violations.push(Violation::InvalidSimplex {
            simplex: usize::MAX,
            reason: e.to_string(),
        }),
    }
    report
}

/// Sampled interior-overlap check on a built complex: points drawn in the
/// interior of every simplex must not lie in the interior of a different one.
pub fn validate_complex(cx: &SimplicialComplex) -> ValidationReport {
    let found = Exec::default().map_indexed(cx.len(), |id| overlap_for(cx, id));
    let mut seen = BTreeSet::new();
    let mut violations = Vec::new();
    for f in found.into_iter().flatten() {
        if let Violation::InteriorOverlap { first, second, .. } = &f {
            let key = if first < second {
                (first.clone(), second.clone())
            } else {
                (second.clone(), first.clone())
            };
            if seen.insert(key) {
                violations.push(f);
            }
        }
    }
    ValidationReport {
        violations,
        overlap_samples: cx.len() * (OVERLAP_SAMPLES + 1),
    }
}

fn overlap_for(cx: &SimplicialComplex, id: usize) -> Vec<Violation> {
    let s = &cx.simplices()[id];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ id as u64);
    let mut pts = vec![s.barycenter().to_vec()];
    if s.dim() > 0 {
        for _ in 0..OVERLAP_SAMPLES {
            pts.push(uniform_point(&mut rng, s.points()));
        }
    }
    let tol = cx.tol_membership();
    let mut out = Vec::new();
    for p in pts {
        for &m in cx.maximal() {
            let ms = &cx.simplices()[m];
            let (w, res) = ms.barycentric(&p);
            if res > tol || w.iter().any(|&b| b < -1e-12) {
                continue;
            }
            let support: Vec<f64> = w.iter().map(|&b| if b > OVERLAP_MARGIN { b } else { 0.0 }).collect();
            if w.iter().any(|&b| b > 1e-12 && b <= OVERLAP_MARGIN) {
                continue;
            }
            let carrier = cx.face_of_weights(m, &support);
            if carrier != id {
                out.push(Violation::InteriorOverlap {
                    first: s.vertex_ids().to_vec(),
                    second: cx.simplices()[carrier].vertex_ids().to_vec(),
                    witness: p.clone(),
                });
            }
        }
    }
    out
}
