//! The finite model of a closed set: weighted interior samples plus flags
//! for simplices whose interior lies entirely in the set.

use std::collections::BTreeSet;

use complex_core::point::{is_finite, Point};
use complex_core::SimplicialComplex;
use serde::{Deserialize, Serialize};

use crate::error::{PushoutError, Result};

/// A point of the set, strictly interior to its carrier simplex, carrying
/// `weight` units of `H^a` mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub point: Point,
    pub carrier: usize,
    pub weight: f64,
}

/// Sample as read from JSON; a missing carrier is located.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleData {
    pub point: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<usize>,
    #[serde(default = "unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

/// Serialized form of a [`SetModel`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SetModelData {
    pub a: f64,
    #[serde(default)]
    pub samples: Vec<SampleData>,
    #[serde(default)]
    pub full: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetModel {
    /// Target dimension `a ≥ 0`.
    pub a: f64,
    pub samples: Vec<Sample>,
    /// Simplices `ρ` with `Int ρ ⊂ S`; closed under taking faces.
    pub full: BTreeSet<usize>,
}

impl SetModel {
    pub fn empty(a: f64) -> Self {
        SetModel {
            a,
            samples: Vec::new(),
            full: BTreeSet::new(),
        }
    }

    /// Load and check against `cx`; flags are closed under faces.
    pub fn from_data(cx: &SimplicialComplex, data: &SetModelData) -> Result<Self> {
        let mut samples = Vec::with_capacity(data.samples.len());
        for (index, s) in data.samples.iter().enumerate() {
            let bad = |reason: String| PushoutError::InvalidSample { index, reason };
            if s.point.len() != cx.ambient_dim() || !is_finite(&s.point) {
                return Err(bad(format!("point {:?} is not a finite point of R^{}", s.point, cx.ambient_dim())));
            }
            let carrier = match s.carrier {
                Some(c) => c,
                None => cx.locate(&s.point).map_err(|e| bad(e.to_string()))?.carrier,
            };
            samples.push(Sample {
                point: s.point.clone(),
                carrier,
                weight: s.weight,
            });
        }
        for &f in &data.full {
            if f >= cx.len() {
                return Err(PushoutError::InvalidInput(format!("full simplex {f} does not exist")));
            }
        }
        let full = data.full.iter().flat_map(|&f| cx.faces(f)).collect();
        let out = SetModel {
            a: data.a,
            samples,
            full,
        };
        out.validate(cx)?;
        Ok(out)
    }

    pub fn to_data(&self) -> SetModelData {
        SetModelData {
            a: self.a,
            samples: self
                .samples
                .iter()
                .map(|s| SampleData {
                    point: s.point.clone(),
                    carrier: Some(s.carrier),
                    weight: s.weight,
                })
                .collect(),
            full: self.full.iter().copied().collect(),
        }
    }

    /// Check every invariant against `cx`.
    pub fn validate(&self, cx: &SimplicialComplex) -> Result<()> {
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(PushoutError::InvalidInput(format!("a must be ≥ 0, got {}", self.a)));
        }
        for (index, s) in self.samples.iter().enumerate() {
            let bad = |reason: String| PushoutError::InvalidSample { index, reason };
            if s.carrier >= cx.len() {
                return Err(bad(format!("unknown carrier {}", s.carrier)));
            }
            if !(s.weight >= 0.0 && s.weight.is_finite()) {
                return Err(bad(format!("weight {} is not finite and ≥ 0", s.weight)));
            }
            if s.point.len() != cx.ambient_dim() || !cx.is_interior(s.carrier, &s.point) {
                return Err(bad(format!(
                    "point {:?} is not interior to carrier {}",
                    s.point, s.carrier
                )));
            }
        }
        for &f in &self.full {
            if f >= cx.len() {
                return Err(PushoutError::InvalidInput(format!("full simplex {f} does not exist")));
            }
            if let Some(g) = cx.faces(f).into_iter().find(|g| !self.full.contains(g)) {
                return Err(PushoutError::InvalidInput(format!(
                    "full simplex {f} has an unflagged face {g}"
                )));
            }
        }
        Ok(())
    }

    /// Canonical form: flags face-closed, samples at vertices turned into
    /// vertex flags, samples inside flagged simplices dropped.
    pub fn normalize(&self, cx: &SimplicialComplex) -> SetModel {
        let mut full: BTreeSet<usize> = self.full.iter().flat_map(|&f| cx.faces(f)).collect();
        for s in &self.samples {
            if cx.simplices()[s.carrier].dim() == 0 {
                full.insert(s.carrier);
            }
        }
        let samples = self
            .samples
            .iter()
            .filter(|s| !full.contains(&s.carrier))
            .cloned()
            .collect();
        SetModel {
            a: self.a,
            samples,
            full,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty() && self.full.is_empty()
    }

    /// Modeled `H^a(S ∩ |Q|)`: sample weights in `Q` plus the volume of
    /// flagged `a`-simplices of `Q`; infinite if a flag of `Q` has dimension
    /// above `a`. Flags below dimension `a` are `H^a`-null.
    pub fn mass(&self, cx: &SimplicialComplex) -> f64 {
        let mut m: f64 = self
            .samples
            .iter()
            .filter(|s| cx.in_q(s.carrier))
            .map(|s| s.weight)
            .sum();
        for &f in &self.full {
            if !cx.in_q(f) {
                continue;
            }
            let d = cx.simplices()[f].dim() as f64;
            if d > self.a {
                return f64::INFINITY;
            }
            if d == self.a {
                m += cx.simplices()[f].volume();
            }
        }
        m
    }

    /// Samples whose carrier is a face of `sigma` (including `sigma`).
    pub fn samples_in(&self, cx: &SimplicialComplex, sigma: usize) -> Vec<usize> {
        (0..self.samples.len())
            .filter(|&i| cx.is_face(self.samples[i].carrier, sigma))
            .collect()
    }
}
