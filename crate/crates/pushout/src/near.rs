//! Approximation within `ε`: refine, restrict `Q` to the simplices meeting
//! `S`, and run the recursion there.

use std::collections::BTreeSet;

use complex_core::{subdivide, SimplicialComplex};
use serde::Serialize;

use crate::error::{PushoutError, Result};
use crate::model::{Sample, SetModel};
use crate::run::{run, RunOptions, RunOutput};

#[derive(Clone, Debug)]
pub struct NearOutput {
    /// `P′` with `Q′` designated.
    pub complex: SimplicialComplex,
    /// `S` expressed on `P′`.
    pub input: SetModel,
    pub rounds: usize,
    pub output: RunOutput,
}

#[derive(Clone, Debug, Serialize)]
pub struct NearSummary {
    pub epsilon: f64,
    pub rounds: usize,
    pub simplices: usize,
    pub q_simplices: usize,
}

impl NearOutput {
    pub fn summary(&self, epsilon: f64) -> NearSummary {
        NearSummary {
            epsilon,
            rounds: self.rounds,
            simplices: self.complex.len(),
            q_simplices: self.complex.q_ids().len(),
        }
    }
}

/// Refine `cx` until every simplex has diameter `< ε/2`, carry `S` over,
/// take `Q′` to be the simplices meeting `S` (with their faces), and run.
/// An empty `S` is returned unchanged with no refinement.
pub fn approximate_near(cx: &SimplicialComplex, s: &SetModel, epsilon: f64, opts: RunOptions) -> Result<NearOutput> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(PushoutError::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    s.validate(cx)?;
    if s.is_empty() {
        let output = run(cx, s, opts)?;
        return Ok(NearOutput {
            complex: cx.clone(),
            input: s.clone(),
            rounds: 0,
            output,
        });
    }
    let sub = subdivide(cx, epsilon / 2.0)?;
    let fine = &sub.complex;
    let mut samples = Vec::with_capacity(s.samples.len());
    for x in &s.samples {
        samples.push(Sample {
            point: x.point.clone(),
            carrier: fine.locate(&x.point)?.carrier,
            weight: x.weight,
        });
    }
    let full: BTreeSet<usize> = (0..fine.len())
        .filter(|&i| s.full.contains(&sub.parent[i]))
        .collect();
    // Vertices of P′ lying in a flagged simplex.
    let flagged_vertices: BTreeSet<usize> = full
        .iter()
        .filter(|&&i| fine.simplices()[i].dim() == 0)
        .map(|&i| fine.simplices()[i].vertex_ids()[0])
        .collect();
    let mut q: BTreeSet<usize> = BTreeSet::new();
    for i in 0..fine.len() {
        let verts = fine.simplices()[i].vertex_ids();
        let meets_flag = verts.iter().any(|v| flagged_vertices.contains(v));
        let meets_sample = samples.iter().any(|x| fine.is_face(x.carrier, i));
        if meets_flag || meets_sample {
            q.extend(fine.faces(i));
        }
    }
    let q: Vec<usize> = q.into_iter().collect();
    let complex = fine.with_q(&q)?;
    let input = SetModel {
        a: s.a,
        samples,
        full,
    };
    let output = run(&complex, &input, opts)?;
    Ok(NearOutput {
        complex,
        input,
        rounds: sub.rounds,
        output,
    })
}
