//! The full recursion and the transport map `G`.

use complex_core::point::Point;
use complex_core::{Exec, SimplicialComplex};
use measure::{k_constants, select_z0, ConstantsBundle, SelectOptions};
use serde::Serialize;

use crate::error::{PushoutError, Result};
use crate::maps::g_map;
use crate::model::SetModel;
use crate::push::{detect_partial_and_rank, push, PushRecord, PushStats, RankVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// Override for the search-simplex scale `γ`.
    pub gamma: Option<f64>,
    /// Override for the face-bound constant; defaults to `φ(a, q, t_min)`.
    pub phi: Option<f64>,
    /// Apex draw budget per push.
    pub budget: Option<usize>,
    pub exec: Exec,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            gamma: None,
            phi: None,
            budget: None,
            exec: Exec::default(),
        }
    }
}

/// Ordered push records. `G = g_1 ∘ g_2 ∘ … ∘ g_m`, so evaluation applies
/// the most recent push first.
#[derive(Clone, Debug, Default)]
pub struct TransportMap {
    pub records: Vec<PushRecord>,
}

#[derive(Serialize)]
struct RecordView<'a> {
    sigma: usize,
    z0: &'a Point,
    cone_images: Vec<&'a Point>,
    rank_before: &'a RankVector,
    rank_after: &'a RankVector,
}

impl Serialize for TransportMap {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            records: Vec<RecordView<'a>>,
        }
        View {
            records: self
                .records
                .iter()
                .map(|r| RecordView {
                    sigma: r.sigma,
                    z0: &r.z0,
                    cone_images: r.cone.images.iter().map(|i| &i.image).collect(),
                    rank_before: &r.rank_before,
                    rank_after: &r.rank_after,
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl TransportMap {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunStats {
    pub a: f64,
    pub pushes: usize,
    /// Modeled `H^a(S ∩ |Q|)` before, at its largest, and after.
    pub initial_mass: f64,
    pub peak_mass: f64,
    pub final_mass: f64,
    pub per_push: Vec<PushStats>,
    pub constants: ConstantsBundle,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub set: SetModel,
    pub transport: TransportMap,
    pub stats: RunStats,
}

fn push_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Push until no partial simplex of `Q` remains, always taking a partial of
/// maximal dimension (lowest id first).
pub fn run(cx: &SimplicialComplex, s: &SetModel, opts: RunOptions) -> Result<RunOutput> {
    s.validate(cx)?;
    let constants = k_constants(cx, s.a)?;
    let mut cur = s.normalize(cx);
    let initial_mass = cur.mass(cx);
    let mut peak_mass = initial_mass;
    let mut records = Vec::new();
    let mut per_push = Vec::new();
    // Π (M_j + 1) bounds the number of distinct rank vectors.
    let mut limit: usize = 1;
    for d in 1..=cx.q_dim().unwrap_or(0) {
        let m = cx.q_ids().iter().filter(|&&i| cx.simplices()[i].dim() == d).count();
        limit = limit.saturating_mul(m + 1);
    }
    loop {
        let report = detect_partial_and_rank(cx, &cur);
        let Some(&sigma) = report.partials.first() else {
            break;
        };
        if records.len() >= limit {
            return Err(PushoutError::Internal(format!("more than {limit} pushes")));
        }
        let simplex = cx.simplex(sigma)?;
        let a_samples: Vec<(Point, f64)> = cur
            .samples_in(cx, sigma)
            .into_iter()
            .map(|i| (cur.samples[i].point.clone(), cur.samples[i].weight))
            .collect();
        let sel = select_z0(
            simplex,
            &a_samples,
            s.a,
            push_seed(opts.seed, records.len()),
            SelectOptions {
                gamma: opts.gamma,
                phi: opts.phi.or(constants.phi),
                budget: opts.budget,
                exec: opts.exec,
            },
        )?;
        let (next, mut record) = push(cx, &cur, sigma, &sel.z)?;
        record.stats.phi = sel.phi;
        record.stats.draws = sel.index + 1;
        record.stats.vacuous = sel.vacuous;
        per_push.push(record.stats.clone());
        records.push(record);
        cur = next;
        peak_mass = peak_mass.max(cur.mass(cx));
    }
    let final_mass = cur.mass(cx);
    Ok(RunOutput {
        set: cur,
        transport: TransportMap { records },
        stats: RunStats {
            a: s.a,
            pushes: per_push.len(),
            initial_mass,
            peak_mass,
            final_mass,
            per_push,
            constants,
        },
    })
}

/// `G(y)`, applying the recorded `g` maps from the last push to the first.
pub fn transport_eval(cx: &SimplicialComplex, g: &TransportMap, y: &[f64]) -> Result<Point> {
    let mut p = y.to_vec();
    for r in g.records.iter().rev() {
        p = g_map(cx, &r.cone, &p)?;
    }
    Ok(p)
}

/// [`transport_eval`] over many points.
pub fn transport_eval_batch(cx: &SimplicialComplex, g: &TransportMap, ys: &[Point], exec: Exec) -> Vec<Result<Point>> {
    exec.map(ys, |y| transport_eval(cx, g, y))
}
