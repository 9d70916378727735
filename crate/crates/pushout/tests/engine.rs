mod common;

use std::collections::BTreeSet;

use approx::assert_relative_eq;
use common::{corpus, grid2, interior_point, rng, triangle};
use complex_core::point::{dist, lerp, Point};
use complex_core::simplex::dist_to_hull;
use complex_core::{Exec, SimplicialComplex};
use proptest::prelude::*;
use pushout::{
    approximate_near, detect_partial_and_rank, g_map, push, retract_chain, run, transport_eval, transport_eval_batch,
    ConeModel, PushoutError, RankVector, RunOptions, Sample, SetModel,
};
use rand::Rng;

fn sample(cx: &SimplicialComplex, p: Point) -> Sample {
    let carrier = cx.locate(&p).unwrap().carrier;
    Sample { point: p, carrier, weight: 1.0 }
}

fn one_sample(cx: &SimplicialComplex, p: Point, a: f64) -> SetModel {
    SetModel {
        a,
        samples: vec![sample(cx, p)],
        full: BTreeSet::new(),
    }
}

/// Distance from `p` to the set modeled by `s`.
fn dist_to_set(cx: &SimplicialComplex, s: &SetModel, p: &[f64]) -> f64 {
    let d = s.samples.iter().map(|x| dist(&x.point, p)).fold(f64::INFINITY, f64::min);
    s.full
        .iter()
        .map(|&f| dist_to_hull(cx.simplices()[f].points(), p))
        .fold(d, f64::min)
}

#[test]
fn rank_of_simple_sets() {
    let cx = triangle();
    let empty = SetModel::empty(1.0);
    assert_eq!(detect_partial_and_rank(&cx, &empty).rank, RankVector(vec![0, 0]));
    let s = one_sample(&cx, vec![0.2, 0.2], 1.0);
    let rep = detect_partial_and_rank(&cx, &s);
    assert_eq!(rep.rank, RankVector(vec![1, 0]));
    assert_eq!(rep.partials, vec![cx.id_of(&[0, 1, 2]).unwrap()]);
    let mut full = s.clone();
    full.full = cx.faces(cx.id_of(&[0, 1, 2]).unwrap()).into_iter().collect();
    let rep = detect_partial_and_rank(&cx, &full.normalize(&cx));
    assert!(rep.partials.is_empty());
}

#[test]
fn rank_order_is_lexicographic() {
    assert!(RankVector(vec![0, 5, 9]) < RankVector(vec![1, 0, 0]));
    assert!(RankVector(vec![1, 0, 3]) < RankVector(vec![1, 1, 0]));
}

#[test]
fn push_single_triangle() {
    let cx = triangle();
    let sigma = cx.id_of(&[0, 1, 2]).unwrap();
    let s = one_sample(&cx, vec![0.25, 0.1], 1.0);
    let (out, rec) = push(&cx, &s, sigma, &[0.25, 0.25]).unwrap();
    assert_eq!(out.samples.len(), 1);
    let x = &out.samples[0];
    assert_relative_eq!(x.point[0], 0.25, epsilon = 1e-12);
    assert_relative_eq!(x.point[1], 0.0, epsilon = 1e-12);
    assert_eq!(x.carrier, cx.id_of(&[0, 1]).unwrap());
    assert_eq!(rec.rank_before, RankVector(vec![1, 0]));
    assert_eq!(rec.rank_after, RankVector(vec![0, 1]));
    assert!(rec.rank_after < rec.rank_before);
    // Straight below the apex the stretch is z_n / (z_n − y_n) = 5/3.
    assert_relative_eq!(x.weight, 5.0 / 3.0, max_relative = 1e-9);
    assert!(rec.stats.empirical <= rec.stats.bound * 3.0);
}

#[test]
fn push_rejects_non_partial_and_low_dimensional_targets() {
    let cx = triangle();
    let sigma = cx.id_of(&[0, 1, 2]).unwrap();
    let edge = cx.id_of(&[0, 1]).unwrap();
    let empty = SetModel::empty(1.0);
    assert!(matches!(push(&cx, &empty, sigma, &[0.25, 0.25]), Err(PushoutError::Precondition(_))));
    let mut s = one_sample(&cx, vec![0.2, 0.2], 1.0);
    s.samples.push(sample(&cx, vec![0.5, 0.0]));
    assert!(matches!(push(&cx, &s, edge, &[0.4, 0.0]), Err(PushoutError::Precondition(_))));
}

#[test]
fn push_leaves_far_samples_alone() {
    let cx = grid2(3, 0.0, 0);
    // σ is the lower-left triangle; the far samples sit in the upper-right square.
    let sigma = cx.id_of(&[0, 4, 5]).unwrap();
    let mut s = one_sample(&cx, vec![0.6, 0.2], 1.0);
    let far = [vec![2.6, 2.3], vec![2.2, 2.7], vec![2.5, 2.5]];
    for p in &far {
        s.samples.push(sample(&cx, p.clone()));
    }
    let z = cx.simplices()[sigma].barycenter().to_vec();
    let (out, _) = push(&cx, &s, sigma, &z).unwrap();
    for p in &far {
        assert!(out.samples.iter().any(|x| &x.point == p));
    }
}

#[test]
fn push_keeps_samples_that_touch_only_the_closed_star_boundary() {
    let base = grid2(2, 0.0, 0);
    // σ is the edge from (1, 1) to (1, 2) and Q is its closure; the other
    // samples sit in triangles that share a vertex with σ but do not contain it.
    let sigma = base.id_of(&[4, 5]).unwrap();
    let cx = base.with_q(&base.faces(sigma)).unwrap();
    let mut s = one_sample(&cx, vec![1.0, 1.5], 1.0);
    let link_pts = [vec![0.2, 0.1], vec![1.8, 0.3]];
    for p in &link_pts {
        s.samples.push(sample(&cx, p.clone()));
    }
    let z = vec![1.0, 1.7];
    let (out, _) = push(&cx, &s, sigma, &z).unwrap();
    for p in &link_pts {
        assert!(out.samples.iter().any(|x| &x.point == p));
    }
}

#[test]
fn run_on_empty_and_flag_only_sets() {
    let cx = triangle();
    let out = run(&cx, &SetModel::empty(1.0), RunOptions::default()).unwrap();
    assert_eq!(out.stats.pushes, 0);
    assert!(out.set.is_empty());
    let mut flags = SetModel::empty(1.0);
    flags.full = cx.faces(cx.id_of(&[0, 1]).unwrap()).into_iter().collect();
    let out = run(&cx, &flags, RunOptions::default()).unwrap();
    assert_eq!(out.stats.pushes, 0);
    assert_eq!(out.set.full, flags.full);
    assert_relative_eq!(out.stats.final_mass, 1.0);
}

#[test]
fn run_single_triangle_ends_at_a_vertex() {
    let cx = triangle();
    let s = one_sample(&cx, vec![0.3, 0.2], 1.0);
    let out = run(&cx, &s, RunOptions::default()).unwrap();
    assert!((1..=2).contains(&out.stats.pushes));
    assert!(out.set.samples.is_empty());
    assert_eq!(out.set.full.len(), 1);
    let v = *out.set.full.iter().next().unwrap();
    assert_eq!(cx.simplices()[v].dim(), 0);
    assert_eq!(out.stats.final_mass, 0.0);
}

#[test]
fn transport_collapses_the_cone_onto_the_apex() {
    let cx = triangle();
    let sigma = cx.id_of(&[0, 1, 2]).unwrap();
    let s = SetModel {
        a: 1.0,
        samples: vec![sample(&cx, vec![0.5, 0.4]), sample(&cx, vec![0.45, 0.45])],
        full: cx.faces(cx.id_of(&[1, 2]).unwrap()).into_iter().collect(),
    };
    let out = run(&cx, &s, RunOptions::default()).unwrap();
    assert_eq!(out.stats.pushes, 1);
    let rec = &out.transport.records[0];
    assert_eq!(rec.sigma, sigma);
    let z = &rec.z0;
    for x in &s.samples {
        let y = lerp(z, &x.point, 0.5);
        assert!(dist(&transport_eval(&cx, &out.transport, &y).unwrap(), z) < 1e-12);
    }
}

#[test]
fn corpus_runs_satisfy_structural_invariants() {
    for (k, (cx, s)) in corpus(12, 1.0, 100).into_iter().enumerate() {
        let out = run(&cx, &s, RunOptions { seed: k as u64, ..Default::default() }).unwrap();
        // Only flags of dimension ≤ ⌊a⌋ remain in Q, and they are face-closed.
        assert!(out.set.samples.iter().all(|x| !cx.in_q(x.carrier)));
        for &f in &out.set.full {
            assert!(cx.simplices()[f].dim() as f64 <= s.a.floor() || !cx.in_q(f));
            assert!(cx.faces(f).iter().all(|g| out.set.full.contains(g)));
        }
        // Rank drops at every push; no simplex is pushed twice.
        let mut seen = BTreeSet::new();
        for r in &out.transport.records {
            assert!(r.rank_after < r.rank_before);
            assert!(seen.insert(r.sigma));
        }
        let q_pos = cx.q_ids().iter().filter(|&&i| cx.simplices()[i].dim() >= 1).count();
        assert!(out.stats.pushes <= q_pos);
        // Output samples and flag vertices stay near S.
        let tol = cx.max_diameter() + cx.tol_membership();
        for x in &out.set.samples {
            assert!(dist_to_set(&cx, &s, &x.point) <= tol);
        }
        for &f in &out.set.full {
            for v in cx.simplices()[f].points() {
                assert!(dist_to_set(&cx, &s, v) <= tol);
            }
        }
    }
}

#[test]
fn transport_is_identity_off_the_pushed_stars() {
    let mut r = rng(7);
    for (k, (cx, s)) in corpus(9, 1.0, 200).into_iter().enumerate() {
        let out = run(&cx, &s, RunOptions { seed: k as u64, ..Default::default() }).unwrap();
        let pushed: Vec<usize> = out.transport.records.iter().map(|r| r.sigma).collect();
        let untouched: Vec<usize> = (0..cx.len())
            .filter(|&t| {
                cx.simplices()[t].dim() >= 1 && !pushed.iter().any(|&p| cx.is_face(p, t) || cx.is_face(t, p))
            })
            .collect();
        for _ in 0..50 {
            let Some(&t) = untouched.get(r.random_range(0..untouched.len().max(1))) else {
                break;
            };
            let y = interior_point(&cx, t, &mut r, 0.01);
            assert_eq!(transport_eval(&cx, &out.transport, &y).unwrap(), y);
        }
    }
}

#[test]
fn point_count_never_grows_for_a_zero() {
    for (k, (cx, s)) in corpus(9, 0.0, 300).into_iter().enumerate() {
        let count = |m: &SetModel| m.samples.len() + m.full.len();
        let mut cur = s.normalize(&cx);
        let out = run(&cx, &s, RunOptions { seed: k as u64, ..Default::default() }).unwrap();
        for r in &out.transport.records {
            let (next, _) = push(&cx, &cur, r.sigma, &r.z0).unwrap();
            assert!(count(&next) <= count(&cur));
            cur = next;
        }
    }
}

#[test]
fn runs_are_deterministic_across_execution_policies() {
    for (cx, s) in corpus(4, 1.0, 400) {
        let seq = run(&cx, &s, RunOptions { seed: 9, exec: Exec::Sequential, ..Default::default() }).unwrap();
        let par = run(&cx, &s, RunOptions { seed: 9, exec: Exec::Parallel, ..Default::default() }).unwrap();
        assert_eq!(seq.set, par.set);
        assert_eq!(seq.stats, par.stats);
        let ys: Vec<Point> = s.samples.iter().map(|x| x.point.clone()).collect();
        let a = transport_eval_batch(&cx, &seq.transport, &ys, Exec::Sequential);
        let b = transport_eval_batch(&cx, &seq.transport, &ys, Exec::Parallel);
        assert_eq!(a, b);
    }
}

#[test]
fn magnification_stays_within_the_face_bound() {
    for (k, (cx, s)) in corpus(9, 1.0, 500).into_iter().enumerate() {
        let out = run(&cx, &s, RunOptions { seed: k as u64, ..Default::default() }).unwrap();
        for p in &out.stats.per_push {
            if let Some(phi) = p.phi {
                assert!(p.empirical <= (p.dim as f64 + 1.0) * phi * p.interior_weight * (1.0 + 1e-9));
            }
        }
    }
}

#[test]
fn g_is_locally_lipschitz_away_from_the_cone() {
    let mut r = rng(8);
    let cx = triangle();
    let sigma = cx.id_of(&[0, 1, 2]).unwrap();
    let z = vec![0.3, 0.3];
    let cone = ConeModel::build(&cx, sigma, z, &[(None, vec![0.3, 0.1])], &[]).unwrap();
    let centre = [0.15, 0.5];
    let quotient = |radius: f64, r: &mut rand_chacha::ChaCha8Rng| {
        let mut best: f64 = 0.0;
        for _ in 0..400 {
            let p: Point = centre.iter().map(|c| c + r.random_range(-radius..radius)).collect();
            let q: Point = centre.iter().map(|c| c + r.random_range(-radius..radius)).collect();
            let d = dist(&p, &q);
            if d > 0.0 {
                best = best.max(dist(&g_map(&cx, &cone, &p).unwrap(), &g_map(&cx, &cone, &q).unwrap()) / d);
            }
        }
        best
    };
    let big = quotient(0.04, &mut r);
    let small = quotient(0.02, &mut r);
    assert!(big.is_finite() && big < 1e3);
    assert!(small <= 2.0 * big);
}

#[test]
fn near_on_empty_set_is_unchanged() {
    let cx = triangle();
    let out = approximate_near(&cx, &SetModel::empty(1.0), 0.1, RunOptions::default()).unwrap();
    assert_eq!(out.rounds, 0);
    assert_eq!(out.output.stats.pushes, 0);
    assert!(approximate_near(&cx, &SetModel::empty(1.0), 0.0, RunOptions::default()).is_err());
}

#[test]
fn near_moves_little_and_fixes_far_points() {
    let mut r = rng(9);
    let base = grid2(2, 0.15, 4);
    let cx = base.with_q(&(0..base.len()).collect::<Vec<_>>()).unwrap();
    let s = SetModel {
        a: 1.0,
        samples: (0..12).map(|_| sample(&cx, interior_point(&cx, cx.maximal()[0], &mut r, 0.05))).collect(),
        full: BTreeSet::new(),
    };
    let eps = 0.1 * 2f64.sqrt() * 2.0;
    let out = approximate_near(&cx, &s, eps, RunOptions::default()).unwrap();
    let fine = &out.complex;
    for x in &out.output.set.samples {
        assert!(dist_to_set(&cx, &s, &x.point) < eps);
    }
    for &f in &out.output.set.full {
        for v in fine.simplices()[f].points() {
            assert!(dist_to_set(&cx, &s, v) < eps);
        }
    }
    let mut tested = 0;
    while tested < 200 {
        let y: Point = vec![r.random_range(0.0..2.0), r.random_range(0.0..2.0)];
        if dist_to_set(&cx, &s, &y) < eps {
            continue;
        }
        assert_eq!(transport_eval(fine, &out.output.transport, &y).unwrap(), y);
        tested += 1;
    }
}

#[test]
fn retraction_chain_properties() {
    for (k, (cx, s)) in corpus(6, 1.0, 600).into_iter().enumerate() {
        let out = run(&cx, &s, RunOptions { seed: k as u64, ..Default::default() }).unwrap();
        let chain = retract_chain(&cx, &out.transport, &s).unwrap();
        assert_eq!(chain.len(), out.transport.len());
        for i in 0..chain.len() {
            for y in chain.e_samples(i).unwrap() {
                assert!(chain.contains(i, &y).unwrap());
                assert_eq!(chain.f(i, &y, 0.0).unwrap(), y);
                let end = chain.f(i, &y, 1.0).unwrap();
                assert!(chain.contains(i + 1, &end).unwrap(), "F({i}, {y:?}, 1) = {end:?} left E_{}", i + 1);
            }
            for y in chain.e_samples(i + 1).unwrap() {
                for t in [0.0, 0.3, 1.0] {
                    assert_eq!(chain.f(i, &y, t).unwrap(), y);
                }
            }
        }
    }
}

#[test]
fn set_model_round_trips_through_json() {
    let (cx, s) = corpus(1, 1.0, 700).pop().unwrap();
    let data = s.to_data();
    let text = serde_json::to_string(&data).unwrap();
    let back = SetModel::from_data(&cx, &serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.normalize(&cx), s.normalize(&cx));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_push_lowers_the_rank(seed in 0u64..10_000, a in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0])) {
        let (cx, s) = corpus(1, a, seed).pop().unwrap();
        let out = run(&cx, &s, RunOptions { seed, ..Default::default() }).unwrap();
        for r in &out.transport.records {
            prop_assert!(r.rank_after < r.rank_before);
        }
        prop_assert!(out.set.samples.iter().all(|x| !cx.in_q(x.carrier)));
    }
}
