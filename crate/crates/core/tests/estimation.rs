mod common;

use common::{grid_search, loglik_direct, mean_sd};
use pseudo_poisson::{
    bootstrap_se, mle_fit, mom_fit, sample_bivariate, sample_moments, score,
    zero_intercept_feasible, Method, ModelParams, Sample, Seed, SubmodelKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_tuples(s: &Sample) -> Vec<(u64, u64)> {
    s.iter().map(|p| (p.x1, p.x2)).collect()
}

#[test]
fn small_sample_matches_grid_search() {
    let s = Sample::from_pairs([(0, 1), (1, 2), (2, 3)]).unwrap();
    let f = mle_fit(&s, SubmodelKind::Full).unwrap();
    let (ll, l2, l3) = grid_search(&to_tuples(&s));
    assert!((f.loglik - ll).abs() < 1e-6);
    assert!((f.estimates.lambda2() - l2).abs() < 1e-4);
    assert!((f.estimates.lambda3() - l3).abs() < 1e-4);
    assert!((f.estimates.lambda2() + f.estimates.lambda3() - 2.0).abs() < 1e-12);
}

#[test]
fn full_mle_agrees_with_grid_oracle_on_small_samples() {
    let cases = [
        ((1.0, 3.0, 4.0), 30usize),
        ((2.0, 1.0, 0.5), 50),
        ((0.7, 0.5, 2.0), 40),
        ((3.0, 2.0, 0.2), 25),
        ((1.5, 0.0, 1.5), 50),
        ((1.0, 2.0, 0.0), 45),
        ((4.0, 0.3, 1.0), 20),
        ((0.5, 4.0, 3.0), 50),
        ((2.5, 2.5, 2.5), 35),
        ((1.2, 6.0, 0.8), 50),
    ];
    for (i, (p, n)) in cases.iter().enumerate() {
        let params = ModelParams::new(p.0, p.1, p.2).unwrap();
        let s = sample_bivariate(&params, *n, Seed(100 + i as u64)).unwrap();
        let f = match mle_fit(&s, SubmodelKind::Full) {
            Ok(f) => f,
            Err(e) => panic!("case {i}: {e}"),
        };
        let pairs = to_tuples(&s);
        let (ll, _, _) = grid_search(&pairs);
        let direct = loglik_direct(
            f.estimates.lambda1(),
            f.estimates.lambda2(),
            f.estimates.lambda3(),
            &pairs,
        );
        assert!((direct - f.loglik).abs() < 1e-9 * direct.abs());
        assert!(f.loglik >= ll - 1e-9, "case {i}: fit {} below grid {ll}", f.loglik);
        assert!((f.loglik - ll).abs() < 1e-6, "case {i}: {} vs {ll}", f.loglik);
    }
}

fn random_sample(rng: &mut ChaCha8Rng, seed: u64) -> Sample {
    let l1 = rng.random_range(0.2..6.0);
    let l2 = if rng.random_bool(0.15) { 0.0 } else { rng.random_range(0.0..8.0) };
    let l3 = if rng.random_bool(0.15) { 0.0 } else { rng.random_range(0.01..5.0) };
    let l2 = if l2 + l3 == 0.0 { 1.0 } else { l2 };
    let p = ModelParams::new(l1, l2, l3).unwrap();
    let n = rng.random_range(20..1500);
    sample_bivariate(&p, n, Seed(seed)).unwrap()
}

#[test]
fn stationarity_identity_and_score_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut interior = 0;
    let mut seed = 0;
    while checked < 100 {
        seed += 1;
        let s = random_sample(&mut rng, seed);
        let m = sample_moments(&s);
        let f = match mle_fit(&s, SubmodelKind::Full) {
            Ok(f) => f,
            Err(_) => continue,
        };
        checked += 1;
        let e = f.estimates;
        assert!((e.lambda2() + e.lambda3() * m.m1 - m.m2).abs() < 1e-8 * m.m2.max(1.0));
        let n = s.len() as f64;
        let g = score(&e, &s);
        assert!(g[0].abs() < 1e-8 * n);
        if f.boundary {
            // Karush-Kuhn-Tucker: the free coordinate is stationary and the
            // bound one points outward
            if e.lambda3() == 0.0 {
                assert!(g[1].abs() < 1e-8 * n && g[2] <= 1e-8 * n, "{g:?}");
            } else {
                assert_eq!(e.lambda2(), 0.0);
                assert!(g[2].abs() < 1e-8 * n && g[1] <= 1e-8 * n, "{g:?}");
            }
        } else {
            interior += 1;
            assert!(g[1].abs() < 1e-8 * n && g[2].abs() < 1e-8 * n, "seed {seed}: {g:?}");
        }
    }
    assert!(interior >= 50);
}

#[test]
fn submodel_mle_equals_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    let mut seed = 1000;
    while seen < 100 {
        seed += 1;
        let s = random_sample(&mut rng, seed);
        if sample_moments(&s).m1 == 0.0 || sample_moments(&s).m2 == 0.0 {
            continue;
        }
        seen += 1;
        for kind in [SubmodelKind::EqualRates, SubmodelKind::Independence] {
            let a = mle_fit(&s, kind).unwrap();
            let b = mom_fit(&s, kind).unwrap();
            assert_eq!(a.estimates, b.estimates);
            assert_eq!(a.loglik, b.loglik);
        }
        if zero_intercept_feasible(&s) {
            let a = mle_fit(&s, SubmodelKind::ZeroIntercept).unwrap();
            let b = mom_fit(&s, SubmodelKind::ZeroIntercept).unwrap();
            assert_eq!(a.estimates, b.estimates);
        }
    }
}

#[test]
fn zero_intercept_samples_coincide() {
    // feasible by construction
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..100u64 {
        let l1 = rng.random_range(0.5..5.0);
        let l3 = rng.random_range(0.1..5.0);
        let p = ModelParams::zero_intercept(l1, l3).unwrap();
        let s = sample_bivariate(&p, 200, Seed(seed)).unwrap();
        let a = mle_fit(&s, SubmodelKind::ZeroIntercept).unwrap();
        let b = mom_fit(&s, SubmodelKind::ZeroIntercept).unwrap();
        assert_eq!(a.estimates, b.estimates);
    }
}

#[test]
fn full_mle_dominates_other_fits() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seed = 5000;
    let mut seen = 0;
    while seen < 100 {
        seed += 1;
        let s = random_sample(&mut rng, seed);
        let Ok(full) = mle_fit(&s, SubmodelKind::Full) else { continue };
        seen += 1;
        let mom = mom_fit(&s, SubmodelKind::Full).unwrap();
        assert!(full.loglik >= mom.loglik - 1e-9);
        for kind in [SubmodelKind::EqualRates, SubmodelKind::ZeroIntercept, SubmodelKind::Independence] {
            if let Ok(sub) = mle_fit(&s, kind) {
                assert!(full.loglik >= sub.loglik - 1e-9 * full.loglik.abs(), "{kind}");
            }
        }
    }
}

#[test]
fn errors_shrink_with_sample_size() {
    let truth = ModelParams::new(1.0, 3.0, 4.0).unwrap();
    let t = truth.as_array();
    let mut prev = [f64::INFINITY; 2];
    for (k, &n) in [50usize, 100, 500, 1000].iter().enumerate() {
        let mut mae = [0.0f64; 2];
        for r in 0..200u64 {
            let s = pseudo_poisson::sampler::sample_bivariate_with(
                &truth,
                n,
                &mut Seed(31 + k as u64).stream(r),
            )
            .unwrap();
            for (slot, method) in [Method::Moment, Method::Mle].iter().enumerate() {
                if let Ok(f) = pseudo_poisson::fit(&s, SubmodelKind::Full, *method) {
                    let e = f.estimates.as_array();
                    mae[slot] += (0..3).map(|i| (e[i] - t[i]).abs()).sum::<f64>() / 600.0;
                }
            }
        }
        assert!(mae[0] < prev[0] && mae[1] < prev[1], "n={n}: {mae:?} vs {prev:?}");
        prev = mae;
    }
}

#[test]
fn bootstrap_standard_errors_at_n_1000() {
    let truth = ModelParams::new(1.0, 3.0, 4.0).unwrap();
    let s = sample_bivariate(&truth, 1000, Seed(2718)).unwrap();
    let mom = bootstrap_se(&s, SubmodelKind::Full, Method::Moment, 500, Seed(1)).unwrap();
    let mle = bootstrap_se(&s, SubmodelKind::Full, Method::Mle, 500, Seed(1)).unwrap();
    assert_eq!(mom.failed, 0);
    assert!((mom.se[1] / 0.206 - 1.0).abs() < 0.25, "{:?}", mom.se);
    assert!((mom.se[0] / 0.032 - 1.0).abs() < 0.25, "{:?}", mom.se);
    assert!(mle.se[1] <= mom.se[1] && mle.se[2] <= mom.se[2], "{:?} {:?}", mle.se, mom.se);
    // lambda1 has the same estimator under both methods
    assert_eq!(mom.se[0], mle.se[0]);
}

#[test]
fn moment_estimator_spread_matches_replicate_spread() {
    // bootstrap SE from one sample versus Monte Carlo spread over replicates
    let truth = ModelParams::new(1.0, 3.0, 4.0).unwrap();
    let mut l3 = Vec::new();
    for r in 0..300u64 {
        let s = pseudo_poisson::sampler::sample_bivariate_with(&truth, 500, &mut Seed(77).stream(r))
            .unwrap();
        l3.push(mom_fit(&s, SubmodelKind::Full).unwrap().estimates.lambda3());
    }
    let (_, sd) = mean_sd(&l3);
    let s = sample_bivariate(&truth, 500, Seed(78)).unwrap();
    let bs = bootstrap_se(&s, SubmodelKind::Full, Method::Moment, 300, Seed(2)).unwrap();
    assert!((bs.se[2] / sd - 1.0).abs() < 0.35, "{} vs {sd}", bs.se[2]);
}
