use pseudo_poisson::sampler::sample_bivariate_with;
use pseudo_poisson::{
    aic, compare_models, mirror, sample_bivariate, CardName, ModelParams, Sample, Seed,
    SubmodelKind,
};
use rayon::prelude::*;

#[test]
fn aic_from_reported_deviances() {
    assert_eq!(aic(-32766.08 / 2.0, 3).unwrap(), 32772.08);
    assert_eq!(aic(-33077.09 / 2.0, 2).unwrap(), 33081.09);
}

#[test]
fn mirror_duality() {
    for (i, p) in [(1.0, 3.0, 4.0), (2.0, 0.0, 1.5), (3.0, 1.0, 0.3)].iter().enumerate() {
        let s = sample_bivariate(&ModelParams::new(p.0, p.1, p.2).unwrap(), 400, Seed(i as u64)).unwrap();
        let a = compare_models(&s).unwrap();
        let b = compare_models(&mirror(&s)).unwrap();
        for name in CardName::TABLE {
            let (x, y) = (a.card(name), b.card(name.counterpart()));
            assert_eq!(x.feasible, y.feasible);
            if let (Some(u), Some(v)) = (x.aic, y.aic) {
                assert!((u - v).abs() < 1e-9 * u.abs().max(1.0), "{name}: {u} vs {v}");
            }
        }
        assert_eq!(a.best.counterpart(), b.best);
    }
}

#[test]
fn nesting_of_card_likelihoods() {
    for seed in 0..30u64 {
        let p = ModelParams::new(1.0 + seed as f64 * 0.1, (seed % 4) as f64, 0.5 + (seed % 3) as f64).unwrap();
        let s = sample_bivariate(&p, 200, Seed(seed)).unwrap();
        let r = compare_models(&s).unwrap();
        for (full, subs) in [
            (CardName::Fm, [CardName::SmI, CardName::SmII]),
            (CardName::Mfm, [CardName::MsmI, CardName::MsmII]),
        ] {
            let f = r.card(full);
            let Some(ff) = &f.fit else { continue };
            for sub in subs {
                if let Some(sf) = &r.card(sub).fit {
                    assert!(ff.loglik >= sf.loglik - 1e-9 * ff.loglik.abs());
                    assert!(f.aic.unwrap() <= r.card(sub).aic.unwrap() + 2.0 + 1e-9);
                }
            }
        }
        let best = r.card(r.best).aic.unwrap();
        assert!(r.cards.iter().filter_map(|c| c.aic).all(|a| a >= best));
    }
}

#[test]
fn independence_degeneracy() {
    // with lambda3 = 0 and a nonpositive sample covariance both full fits
    // collapse to independent Poisson margins
    let mut found = 0;
    for seed in 0..200u64 {
        let s = sample_bivariate(&ModelParams::new(2.0, 3.0, 0.0).unwrap(), 300, Seed(seed)).unwrap();
        let m = pseudo_poisson::sample_moments(&s);
        if m.s12 > 0.0 {
            continue;
        }
        found += 1;
        let r = compare_models(&s).unwrap();
        let (fm, mfm) = (r.card(CardName::Fm), r.card(CardName::Mfm));
        assert_eq!(fm.fit.as_ref().unwrap().estimates.lambda3(), 0.0);
        assert_eq!(mfm.fit.as_ref().unwrap().estimates.lambda3(), 0.0);
        assert!((fm.aic.unwrap() - mfm.aic.unwrap()).abs() < 1e-6);
        let ind = r.independence.aic.unwrap();
        assert!((fm.aic.unwrap() - 2.0 - ind).abs() < 1e-6);
        if found == 10 {
            break;
        }
    }
    assert_eq!(found, 10);

    // with dependence the two orderings differ
    let s = sample_bivariate(&ModelParams::new(1.0, 3.0, 4.0).unwrap(), 1000, Seed(1)).unwrap();
    let r = compare_models(&s).unwrap();
    assert!((r.card(CardName::Fm).aic.unwrap() - r.card(CardName::Mfm).aic.unwrap()).abs() > 1.0);
}

#[test]
fn zero_row_blocks_zero_intercept_card() {
    let mut pairs: Vec<(u64, u64)> = sample_bivariate(&ModelParams::zero_intercept(2.0, 1.0).unwrap(), 100, Seed(9))
        .unwrap()
        .iter()
        .map(|p| (p.x1, p.x2))
        .collect();
    pairs.push((0, 5));
    let r = compare_models(&Sample::from_pairs(pairs).unwrap()).unwrap();
    let c = r.card(CardName::SmII);
    assert!(!c.feasible && c.fit.is_none() && c.aic.is_none());
    assert!(c.reason.is_some());
    assert_ne!(r.best, CardName::SmII);
    let line = r.to_table().lines().find(|l| l.starts_with("BPP SM-II")).unwrap().to_string();
    assert!(line.contains("----"));
}

fn recovery(truth: ModelParams, swap: bool, target: CardName, seed: u64) -> usize {
    (0..20u64)
        .into_par_iter()
        .filter(|&r| {
            let s = sample_bivariate_with(&truth, 5000, &mut Seed(seed).stream(r)).unwrap();
            let s = if swap { mirror(&s) } else { s };
            compare_models(&s).unwrap().best == target
        })
        .count()
}

#[test]
fn recovers_full_model() {
    let hits = recovery(ModelParams::new(1.0, 3.0, 4.0).unwrap(), false, CardName::Fm, 40);
    assert!(hits >= 18, "{hits}/20");
}

#[test]
fn recovers_mirrored_zero_intercept_model() {
    let hits = recovery(ModelParams::zero_intercept(2.0, 1.5).unwrap(), true, CardName::MsmII, 41);
    assert!(hits > 10, "{hits}/20");
}

#[test]
fn cards_carry_expected_metadata() {
    let s = sample_bivariate(&ModelParams::new(1.0, 3.0, 4.0).unwrap(), 200, Seed(2)).unwrap();
    let r = compare_models(&s).unwrap();
    let names: Vec<_> = r.cards.iter().map(|c| c.name).collect();
    assert_eq!(names, CardName::TABLE.to_vec());
    for c in &r.cards {
        assert_eq!(c.nparams, c.submodel.nparams());
        assert_eq!(c.aic.is_some(), c.feasible && c.fit.is_some());
        assert_eq!(c.mirrored, c.name.mirrored());
    }
    assert_eq!(r.independence.submodel, SubmodelKind::Independence);
}
