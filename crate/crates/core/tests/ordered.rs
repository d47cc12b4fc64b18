mod common;

use ballfix::hahn::{HahnSeries, DEFAULT_TRUNCATION as T};
use ballfix::ordered::{
    check_hybrid, scoscu_transfer, solve_oag, AffineSeriesMap, BallTag, CoefficientField,
    HybridBall, HybridVerdict, OagConfig,
};
use common::{q, random_series, random_um_nest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn oag_matches_linear_solution_for_affine_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        // a = r + (infinitesimal), 0 < |r| ≤ 1/2
        let mut r = q(rng.gen_range(-4..=4), 8);
        if r == q(0, 1) {
            r = q(1, 4);
        }
        let a = &HahnSeries::constant(r, T) + &random_series(&mut rng, 1, 6, 2, T);
        let b = random_series(&mut rng, 0, 6, 3, T);
        let map = AffineSeriesMap::new(a.clone(), b.clone());
        let one = HahnSeries::constant(q(1, 1), T);
        let exact = b.checked_div(&(&one - &a)).unwrap();
        let report = solve_oag(
            &|x| map.apply(x),
            &HahnSeries::zero(T),
            &OagConfig::new(3, 4, T),
        )
        .unwrap();
        assert_eq!(report.point, Some(exact));
    }
}

#[test]
fn random_scoscu_nests_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let depth = rng.gen_range(1..=6);
        let nest = random_um_nest(&mut rng, depth, T);
        let probes: Vec<_> = (0..10)
            .map(|_| random_series(&mut rng, -3, 12, 4, T))
            .collect();
        assert!(scoscu_transfer(&nest, &probes).unwrap().passed());
    }
}

#[test]
fn hybrid_tail_classification() {
    let s = |text: &str| HahnSeries::parse(text, T).unwrap();
    let nest = vec![
        HybridBall::RationalOrder {
            q: q(0, 1),
            r: q(4, 1),
        },
        HybridBall::Ultrametric {
            x: s("1"),
            y: s("1 + t"),
        },
        HybridBall::Ultrametric {
            x: s("1 + t"),
            y: s("1 + t + t^2"),
        },
    ];
    let v = check_hybrid(CoefficientField::Dyadic, nest, 10, T).unwrap();
    assert_eq!(
        v,
        HybridVerdict::Nonempty {
            cofinal: BallTag::Ultrametric,
            tail_start: 1,
            witness: "1 + t^1".into(),
            truncated: true
        }
    );
    let bad = vec![HybridBall::RationalOrder {
        q: q(1, 3),
        r: q(1, 1),
    }];
    assert!(check_hybrid(CoefficientField::Dyadic, bad, 10, T).is_err());
}
