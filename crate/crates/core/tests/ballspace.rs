mod common;

use ballfix::ballspace::{
    check_c_conditions, check_cu_conditions, check_sc_axioms, cofinal_subnest, default_names,
    fixed_points, is_spherically_complete, preimage_nest, preimage_space, solve_gfpt2, solve_nfpt1,
    solve_nfpt2, transfer_intersection, BallAssignment, BallSpace, FiniteBallSpace, Nest,
    ProbeBudget, SelfMap,
};
use ballfix::{Condition, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn set(points: &[usize]) -> PointSet {
    points.iter().copied().collect()
}

fn three_point() -> (BallSpace, SelfMap) {
    let space =
        FiniteBallSpace::with_default_names(3, vec![set(&[0, 1, 2]), set(&[1, 2]), set(&[2])])
            .unwrap();
    (BallSpace::Finite(space), SelfMap::Table(vec![1, 2, 2]))
}

#[test]
fn three_point_example_end_to_end() {
    let (space, f) = three_point();
    assert!(check_c_conditions(&space, &f).unwrap().all_passed());
    assert!(check_cu_conditions(&space, &f).unwrap().all_passed());

    let r1 = solve_nfpt1(&space, &f, 10).unwrap();
    assert_eq!(r1.fixed_point(), Some(2));
    assert_eq!(
        r1.nest.unwrap().balls(),
        &[set(&[0, 1, 2]), set(&[1, 2]), set(&[2])]
    );

    let r2 = solve_nfpt2(&space, &f, 10).unwrap();
    assert_eq!((r2.fixed_point(), r2.iterations), (Some(2), 2));

    let fin = space.finite().unwrap();
    let assign =
        BallAssignment::from_sets(fin, &[set(&[0, 1, 2]), set(&[1, 2]), set(&[2])]).unwrap();
    assert!(check_sc_axioms(&space, &f, &assign).unwrap().all_passed());
    for start in 0..3 {
        assert_eq!(
            solve_gfpt2(&space, &f, &assign, start, 10)
                .unwrap()
                .fixed_point(),
            Some(2)
        );
    }
    assert!(is_spherically_complete(
        &space,
        &[],
        ProbeBudget {
            depth: 1,
            points: 1
        }
    )
    .is_complete());
}

#[test]
fn hypothesis_failures_carry_conditions() {
    let space =
        BallSpace::Finite(FiniteBallSpace::with_default_names(2, vec![set(&[0, 1])]).unwrap());
    let swap = SelfMap::Table(vec![1, 0]);
    assert_eq!(
        solve_nfpt1(&space, &swap, 5).unwrap().violated(),
        Some(Condition::C1)
    );
    let collapse = SelfMap::Table(vec![0, 0]);
    let cu = check_cu_conditions(&space, &collapse).unwrap();
    assert!(!cu.passed(Condition::CU2));

    let fin = space.finite().unwrap();
    let assign = BallAssignment::from_sets(fin, &[set(&[0, 1]), set(&[0, 1])]).unwrap();
    let sc = check_sc_axioms(&space, &swap, &assign).unwrap();
    assert!(!sc.passed(Condition::SC2));
    assert!(solve_gfpt2(&space, &swap, &assign, 0, 10)
        .unwrap()
        .violated()
        .is_some());
}

#[test]
fn preimage_example() {
    let target =
        FiniteBallSpace::new(vec!["a".into(), "b".into()], vec![set(&[0]), set(&[0, 1])]).unwrap();
    let map = [0, 0, 1, 1];
    let pre = preimage_space(&map, default_names(4), &target).unwrap();
    assert_eq!(pre.balls(), &[set(&[0, 1]), set(&[0, 1, 2, 3])]);
    let nest = Nest::new(vec![set(&[0, 1]), set(&[0])]).unwrap();
    assert_eq!(
        preimage_nest(&map, &nest).unwrap().balls(),
        &[set(&[0, 1, 2, 3]), set(&[0, 1])]
    );
    let lone = FiniteBallSpace::new(vec!["a".into(), "b".into()], vec![set(&[1])]).unwrap();
    assert!(preimage_space(&[0, 0], default_names(2), &lone).is_err());
}

#[test]
fn preimages_of_random_nests_are_nests() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n2 = rng.gen_range(1..=6);
        let n1 = rng.gen_range(1..=8);
        let map: Vec<usize> = (0..n1).map(|_| rng.gen_range(0..n2)).collect();
        // descending chain by removing random points
        let mut ball: Vec<usize> = (0..n2).collect();
        let mut chain = vec![ball.iter().copied().collect::<PointSet>()];
        while ball.len() > 1 && rng.gen_bool(0.7) {
            ball.remove(rng.gen_range(0..ball.len()));
            chain.push(ball.iter().copied().collect());
        }
        let nest = Nest::new(chain).unwrap();
        match preimage_nest(&map, &nest) {
            Ok(pulled) => {
                assert!(pulled.balls().windows(2).all(|w| w[1].is_subset(&w[0])));
                let (x, y) = transfer_intersection(&map, &nest)
                    .unwrap()
                    .expect("nonempty pull-back");
                assert_eq!(map[x], y);
                assert!(nest.intersection().contains(y));
            }
            Err(_) => assert!(nest.balls().iter().any(|b| b.preimage(&map).is_empty())),
        }
    }
}

#[test]
fn cofinal_subnest_keeps_intersection() {
    let nest = Nest::new(vec![set(&[2]), set(&[0, 1, 2]), set(&[1, 2]), set(&[1, 2])]).unwrap();
    let sub = cofinal_subnest(&nest);
    assert_eq!(sub.balls(), &[set(&[0, 1, 2]), set(&[1, 2]), set(&[2])]);
    assert_eq!(sub.intersection(), nest.intersection());
}

#[test]
fn brute_force_agrees_on_identity() {
    let singles: Vec<PointSet> = (0..4).map(|i| set(&[i])).collect();
    let space = BallSpace::Finite(FiniteBallSpace::with_default_names(4, singles).unwrap());
    let id = SelfMap::Table(vec![0, 1, 2, 3]);
    let r = solve_nfpt1(&space, &id, 5).unwrap();
    assert!(fixed_points(&[0, 1, 2, 3]).contains(&r.fixed_point().unwrap()));
}
