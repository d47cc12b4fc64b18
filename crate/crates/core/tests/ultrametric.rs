mod common;

use ballfix::ballspace::{default_names, fixed_points};
use ballfix::poset::ValuePoset;
use ballfix::ultrametric::{
    check_axioms, check_csco, check_sufpt_hypotheses, is_contracting, solve_sufpt, solve_ufpt,
    FiniteUltrametric,
};
use common::chain_ultrametric;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sufpt_and_ufpt_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut sufpt, mut ufpt) = (0, 0);
    for _ in 0..400 {
        let n = rng.gen_range(1..=5);
        let dist = chain_ultrametric(&mut rng, n, 3);
        let u = FiniteUltrametric::new(default_names(n), ValuePoset::chain(4), dist).unwrap();
        assert!(check_axioms(&u).all_passed());
        let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let brute = fixed_points(&f);
        if check_sufpt_hypotheses(&u, &f).unwrap().all_passed() {
            sufpt += 1;
            for start in 0..n {
                let x = solve_sufpt(&u, &f, start, 100)
                    .unwrap()
                    .fixed_point()
                    .expect("hypotheses hold");
                assert!(brute.contains(&x));
            }
        }
        if is_contracting(&u, &f) && check_csco(&u, &f).unwrap().all_passed() {
            let r = solve_ufpt(&u, &f, 0, 100).unwrap();
            if let Some(x) = r.fixed_point() {
                ufpt += 1;
                assert!(brute.contains(&x));
            }
        }
    }
    assert!(sufpt > 0 && ufpt > 0);
}

#[test]
fn axiom_violation_is_rejected() {
    // d(a,c) = 2 exceeds max(d(a,b), d(b,c)) = 1 on a chain
    let dist = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
    assert!(FiniteUltrametric::new(default_names(3), ValuePoset::chain(3), dist).is_err());
}
