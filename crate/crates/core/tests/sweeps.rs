use ballfix::sweep::{nfpt_sweep, topo_sweep};

#[test]
fn nfpt_sweep_four_points_six_balls() {
    let s = nfpt_sweep(4, 6).unwrap();
    assert!(
        s.counterexamples.is_empty(),
        "{:?}",
        &s.counterexamples[..s.counterexamples.len().min(3)]
    );
    assert_eq!(s.c_solved, s.c_passed);
    assert_eq!(s.cu_unique, s.cu_passed);
}

#[test]
fn topology_sweep_four_points() {
    let s = topo_sweep(4).unwrap();
    assert!(
        s.counterexamples.is_empty(),
        "{:?}",
        s.counterexamples.first()
    );
    assert_eq!(s.topologies, 1 + 3 + 9 + 33);
    assert_eq!(s.complete_spaces, s.topologies);
}
