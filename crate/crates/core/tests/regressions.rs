//! Worked examples with exact expected values.

mod support;

#[test]
fn worked_examples_hold() {
    let failures: Vec<String> = support::worked_examples()
        .into_iter()
        .filter_map(|(name, outcome)| outcome.err().map(|e| format!("{name}: {e}")))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn window_renderings() {
    let ex = support::example("integers", "0=1;2=1");
    let gamma = ex.bundle.gamma.unwrap();
    assert_eq!(gamma.vertex_count(), 9);
    assert!(gamma.is_truncated());
    let loops = gamma.edges().iter().filter(|e| e.source == e.range).count();
    assert_eq!(loops, 9);
    // k → k+2 for k in -4..=2
    assert_eq!(gamma.edge_count(), 9 + 7);

    let ex = support::example("integers", "2=1;3=1");
    let gamma = ex.bundle.gamma.unwrap();
    assert!(gamma.edges().iter().all(|e| e.source != e.range));
    assert_eq!(gamma.edge_count(), 7 + 6);
}

#[test]
fn semigroup_of_s3_rotations() {
    let ex = support::example("symmetric:3", "(1,2,3)=1");
    assert_eq!(ex.sg.s_order(), hopf_lpa::Cardinal::Finite(3));
    assert!(ex.sg.is_subgroup);
    assert!(!ex.sg.equals_whole_group);
    assert_eq!(ex.sg.scc_count_delta, hopf_lpa::Cardinal::Finite(1));
}
