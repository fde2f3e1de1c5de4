//! Property suites: graph analyses against brute-force oracles, closure
//! laws, Hopf graph invariants, lattice and monoid certificates.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use hopf_lpa::cardinal::Cardinal;
use hopf_lpa::classifier::{classify, Applicable, GkClass, StableRank};
use hopf_lpa::digraph::{
    connected_components, exc_and_chains, exitless_cycle_exists, has_cycle, hs_closure,
    maximal_sink_or_cycle, only_trivial_hs, scc,
};
use hopf_lpa::groups::{parse_group, AmbientGroup};
use hopf_lpa::hopf_graph::{build_gamma, MultiDigraph, DEFAULT_MAX_EDGES};
use hopf_lpa::monoid::{Certificate, GraphMonoid, MonoidBudget, Verdict};
use hopf_lpa::ramification::RamificationData;
use hopf_lpa::semigroup::{integer_semigroup_flags, IntegerSemigroup};
use hopf_lpa::{Lattice, MachineLattice};
use num_bigint::BigInt;
use proptest::prelude::*;

mod support;
use support::{
    brute_hs_closure, cycle_vertices, cycles, is_hereditary_saturated, reachability,
    undirected_reachability,
};

fn multigraph(max_n: usize, max_edges: usize) -> impl Strategy<Value = MultiDigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges)
            .prop_map(move |pairs| MultiDigraph::from_pairs(n, &pairs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scc_and_components_match_transitive_closure(g in multigraph(8, 20)) {
        let n = g.vertex_count();
        let r = reachability(&g);
        let d = scc(&g);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(d.component_of[i] == d.component_of[j], r[i][j] && r[j][i]);
            }
        }
        let mins: Vec<usize> = d.components.iter().map(|c| c[0]).collect();
        prop_assert!(mins.windows(2).all(|w| w[0] < w[1]));
        for (c, vs) in d.components.iter().enumerate() {
            let v = vs[0];
            let on_cycle = g.successors(v).any(|w| r[w][v]);
            prop_assert_eq!(d.has_cycle[c], on_cycle);
        }
        for e in g.edges() {
            let (a, b) = (d.component_of[e.source], d.component_of[e.range]);
            prop_assert!(a == b || d.condensation[a].contains(&b));
        }

        let u = undirected_reachability(&g);
        let comps = connected_components(&g);
        let mut of = vec![0; n];
        for (c, vs) in comps.iter().enumerate() { for &v in vs { of[v] = c; } }
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(of[i] == of[j], u[i][j]);
            }
        }
    }

    #[test]
    fn hs_closure_is_a_closure_operator(g in multigraph(7, 14), a in prop::collection::vec(0usize..7, 0..4), b in prop::collection::vec(0usize..7, 0..4)) {
        let n = g.vertex_count();
        let a: Vec<usize> = a.into_iter().filter(|&v| v < n).collect();
        let mut ab = a.clone();
        ab.extend(b.into_iter().filter(|&v| v < n));
        let ca = hs_closure(&g, &a);
        let cab = hs_closure(&g, &ab);
        prop_assert!(a.iter().all(|v| ca.contains(v)));
        prop_assert_eq!(hs_closure(&g, &ca), ca.clone());
        prop_assert!(ca.iter().all(|v| cab.contains(v)));
        let mask: Vec<bool> = (0..n).map(|v| ca.contains(&v)).collect();
        prop_assert!(is_hereditary_saturated(&g, &mask));
        prop_assert_eq!(ca, brute_hs_closure(&g, &a));
    }

    #[test]
    fn only_trivial_hs_matches_subset_enumeration(g in multigraph(6, 12)) {
        let n = g.vertex_count();
        let nontrivial = (1u32..(1 << n) - 1).any(|mask| {
            let h: Vec<bool> = (0..n).map(|v| mask & (1 << v) != 0).collect();
            is_hereditary_saturated(&g, &h)
        });
        prop_assert_eq!(only_trivial_hs(&g).unwrap(), !nontrivial);
    }

    #[test]
    fn cycle_analyses_match_enumeration(g in multigraph(8, 14)) {
        let all = cycles(&g);
        let r = reachability(&g);
        prop_assert_eq!(has_cycle(&g), !all.is_empty());

        let exitless = all.iter().any(|c| cycle_vertices(&g, c).iter().all(|&v| g.out_degree(v) == 1));
        prop_assert_eq!(exitless_cycle_exists(&g), exitless);

        let vsets: Vec<BTreeSet<usize>> = all.iter().map(|c| cycle_vertices(&g, c)).collect();
        let exc = (0..all.len()).all(|i| (0..all.len()).all(|j| i == j || vsets[i].is_disjoint(&vsets[j])));
        let report = exc_and_chains(&g);
        prop_assert_eq!(report.exc_holds, exc);

        let reaches = |i: usize, j: usize| vsets[i].iter().any(|&a| vsets[j].iter().any(|&b| r[a][b]));
        let has_exit = |i: usize| {
            let edges: BTreeSet<usize> = all[i].iter().copied().collect();
            vsets[i].iter().any(|&v| g.out_edges(v).iter().any(|e| !edges.contains(e)))
        };
        if exc {
            // longest chains, by memoized search over the cycle order
            let k = all.len();
            let mut ending = vec![0u64; k];
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by_key(|&i| (0..k).filter(|&j| j != i && reaches(j, i)).count());
            for &i in &order {
                ending[i] = 1 + (0..k).filter(|&j| j != i && reaches(j, i)).map(|j| ending[j]).max().unwrap_or(0);
            }
            let d1 = ending.iter().copied().max().unwrap_or(0);
            let d2 = (0..k).filter(|&i| has_exit(i)).map(|i| ending[i]).max().unwrap_or(0);
            prop_assert_eq!(report.d1, Cardinal::Finite(d1));
            prop_assert_eq!(report.d2, Cardinal::Finite(d2));
        } else {
            prop_assert_eq!(report.gk_dimension(), Cardinal::Infinite);
        }

        let maximal_sink = (0..g.vertex_count())
            .filter(|&v| g.out_degree(v) == 0)
            .any(|v| !(0..all.len()).any(|i| vsets[i].iter().any(|&a| r[a][v])));
        let maximal_cycle = (0..all.len()).any(|i| !(0..all.len()).any(|j| j != i && reaches(j, i)));
        prop_assert_eq!(maximal_sink_or_cycle(&g), maximal_sink || maximal_cycle);
    }

    #[test]
    fn json_round_trip_preserves_analyses(g in multigraph(8, 16)) {
        let back = MultiDigraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(scc(&back), scc(&g));
        prop_assert_eq!(exc_and_chains(&back), exc_and_chains(&g));
        prop_assert_eq!(g.to_dot("x"), back.to_dot("x"));
    }
}

const GROUPS: &[&str] = &[
    "trivial",
    "cyclic:5",
    "cyclic:8",
    "symmetric:3",
    "symmetric:4",
    "dihedral:4",
    "dihedral:5",
    "product(cyclic:2,cyclic:3)",
    "product(symmetric:3,cyclic:2)",
];

fn finite_instance() -> impl Strategy<Value = (AmbientGroup, RamificationData)> {
    (0..GROUPS.len(), prop::collection::vec(0u32..3, 0..12)).prop_map(|(i, mults)| {
        let group = parse_group(GROUPS[i], 5040).unwrap();
        let g = group.as_finite().unwrap().clone();
        let k = g.conjugacy_classes().len();
        let r =
            RamificationData::from_class_multiplicities(&g, mults.into_iter().take(k).enumerate());
        (group, r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hopf_graphs_are_regular((group, r) in finite_instance()) {
        let g = group.as_finite().unwrap();
        let gamma = build_gamma(g, &r, DEFAULT_MAX_EDGES).unwrap();
        gamma.audit().unwrap();
        let sum = r.degree_sum() as usize;
        prop_assert_eq!(gamma.edge_count(), g.order() * sum);
        for v in 0..gamma.vertex_count() {
            prop_assert_eq!(gamma.out_degree(v), sum);
            prop_assert_eq!(gamma.in_degree(v), sum);
        }
    }

    #[test]
    fn every_vertex_is_on_enough_cycles((group, r) in finite_instance()) {
        let g = group.as_finite().unwrap();
        prop_assume!(g.order() <= 8 && r.degree_sum() <= 4);
        let gamma = build_gamma(g, &r, DEFAULT_MAX_EDGES).unwrap();
        let all = cycles(&gamma);
        for v in 0..gamma.vertex_count() {
            let through = all.iter().filter(|c| cycle_vertices(&gamma, c).contains(&v)).count();
            prop_assert!(through as u64 >= r.degree_sum());
        }
    }

    #[test]
    fn no_maximal_cycle_above_degree_one((group, r) in finite_instance()) {
        let g = group.as_finite().unwrap();
        let gamma = build_gamma(g, &r, DEFAULT_MAX_EDGES).unwrap();
        let (sg, _) = classify(&group, &r);
        if r.degree_sum() >= 2 && sg.is_submonoid {
            prop_assert!(!maximal_sink_or_cycle(&gamma));
            prop_assert!(!exc_and_chains(&gamma).exc_holds);
        }
    }

    #[test]
    fn classification_is_internally_consistent((group, r) in finite_instance()) {
        let (sg, c) = classify(&group, &r);
        let sum = r.degree_sum();
        prop_assert_eq!(c.gk_dim == GkClass::One, c.has_fd_rep && sum > 0);
        if c.purely_infinite_simple {
            prop_assert_eq!(c.gk_dim, GkClass::Infinite);
            prop_assert_eq!(c.simple, Applicable::Value(true));
            prop_assert!(!c.has_fd_rep);
            prop_assert_eq!(c.ibn, Applicable::Value(false));
        }
        prop_assert_eq!(c.stable_rank == StableRank::One, c.gk_dim == GkClass::Zero);
        if c.ugn == Applicable::Value(true) {
            prop_assert_eq!(c.ibn, Applicable::Value(true));
        }
        prop_assert!(!sg.is_subgroup || sg.is_submonoid);
        prop_assert!(!sg.equals_whole_group || sg.is_subgroup);
        // nonempty finite subsemigroups are subgroups
        prop_assert_eq!(sg.is_subgroup, sum > 0);
        let g = group.as_finite().unwrap();
        prop_assert!(g.is_normal(sg.delta0.as_finite().unwrap()).unwrap());
        let (sg2, c2) = classify(&group, &r);
        prop_assert_eq!(sg2, sg);
        prop_assert_eq!(serde_json::to_string(&c2.to_json()).unwrap(), serde_json::to_string(&c.to_json()).unwrap());
    }

    #[test]
    fn group_structure_laws((group, r) in finite_instance()) {
        let g = group.as_finite().unwrap();
        let mut seen = vec![0usize; g.order()];
        for class in g.conjugacy_classes() {
            prop_assert_eq!(g.order() % class.len(), 0);
            for &x in &class.members {
                seen[x] += 1;
                for h in g.elements() {
                    prop_assert!(class.contains(g.conjugate(h, x)));
                }
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
        let gens: Vec<usize> = r.finite_steps().iter().map(|&(x, _)| x).collect();
        let h = g.generated_subgroup(&gens);
        prop_assert_eq!(g.generated_subgroup(&h.members).members, h.members.clone());
        prop_assert_eq!(g.order() % h.order(), 0);
    }
}

/// Nonempty word over `gens` of length ≤ `bound` summing to zero.
fn zero_sum_word(gens: &[i64], bound: usize) -> bool {
    let reach = bound as i64 * gens.iter().map(|g| g.abs()).max().unwrap_or(0);
    let width = (2 * reach + 1) as usize;
    let mut current = vec![false; width];
    for &g in gens {
        current[(g + reach) as usize] = true;
    }
    for _ in 1..bound {
        if current[reach as usize] {
            return true;
        }
        let mut next = current.clone();
        for (i, &on) in current.iter().enumerate() {
            if on {
                for &g in gens {
                    let j = i as i64 + g;
                    if (0..width as i64).contains(&j) {
                        next[j as usize] = true;
                    }
                }
            }
        }
        current = next;
    }
    current[reach as usize]
}

proptest! {
    #[test]
    fn integer_submonoid_matches_zero_sum_search(gens in prop::collection::btree_set(-6i64..=6, 0..4)) {
        let gens: Vec<i64> = gens.into_iter().collect();
        let bound = 2 * gens.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0);
        let (submonoid, subgroup, d) = integer_semigroup_flags(&gens);
        prop_assert_eq!(submonoid, !gens.is_empty() && zero_sum_word(&gens, bound.max(1)));
        let s = IntegerSemigroup::new(gens.clone());
        prop_assert_eq!(s.modulus(), d);
        if subgroup {
            prop_assert!(submonoid);
        }
    }

    #[test]
    fn integer_membership_matches_bounded_search(gens in prop::collection::btree_set(-5i64..=7, 1..4), n in -20i64..40) {
        let gens: Vec<i64> = gens.into_iter().collect();
        let s = IntegerSemigroup::new(gens.clone());
        // sums of at most 40 generators cover every target in range here
        let mut sums: BTreeSet<i64> = gens.iter().copied().collect();
        for _ in 0..40 {
            let next: BTreeSet<i64> = sums
                .iter()
                .flat_map(|&a| gens.iter().map(move |&g| a + g))
                .filter(|x| x.abs() <= 300)
                .collect();
            sums.extend(next);
        }
        prop_assert_eq!(s.contains(n), sums.contains(&n));
    }

    #[test]
    fn lattices_agree_across_integer_types(
        rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 0..5),
        target in prop::collection::vec(-9i64..=9, 4),
    ) {
        let small = MachineLattice::from_generators(4, rows.clone());
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let large = Lattice::from_generators(4, rows.iter().map(|r| big(r)));
        prop_assert_eq!(small.rank(), large.rank());
        prop_assert_eq!(small.contains(&target), large.contains(&big(&target)));
        for r in &rows {
            prop_assert!(large.contains(&big(r)));
        }
        match large.separating_functional(&big(&target)) {
            Some(f) => {
                prop_assert!(!small.contains(&target));
                for r in &rows {
                    prop_assert!(f.is_zero_mod(&f.evaluate(&big(r))));
                }
                prop_assert!(!f.is_zero_mod(&f.evaluate(&big(&target))));
            }
            None => prop_assert!(small.contains(&target)),
        }
    }

    #[test]
    fn monoid_certificates_replay(
        g in multigraph(4, 6),
        x in prop::collection::vec(0u32..3, 4),
        y in prop::collection::vec(0u32..3, 4),
    ) {
        let n = g.vertex_count();
        let (x, y) = (&x[..n], &y[..n]);
        let m = GraphMonoid::new(&g);
        let budget = MonoidBudget { max_visited: 2_000, max_coefficient: 12 };
        let d = m.decide_equal(x, y, budget);
        let back = m.decide_equal(y, x, budget);
        prop_assert_eq!(d.verdict, back.verdict);
        prop_assert_eq!(m.decide_equal(x, x, budget).certificate, Certificate::Trace(vec![]));
        match (&d.verdict, &d.certificate) {
            (Verdict::Equal, Certificate::Trace(t)) => {
                let end = m.replay(x, t);
                prop_assert_eq!(end.as_deref(), Some(y));
            }
            (Verdict::NotEqual, Certificate::Separator(f)) => {
                prop_assert!(m.is_invariant(f));
                let big = |v: &[u32]| v.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
                prop_assert!(!f.agrees(&big(x), &big(y)));
                for z in m.one_step_rewrites(x) {
                    prop_assert!(f.agrees(&big(x), &big(&z)));
                }
            }
            (Verdict::Unknown, Certificate::Note(_)) => {}
            other => prop_assert!(false, "mismatched certificate {:?}", other),
        }
        let ibn = m.ibn_test(8, budget);
        prop_assert!(ibn.verify(&m));
    }
}
