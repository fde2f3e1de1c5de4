//! Brute-force oracles and the worked-example table, shared by the core
//! test targets and the acceptance gate.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use hopf_lpa::classifier::{Applicable, GkClass, StableRank};
use hopf_lpa::hopf_graph::{build_delta_lambda, HopfGraphBundle, SubgraphView, DEFAULT_MAX_EDGES};
use hopf_lpa::{
    classify, parse_group, parse_ramification, Cardinal, Classification, MultiDigraph,
    SemigroupReport,
};

/// `reach[i][j]`: a path (possibly empty) from `i` to `j`.
pub fn reachability(g: &MultiDigraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for e in g.edges() {
        r[e.source][e.range] = true;
    }
    warshall(&mut r);
    r
}

/// Same closure on the underlying undirected graph.
pub fn undirected_reachability(g: &MultiDigraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for e in g.edges() {
        r[e.source][e.range] = true;
        r[e.range][e.source] = true;
    }
    warshall(&mut r);
    r
}

fn warshall(r: &mut [Vec<bool>]) {
    let n = r.len();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
}

/// Simple cycles as edge-index lists, one per rotation class.
pub fn cycles(g: &MultiDigraph) -> Vec<Vec<usize>> {
    fn walk(
        g: &MultiDigraph,
        start: usize,
        v: usize,
        on_path: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for &e in g.out_edges(v) {
            let w = g.edge(e).range;
            if w == start {
                path.push(e);
                out.push(path.clone());
                path.pop();
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(e);
                walk(g, start, w, on_path, path, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        let mut on_path = vec![false; g.vertex_count()];
        on_path[s] = true;
        walk(g, s, s, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

pub fn cycle_vertices(g: &MultiDigraph, c: &[usize]) -> BTreeSet<usize> {
    c.iter().map(|&e| g.edge(e).source).collect()
}

pub fn is_hereditary_saturated(g: &MultiDigraph, h: &[bool]) -> bool {
    (0..g.vertex_count()).all(|v| {
        let hereditary = !h[v] || g.successors(v).all(|w| h[w]);
        let saturated = h[v] || g.out_degree(v) == 0 || !g.successors(v).all(|w| h[w]);
        hereditary && saturated
    })
}

/// Intersection of all hereditary saturated supersets of `seed`.
pub fn brute_hs_closure(g: &MultiDigraph, seed: &[usize]) -> Vec<usize> {
    let n = g.vertex_count();
    let mut best = vec![true; n];
    for mask in 0u32..(1 << n) {
        let h: Vec<bool> = (0..n).map(|v| mask & (1 << v) != 0).collect();
        if seed.iter().all(|&s| h[s]) && is_hereditary_saturated(g, &h) {
            for v in 0..n {
                best[v] &= h[v];
            }
        }
    }
    (0..n).filter(|&v| best[v]).collect()
}

pub struct Example {
    pub sg: SemigroupReport,
    pub cls: Classification,
    pub bundle: HopfGraphBundle,
}

/// Classifies and builds the graphs; ℤ gets a window of 4.
pub fn example(group: &str, ramification: &str) -> Example {
    let g = parse_group(group, 5040).unwrap();
    let r = parse_ramification(&g, ramification, 8).unwrap();
    let (sg, cls) = classify(&g, &r);
    let window = (!g.is_finite()).then_some(4);
    let bundle = build_delta_lambda(&g, &r, &sg, window, DEFAULT_MAX_EDGES).unwrap();
    Example { sg, cls, bundle }
}

fn graph(view: &SubgraphView) -> Result<&MultiDigraph, String> {
    view.as_graph()
        .map(|s| &s.graph)
        .ok_or_else(|| format!("expected a graph, got {view:?}"))
}

macro_rules! expect_eq {
    ($left:expr, $right:expr) => {{
        let (l, r) = (&$left, &$right);
        if l != r {
            return Err(format!("{} = {:?}, expected {:?}", stringify!($left), l, r));
        }
    }};
}

fn s3_rotations() -> Result<(), String> {
    let Example { sg, cls, bundle } = example("symmetric:3", "(1 2 3)=1");
    let gamma = bundle.gamma.as_ref().unwrap();
    let comps = hopf_lpa::digraph::connected_components(gamma);
    expect_eq!(comps.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3]);
    expect_eq!(cls.component_count, Cardinal::Finite(2));
    let delta = graph(&bundle.delta)?;
    let lambda = graph(&bundle.lambda)?;
    expect_eq!(delta.vertex_count(), 3);
    expect_eq!(delta, lambda);
    expect_eq!(sg.s_order(), Cardinal::Finite(3));
    expect_eq!(cls.gk_dim, GkClass::Infinite);
    expect_eq!(cls.stable_rank, StableRank::Infinite);
    expect_eq!(cls.purely_infinite_simple, false);
    expect_eq!(cls.lpa_structure.as_deref(), Some("L_K(Δ)^(2)"));
    Ok(())
}

fn s3_transpositions() -> Result<(), String> {
    let Example { cls, bundle, .. } = example("symmetric:3", "(1 2)=1");
    let gamma = bundle.gamma.as_ref().unwrap();
    expect_eq!(gamma.edge_count(), 18);
    expect_eq!(cls.component_count, Cardinal::Finite(1));
    expect_eq!(graph(&bundle.delta)?, gamma);
    expect_eq!(graph(&bundle.lambda)?, gamma);
    expect_eq!(cls.purely_infinite_simple, true);
    expect_eq!(cls.stable_rank, StableRank::Infinite);
    Ok(())
}

fn integers_zero_and_two() -> Result<(), String> {
    let Example { sg, cls, bundle } = example("integers", "0=1;2=1");
    expect_eq!(cls.component_count, Cardinal::Finite(2));
    expect_eq!(sg.coset_count_delta0, Cardinal::Finite(2));
    let lambda = graph(&bundle.lambda)?;
    expect_eq!(lambda.labels(), ["0".to_string()]);
    expect_eq!(lambda.edge_count(), 1);
    expect_eq!((lambda.edge(0).source, lambda.edge(0).range), (0, 0));
    expect_eq!(cls.gk_dim, GkClass::Infinite);
    expect_eq!(cls.stable_rank, StableRank::Two);
    expect_eq!(cls.purely_infinite_simple, false);
    expect_eq!(cls.has_fd_rep, false);
    Ok(())
}

fn integers_two_and_three() -> Result<(), String> {
    let Example { cls, bundle, .. } = example("integers", "2=1;3=1");
    expect_eq!(cls.gk_dim, GkClass::Zero);
    expect_eq!(cls.stable_rank, StableRank::One);
    expect_eq!(bundle.lambda, SubgraphView::Trivial);
    expect_eq!(graph(&bundle.delta)?, bundle.gamma.as_ref().unwrap());
    Ok(())
}

fn trivial_single_loop() -> Result<(), String> {
    let Example { cls, .. } = example("trivial", "1_G=1");
    expect_eq!(cls.gk_dim, GkClass::One);
    expect_eq!(cls.stable_rank, StableRank::Two);
    expect_eq!(cls.has_fd_rep, true);
    expect_eq!(cls.lpa_structure.as_deref(), Some("M_1(K[x,x⁻¹])^(1)"));
    Ok(())
}

fn trivial_three_loops() -> Result<(), String> {
    let Example { cls, bundle, .. } = example("trivial", "1_G=3");
    let gamma = bundle.gamma.as_ref().unwrap();
    expect_eq!((gamma.vertex_count(), gamma.edge_count()), (1, 3));
    expect_eq!(cls.purely_infinite_simple, true);
    Ok(())
}

fn zero_ramification() -> Result<(), String> {
    for (group, order) in [
        ("trivial", 1),
        ("cyclic:5", 5),
        ("symmetric:3", 6),
        ("dihedral:4", 8),
    ] {
        let Example { cls, .. } = example(group, "");
        expect_eq!(cls.lpa_structure, Some(format!("K^({order})")));
        expect_eq!(cls.stable_rank, StableRank::One);
        expect_eq!(cls.ibn, Applicable::Value(true));
        expect_eq!(cls.gk_dim, GkClass::Zero);
        expect_eq!(cls.has_fd_rep, true);
    }
    Ok(())
}

fn cyclic_six_by_two() -> Result<(), String> {
    let Example { cls, .. } = example("cyclic:6", "2=1");
    expect_eq!(cls.lpa_structure.as_deref(), Some("M_3(K[x,x⁻¹])^(2)"));
    expect_eq!(
        cls.fd_category.as_deref(),
        Some("(M_{K[x,x⁻¹]}^fd)^(2 cosets)")
    );
    expect_eq!(cls.component_count, Cardinal::Finite(2));
    Ok(())
}

/// Every worked example, by name, with a failure description if any.
pub fn worked_examples() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("S3 with the 3-cycle class", s3_rotations()),
        ("S3 with the transposition class", s3_transpositions()),
        ("integers with [0]+[2]", integers_zero_and_two()),
        ("integers with [2]+[3]", integers_two_and_three()),
        ("trivial group, one loop", trivial_single_loop()),
        ("trivial group, three loops", trivial_three_loops()),
        ("zero ramification", zero_ramification()),
        ("cyclic:6 with [2]", cyclic_six_by_two()),
    ]
}
