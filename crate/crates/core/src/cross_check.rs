//! Recomputes classified properties directly on the constructed graphs and
//! records, per property, the formula value next to the measured one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cardinal::Cardinal;
use crate::classifier::{classify_with, Applicable, Classification, GkClass, StableRank};
use crate::digraph::{
    connected_components, exc_and_chains, exitless_cycle_exists, has_cycle, maximal_sink_or_cycle,
    only_trivial_hs, scc, sinks_sources,
};
use crate::groups::{parse_group, AmbientGroup, FiniteGroup, DEFAULT_MAX_ORDER};
use crate::hopf_graph::{
    build_delta_lambda, HopfGraphBundle, MultiDigraph, SubgraphView, DEFAULT_MAX_EDGES,
};
use crate::monoid::{GraphMonoid, IbnVerdict, MonoidBudget, DEFAULT_MAX_MN};
use crate::ramification::{parse_ramification, RamificationData, DEFAULT_MAX_MULTIPLICITY};
use crate::semigroup::{analyze, SemigroupMembers, SemigroupReport};
use crate::Error;

/// A `(group, ramification)` pair as it appears in manifests.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub group: String,
    pub ramification: String,
}

impl Instance {
    pub fn new(group: &str, ramification: &str) -> Self {
        Instance {
            group: group.to_string(),
            ramification: ramification.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub max_order: usize,
    pub max_multiplicity: u32,
    pub max_edges: u64,
    pub budget: MonoidBudget,
    pub max_mn: u32,
    /// Graphs with more vertices skip the monoid oracle.
    pub max_monoid_vertices: usize,
    /// Half-width of the window used for ℤ instances.
    pub integer_window: u32,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_order: DEFAULT_MAX_ORDER,
            max_multiplicity: DEFAULT_MAX_MULTIPLICITY,
            max_edges: DEFAULT_MAX_EDGES,
            budget: MonoidBudget::default(),
            max_mn: DEFAULT_MAX_MN,
            max_monoid_vertices: 256,
            integer_window: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub property: String,
    pub theorem_value: Value,
    pub direct_value: Value,
    pub agree: bool,
}

impl PropertyCheck {
    fn new(property: &str, theorem_value: Value, direct_value: Value) -> Self {
        PropertyCheck {
            property: property.to_string(),
            agree: theorem_value == direct_value,
            theorem_value,
            direct_value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub property: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub checks: Vec<PropertyCheck>,
    pub skipped: Vec<Skipped>,
}

impl CrossCheckReport {
    fn skip(&mut self, property: &str, reason: impl Into<String>) {
        self.skipped.push(Skipped {
            property: property.to_string(),
            reason: reason.into(),
        });
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.agree)
    }

    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|c| c.agree)
    }

    pub fn get(&self, property: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

fn cardinal_json(c: Cardinal) -> Value {
    serde_json::to_value(c).expect("cardinal serializes")
}

/// Verifies that `w ↦ g·w` maps `Δ` onto the component of every `g`,
/// edge for edge. Returns how many components passed.
pub fn translation_witness(group: &FiniteGroup, gamma: &MultiDigraph, delta: &[usize]) -> usize {
    let delta_set: BTreeSet<usize> = delta.iter().copied().collect();
    let delta_edges: BTreeSet<(usize, usize, u32)> = delta
        .iter()
        .flat_map(|&w| gamma.out_edges(w).iter().map(|&e| gamma.edge(e)))
        .map(|e| (e.source, e.range, e.tag))
        .collect();
    // every edge into Δ must start in Δ for Δ to be a full component
    if delta
        .iter()
        .any(|&w| gamma.predecessors(w).any(|u| !delta_set.contains(&u)))
    {
        return 0;
    }
    connected_components(gamma)
        .iter()
        .filter(|component| {
            let g = component[0];
            let image: BTreeSet<usize> = delta.iter().map(|&w| group.mul(g, w)).collect();
            if image.len() != component.len() || !component.iter().all(|v| image.contains(v)) {
                return false;
            }
            let component_edges: BTreeSet<(usize, usize, u32)> = component
                .iter()
                .flat_map(|&v| gamma.out_edges(v).iter().map(|&e| gamma.edge(e)))
                .map(|e| (e.source, e.range, e.tag))
                .collect();
            let mapped: BTreeSet<(usize, usize, u32)> = delta_edges
                .iter()
                .map(|&(s, r, t)| (group.mul(g, s), group.mul(g, r), t))
                .collect();
            mapped == component_edges
        })
        .count()
}

/// Component counts, the translation isomorphism, strong connectivity of
/// `Δ` and `Λ`, degree regularity, cycles and reachability.
pub fn check_structure(
    group: &FiniteGroup,
    r: &RamificationData,
    bundle: &HopfGraphBundle,
    sg: &SemigroupReport,
    report: &mut CrossCheckReport,
) {
    let gamma = bundle.gamma.as_ref().expect("finite groups have Γ");
    let sum = r.degree_sum();
    let components = connected_components(gamma);
    report.checks.push(PropertyCheck::new(
        "component_count",
        cardinal_json(sg.coset_count_delta0),
        json!(components.len()),
    ));

    let delta = bundle.delta.as_graph().expect("finite groups have Δ");
    report.checks.push(PropertyCheck::new(
        "components_isomorphic_to_delta",
        cardinal_json(sg.coset_count_delta0),
        json!(translation_witness(group, gamma, &delta.parent_vertices)),
    ));

    let delta_scc = scc(&delta.graph);
    report.checks.push(PropertyCheck::new(
        "scc_count_delta",
        cardinal_json(sg.scc_count_delta),
        json!(delta_scc.len()),
    ));
    report.checks.push(PropertyCheck::new(
        "delta_is_strongly_connected",
        json!(sum == 0 || sg.is_subgroup),
        json!(delta_scc.len() == 1),
    ));

    if let SubgraphView::Graph(lambda) = &bundle.lambda {
        let gamma_scc = scc(gamma);
        let c = gamma_scc.component_of[group.identity()];
        let names = |vs: &[usize]| {
            vs.iter()
                .map(|&v| gamma.label(v).to_string())
                .collect::<Vec<_>>()
        };
        report.checks.push(PropertyCheck::new(
            "lambda_is_scc_of_identity",
            json!(names(&lambda.parent_vertices)),
            json!(names(&gamma_scc.components[c])),
        ));
    }

    let degrees: BTreeSet<(usize, usize)> = (0..gamma.vertex_count())
        .map(|v| (gamma.out_degree(v), gamma.in_degree(v)))
        .collect();
    let regular_degree = match degrees.iter().next() {
        Some(&(o, i)) if degrees.len() == 1 && o == i => json!(o),
        _ => json!(degrees.iter().map(|&(o, i)| [o, i]).collect::<Vec<_>>()),
    };
    report.checks.push(PropertyCheck::new(
        "degree_regularity",
        json!(sum),
        regular_degree,
    ));

    let ss = sinks_sources(gamma);
    report.checks.push(PropertyCheck::new(
        "no_sinks_or_sources",
        json!(sum > 0),
        json!(ss.sinks.is_empty() && ss.sources.is_empty()),
    ));
    report.checks.push(PropertyCheck::new(
        "has_cycle",
        json!(sg.is_submonoid),
        json!(has_cycle(gamma)),
    ));

    // h is reachable from 1 by a nonempty path iff h ∈ S
    let reach = reachable_by_nonempty_paths(gamma, group.identity());
    let s_members = match &sg.s_members {
        SemigroupMembers::Finite(v) => v.clone(),
        SemigroupMembers::Integer(_) => unreachable!("finite group"),
    };
    report.checks.push(PropertyCheck::new(
        "reachability_matches_semigroup",
        json!(s_members.iter().map(|&x| group.name(x)).collect::<Vec<_>>()),
        json!(reach.iter().map(|&x| group.name(x)).collect::<Vec<_>>()),
    ));
}

fn reachable_by_nonempty_paths(g: &MultiDigraph, start: usize) -> Vec<usize> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack: Vec<usize> = g.successors(start).collect();
    while let Some(v) = stack.pop() {
        if !seen[v] {
            seen[v] = true;
            stack.extend(g.successors(v));
        }
    }
    (0..g.vertex_count()).filter(|&v| seen[v]).collect()
}

fn gk_name(c: Cardinal) -> Value {
    match GkClass::from_cardinal(c) {
        Some(k) => json!(k),
        None => json!(c.to_string()),
    }
}

pub fn check_gk(gamma: &MultiDigraph, cls: &Classification, report: &mut CrossCheckReport) {
    let chains = exc_and_chains(gamma);
    report.checks.push(PropertyCheck::new(
        "gk_dim",
        json!(cls.gk_dim),
        gk_name(chains.gk_dimension()),
    ));
}

pub fn check_pis_simple(gamma: &MultiDigraph, cls: &Classification, report: &mut CrossCheckReport) {
    let cofinal = only_trivial_hs(gamma).expect("Γ has at least one vertex");
    let exits = !exitless_cycle_exists(gamma);
    let cyclic = has_cycle(gamma);
    report.checks.push(PropertyCheck::new(
        "purely_infinite_simple",
        json!(cls.purely_infinite_simple),
        json!(cofinal && exits && cyclic),
    ));
    match cls.simple {
        Applicable::Value(s) => report.checks.push(PropertyCheck::new(
            "simple",
            json!(s),
            json!(cofinal && exits),
        )),
        Applicable::NotApplicable => {
            report.skip("simple", "zero ramification is outside the simplicity rule")
        }
    }
}

pub fn check_stable_rank(
    gamma: &MultiDigraph,
    cls: &Classification,
    report: &mut CrossCheckReport,
) {
    let acyclic = !has_cycle(gamma);
    report.checks.push(PropertyCheck::new(
        "stable_rank_one_iff_acyclic",
        json!(cls.stable_rank == StableRank::One),
        json!(acyclic),
    ));
    let single_cycles = gamma.vertex_count() > 0
        && (0..gamma.vertex_count()).all(|v| gamma.out_degree(v) == 1 && gamma.in_degree(v) == 1);
    if single_cycles {
        // a functional graph with all in-degrees one is a disjoint union of cycles
        report.checks.push(PropertyCheck::new(
            "stable_rank_of_single_cycles",
            json!(cls.stable_rank),
            json!(StableRank::Two),
        ));
    }
}

pub fn check_fd_and_ibn(
    gamma: &MultiDigraph,
    r: &RamificationData,
    sg: &SemigroupReport,
    cls: &Classification,
    config: &CheckConfig,
    report: &mut CrossCheckReport,
) -> Option<IbnVerdict> {
    let maximal = maximal_sink_or_cycle(gamma);
    report.checks.push(PropertyCheck::new(
        "has_fd_rep",
        json!(cls.has_fd_rep),
        json!(maximal),
    ));
    if r.degree_sum() >= 2 && sg.is_submonoid {
        report.checks.push(PropertyCheck::new(
            "no_maximal_cycle",
            json!(true),
            json!(!maximal),
        ));
    }
    report.skip("ugn", "no direct oracle; follows from IBN for these graphs");
    if gamma.vertex_count() > config.max_monoid_vertices {
        report.skip(
            "ibn",
            format!(
                "{} vertices exceed the monoid limit of {}",
                gamma.vertex_count(),
                config.max_monoid_vertices
            ),
        );
        return None;
    }
    let monoid = GraphMonoid::new(gamma);
    let rep = monoid.ibn_test(config.max_mn, config.budget);
    match (rep.verdict, cls.ibn) {
        (IbnVerdict::Unknown, _) => {
            report.skip(
                "ibn",
                rep.note.clone().unwrap_or_else(|| "undecided".into()),
            );
        }
        (verdict, Applicable::Value(theorem)) => {
            report.checks.push(PropertyCheck::new(
                "ibn",
                json!(theorem),
                json!(verdict == IbnVerdict::Ibn),
            ));
            report.checks.push(PropertyCheck::new(
                "ibn_certificate_replays",
                json!(true),
                json!(rep.verify(&monoid)),
            ));
        }
        (_, Applicable::NotApplicable) => report.skip("ibn", "no rule for this group"),
    }
    Some(rep.verdict)
}

/// Every pair of strongly connected components of `Δ` reaches a common one.
pub fn check_downward_directed(
    group: &FiniteGroup,
    bundle: &HopfGraphBundle,
    report: &mut CrossCheckReport,
) {
    if !group.is_abelian() {
        report.skip("downward_directed", "group is not commutative");
        return;
    }
    let delta = &bundle.delta.as_graph().expect("finite groups have Δ").graph;
    let d = scc(delta);
    let k = d.len();
    // below[c]: components reachable from c, including itself
    let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for c in d.topological_order().into_iter().rev() {
        let mut set = BTreeSet::from([c]);
        for &t in &d.condensation[c] {
            set.extend(below[t].iter().copied());
        }
        below[c] = set;
    }
    let directed = (0..k).all(|a| (a..k).all(|b| !below[a].is_disjoint(&below[b])));
    report.checks.push(PropertyCheck::new(
        "downward_directed",
        json!(true),
        json!(directed),
    ));
}

/// Local degree facts that survive truncation: vertices far enough from the
/// window edge have in- and out-degree equal to the degree sum.
pub fn check_window(window: &MultiDigraph, r: &RamificationData, report: &mut CrossCheckReport) {
    let steps = r.integer_steps();
    let reach = steps
        .iter()
        .map(|(c, _)| c.unsigned_abs())
        .max()
        .unwrap_or(0);
    let n = (window.vertex_count() as u64 - 1) / 2;
    let interior: Vec<usize> = (0..window.vertex_count())
        .filter(|&v| (v as u64).abs_diff(n) + reach <= n)
        .collect();
    if interior.is_empty() {
        report.skip(
            "window_degree_regularity",
            "window too narrow for the support",
        );
        return;
    }
    let ok = interior.iter().all(|&v| {
        window.out_degree(v) as u64 == r.degree_sum()
            && window.in_degree(v) as u64 == r.degree_sum()
    });
    report.checks.push(PropertyCheck::new(
        "window_degree_regularity",
        json!(r.degree_sum()),
        if ok {
            json!(r.degree_sum())
        } else {
            json!("irregular")
        },
    ));
    report.skip(
        "global_properties",
        "ℤ graphs are infinite; only windows are checked",
    );
}

/// Everything computed for one instance.
#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub instance: Instance,
    pub group: AmbientGroup,
    pub ramification: RamificationData,
    pub semigroup: SemigroupReport,
    pub classification: Classification,
    pub cross_check: CrossCheckReport,
    pub ibn_verdict: Option<IbnVerdict>,
    gamma: Option<MultiDigraph>,
}

impl InstanceResult {
    pub fn gamma(&self) -> Option<&MultiDigraph> {
        self.gamma.as_ref()
    }

    pub fn to_json(&self) -> Value {
        let group = match &self.group {
            AmbientGroup::Finite(g) => json!({
                "spec": g.spec(),
                "order": g.order(),
                "abelian": g.is_abelian(),
                "conjugacy_classes": g.conjugacy_classes().len(),
            }),
            AmbientGroup::Integers => json!({
                "spec": "integers",
                "order": "INFINITE",
                "abelian": true,
            }),
        };
        json!({
            "group": group,
            "ramification": {
                "canonical": self.ramification.to_text(),
                "degree_sum": self.ramification.degree_sum(),
                "entries": self.ramification.entries(),
            },
            "semigroup": self.semigroup.to_json(&self.group),
            "classification": self.classification.to_json(),
            "cross_check": self.cross_check,
        })
    }

    /// Machine-readable record of a disagreement, with the graph attached.
    pub fn counterexample(&self) -> Option<Value> {
        if self.cross_check.all_agree() {
            return None;
        }
        Some(json!({
            "group": self.instance.group,
            "ramification": self.instance.ramification,
            "disagreements": self.cross_check.disagreements().collect::<Vec<_>>(),
            "graph": self.gamma.as_ref().map(|g| serde_json::to_value(g).expect("graph serializes")),
        }))
    }
}

pub fn run_instance(instance: &Instance, config: &CheckConfig) -> Result<InstanceResult, Error> {
    let group = parse_group(&instance.group, config.max_order)?;
    let r = parse_ramification(&group, &instance.ramification, config.max_multiplicity)?;
    run_parsed(instance.clone(), group, r, config)
}

pub fn run_parsed(
    instance: Instance,
    group: AmbientGroup,
    r: RamificationData,
    config: &CheckConfig,
) -> Result<InstanceResult, Error> {
    let sg = analyze(&group, &r);
    let cls = classify_with(&group, &r, &sg);
    let mut report = CrossCheckReport::default();
    let mut ibn_verdict = None;
    let gamma = match &group {
        AmbientGroup::Finite(g) => {
            let bundle = build_delta_lambda(&group, &r, &sg, None, config.max_edges)?;
            check_structure(g, &r, &bundle, &sg, &mut report);
            let gamma = bundle.gamma.as_ref().expect("finite groups have Γ");
            check_gk(gamma, &cls, &mut report);
            check_pis_simple(gamma, &cls, &mut report);
            check_stable_rank(gamma, &cls, &mut report);
            ibn_verdict = check_fd_and_ibn(gamma, &r, &sg, &cls, config, &mut report);
            check_downward_directed(g, &bundle, &mut report);
            bundle.gamma
        }
        AmbientGroup::Integers => {
            let bundle = build_delta_lambda(
                &group,
                &r,
                &sg,
                Some(config.integer_window),
                config.max_edges,
            )?;
            let window = bundle.gamma.expect("windowed ℤ graph");
            check_window(&window, &r, &mut report);
            Some(window)
        }
    };
    Ok(InstanceResult {
        instance,
        group,
        ramification: r,
        semigroup: sg,
        classification: cls,
        cross_check: report,
        ibn_verdict,
        gamma,
    })
}

pub const SWEEP_GROUPS: &[&str] = &[
    "trivial",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:5",
    "cyclic:6",
    "cyclic:7",
    "cyclic:8",
    "symmetric:3",
    "dihedral:3",
    "dihedral:4",
    "product(cyclic:2,cyclic:2)",
];

/// Every multiplicity vector with entries in `{0, 1, 2}` and at most three
/// nonzero classes, for each group of [`SWEEP_GROUPS`].
pub fn default_sweep() -> Vec<Instance> {
    let mut out = Vec::new();
    for &spec in SWEEP_GROUPS {
        let group = parse_group(spec, DEFAULT_MAX_ORDER).expect("sweep groups parse");
        let g = group.as_finite().expect("sweep groups are finite");
        let k = g.conjugacy_classes().len();
        let mut vector = vec![0u32; k];
        loop {
            if vector.iter().filter(|&&m| m > 0).count() <= 3 {
                let r = RamificationData::from_class_multiplicities(
                    g,
                    vector.iter().enumerate().map(|(c, &m)| (c, m)),
                );
                out.push(Instance::new(spec, &r.to_text()));
            }
            // odometer over {0,1,2}^k
            let Some(i) = vector.iter().position(|&m| m < 2) else {
                break;
            };
            vector[i] += 1;
            vector[..i].iter_mut().for_each(|m| *m = 0);
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub errors: usize,
    pub checks: usize,
    pub disagreements: usize,
    pub ibn_oracle_runs: usize,
    pub ibn_decisive: usize,
    pub skipped: usize,
}

impl SweepSummary {
    pub fn ibn_decisive_fraction(&self) -> f64 {
        if self.ibn_oracle_runs == 0 {
            1.0
        } else {
            self.ibn_decisive as f64 / self.ibn_oracle_runs as f64
        }
    }
}

pub fn summarize<'a>(
    results: impl IntoIterator<Item = &'a Result<InstanceResult, Error>>,
) -> SweepSummary {
    let mut s = SweepSummary::default();
    for r in results {
        s.instances += 1;
        match r {
            Ok(r) => {
                s.checks += r.cross_check.checks.len();
                s.disagreements += r.cross_check.disagreements().count();
                s.skipped += r.cross_check.skipped.len();
                if let Some(v) = r.ibn_verdict {
                    s.ibn_oracle_runs += 1;
                    s.ibn_decisive += usize::from(v != IbnVerdict::Unknown);
                }
            }
            Err(_) => s.errors += 1,
        }
    }
    s
}

/// Aggregate sweep report: summary, per-instance reports and counterexamples.
pub fn sweep_json(results: &[Result<InstanceResult, Error>], instances: &[Instance]) -> Value {
    let summary = summarize(results);
    let per_instance: Vec<Value> = results
        .iter()
        .zip(instances)
        .map(|(r, inst)| match r {
            Ok(r) => r.to_json(),
            Err(e) => json!({ "group": inst.group, "ramification": inst.ramification, "error": e.to_string() }),
        })
        .collect();
    let counterexamples: Vec<Value> = results
        .iter()
        .filter_map(|r| r.as_ref().ok().and_then(|r| r.counterexample()))
        .collect();
    json!({
        "summary": summary,
        "instances": per_instance,
        "counterexamples": counterexamples,
    })
}
