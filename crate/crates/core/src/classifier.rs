//! Closed-form classification of `L_K(Γ_{G,𝔯})` from the semigroup data and
//! the degree sum `Σ 𝔯_C|C|`.

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::cardinal::Cardinal;
use crate::groups::AmbientGroup;
use crate::ramification::RamificationData;
use crate::semigroup::{analyze, SemigroupReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GkClass {
    Zero,
    One,
    Infinite,
}

impl GkClass {
    pub fn from_cardinal(c: Cardinal) -> Option<GkClass> {
        match c {
            Cardinal::Finite(0) => Some(GkClass::Zero),
            Cardinal::Finite(1) => Some(GkClass::One),
            Cardinal::Infinite => Some(GkClass::Infinite),
            Cardinal::Finite(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StableRank {
    One,
    Two,
    Infinite,
}

impl Serialize for StableRank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StableRank::One => s.serialize_u8(1),
            StableRank::Two => s.serialize_u8(2),
            StableRank::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

/// A value, or a marker that no rule covers the case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Applicable<T> {
    Value(T),
    NotApplicable,
}

impl<T: Copy> Applicable<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Applicable::Value(v) => Some(v),
            Applicable::NotApplicable => None,
        }
    }
}

impl<T: Serialize> Serialize for Applicable<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Applicable::Value(v) => v.serialize(s),
            Applicable::NotApplicable => s.serialize_str("NOT_APPLICABLE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub component_count: Cardinal,
    pub scc_count_delta: Cardinal,
    pub gk_dim: GkClass,
    pub stable_rank: StableRank,
    pub purely_infinite_simple: bool,
    pub simple: Applicable<bool>,
    pub has_fd_rep: bool,
    pub fd_category: Option<String>,
    pub ibn: Applicable<bool>,
    pub ugn: Applicable<bool>,
    pub lpa_structure: Option<String>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("classification serializes");
        for key in ["fd_category", "lpa_structure"] {
            if v[key].is_null() {
                v[key] = json!("NONE");
            }
        }
        v
    }
}

pub fn gk_dimension(sg: &SemigroupReport, sum: u64) -> GkClass {
    match (sg.is_submonoid, sum) {
        (true, s) if s >= 2 => GkClass::Infinite,
        (true, 1) => GkClass::One,
        _ => GkClass::Zero,
    }
}

pub fn purely_infinite_simple(sg: &SemigroupReport, sum: u64) -> bool {
    sg.equals_whole_group && sum >= 2
}

/// Simplicity for finite `G` and `𝔯 ≠ 0`; not covered otherwise.
pub fn simplicity_finite(group: &AmbientGroup, sg: &SemigroupReport, sum: u64) -> Applicable<bool> {
    if group.is_finite() && sum > 0 {
        Applicable::Value(purely_infinite_simple(sg, sum))
    } else {
        Applicable::NotApplicable
    }
}

pub fn stable_rank(sg: &SemigroupReport, sum: u64) -> StableRank {
    if !sg.is_submonoid {
        StableRank::One
    } else if sum >= 2 && sg.is_subgroup && !sg.s_order().is_infinite() {
        StableRank::Infinite
    } else {
        StableRank::Two
    }
}

fn coset_descriptor(group: &AmbientGroup, sg: &SemigroupReport) -> String {
    match (group, sg.coset_count_delta0) {
        (AmbientGroup::Finite(_), Cardinal::Finite(n)) => n.to_string(),
        (AmbientGroup::Integers, Cardinal::Finite(d)) => format!("ℤ/{d}ℤ"),
        (_, Cardinal::Infinite) => "ℤ".to_string(),
    }
}

fn group_size_descriptor(group: &AmbientGroup) -> String {
    match group {
        AmbientGroup::Finite(g) => g.order().to_string(),
        AmbientGroup::Integers => "ℤ".to_string(),
    }
}

/// Whether a nonzero finite-dimensional representation exists, with the
/// category of such representations.
pub fn fd_representations(
    group: &AmbientGroup,
    sg: &SemigroupReport,
    sum: u64,
) -> (bool, Option<String>) {
    if sum == 0 {
        (true, Some("(M_K^fd)^(G)".to_string()))
    } else if sum == 1 && sg.is_submonoid {
        let cosets = coset_descriptor(group, sg);
        let category = match group {
            AmbientGroup::Finite(_) => format!("(M_{{K[x,x⁻¹]}}^fd)^({cosets} cosets)"),
            AmbientGroup::Integers => format!("(M_{{K[x,x⁻¹]}}^fd)^({cosets})"),
        };
        (true, Some(category))
    } else {
        (false, None)
    }
}

/// IBN and UGN for finite `G`: both hold exactly when the degree sum is ≤ 1.
pub fn ibn_ugn_finite(group: &AmbientGroup, sum: u64) -> (Applicable<bool>, Applicable<bool>) {
    if group.is_finite() {
        (Applicable::Value(sum <= 1), Applicable::Value(sum <= 1))
    } else {
        (Applicable::NotApplicable, Applicable::NotApplicable)
    }
}

pub fn lpa_structure(group: &AmbientGroup, sg: &SemigroupReport, sum: u64) -> String {
    let cosets = coset_descriptor(group, sg);
    if sum == 0 {
        format!("K^({})", group_size_descriptor(group))
    } else if sum == 1 && sg.is_submonoid {
        format!("M_{}(K[x,x⁻¹])^({cosets})", sg.s_order())
    } else {
        format!("L_K(Δ)^({cosets})")
    }
}

pub fn classify_with(
    group: &AmbientGroup,
    r: &RamificationData,
    sg: &SemigroupReport,
) -> Classification {
    let sum = r.degree_sum();
    let (has_fd_rep, fd_category) = fd_representations(group, sg, sum);
    let (ibn, ugn) = ibn_ugn_finite(group, sum);
    let pis = purely_infinite_simple(sg, sum);
    Classification {
        component_count: sg.coset_count_delta0,
        scc_count_delta: sg.scc_count_delta,
        gk_dim: gk_dimension(sg, sum),
        stable_rank: stable_rank(sg, sum),
        purely_infinite_simple: pis,
        simple: match simplicity_finite(group, sg, sum) {
            Applicable::NotApplicable if pis => Applicable::Value(true),
            other => other,
        },
        has_fd_rep,
        fd_category,
        ibn,
        ugn,
        lpa_structure: Some(lpa_structure(group, sg, sum)),
    }
}

pub fn classify(group: &AmbientGroup, r: &RamificationData) -> (SemigroupReport, Classification) {
    let sg = analyze(group, r);
    let cls = classify_with(group, r, &sg);
    (sg, cls)
}

/// One line per verdict with the rule that produced it, for text output.
pub fn explain(cls: &Classification, sg: &SemigroupReport, sum: u64) -> Vec<String> {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let applicable = |a: Applicable<bool>| match a {
        Applicable::Value(b) => yes_no(b).to_string(),
        Applicable::NotApplicable => "not applicable".to_string(),
    };
    let submonoid = if sg.is_submonoid {
        "S is a submonoid"
    } else {
        "S is not a submonoid"
    };
    let gk = match cls.gk_dim {
        GkClass::Zero => "0",
        GkClass::One => "1",
        GkClass::Infinite => "∞",
    };
    let sr = match cls.stable_rank {
        StableRank::One => "1 [S is not a submonoid]",
        StableRank::Two => "2 [S is a submonoid but not a finite subgroup with degree sum ≥ 2]",
        StableRank::Infinite => "∞ [S is a finite subgroup and the degree sum is ≥ 2]",
    };
    vec![
        format!("degree sum = {sum}"),
        format!("connected components = {} [index of ⟨S⟩]", cls.component_count),
        format!("strongly connected components of Δ = {} [index of the units of S in ⟨S⟩, or |⟨S⟩| if S has no identity]", cls.scc_count_delta),
        format!("GK dimension = {gk} [degree sum {sum}, {submonoid}]"),
        format!("stable rank = {sr}"),
        format!("purely infinite simple = {} [S = G and degree sum ≥ 2]", yes_no(cls.purely_infinite_simple)),
        format!("simple = {} [same criterion, finite G with nonzero ramification]", applicable(cls.simple)),
        format!(
            "finite-dimensional representations = {} [ramification zero, or degree sum 1 with S a submonoid]",
            yes_no(cls.has_fd_rep)
        ),
        format!("fd category = {}", cls.fd_category.as_deref().unwrap_or("none")),
        format!("IBN = {} [finite G, degree sum ≤ 1]", applicable(cls.ibn)),
        format!("UGN = {} [finite G, degree sum ≤ 1]", applicable(cls.ugn)),
        format!("Leavitt path algebra ≅ {}", cls.lpa_structure.as_deref().unwrap_or("none")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{parse_group, DEFAULT_MAX_ORDER};
    use crate::ramification::{parse_ramification, DEFAULT_MAX_MULTIPLICITY};

    fn run(group: &str, r: &str) -> Classification {
        let g = parse_group(group, DEFAULT_MAX_ORDER).unwrap();
        let r = parse_ramification(&g, r, DEFAULT_MAX_MULTIPLICITY).unwrap();
        classify(&g, &r).1
    }

    #[test]
    fn s3_rotations() {
        let c = run("symmetric:3", "(1 2 3)=1");
        assert_eq!(c.component_count, Cardinal::Finite(2));
        assert_eq!(c.gk_dim, GkClass::Infinite);
        assert_eq!(c.stable_rank, StableRank::Infinite);
        assert!(!c.purely_infinite_simple);
        assert_eq!(c.simple, Applicable::Value(false));
        assert_eq!(c.lpa_structure.as_deref(), Some("L_K(Δ)^(2)"));
        assert_eq!(c.ibn, Applicable::Value(false));
    }

    #[test]
    fn s3_transpositions() {
        let c = run("symmetric:3", "(1 2)=1");
        assert!(c.purely_infinite_simple);
        assert_eq!(c.simple, Applicable::Value(true));
        assert_eq!((c.has_fd_rep, c.fd_category.as_deref()), (false, None));
        assert_eq!(c.stable_rank, StableRank::Infinite);
    }

    #[test]
    fn integers() {
        let c = run("integers", "0=1; 2=1");
        assert_eq!(c.component_count, Cardinal::Finite(2));
        assert_eq!(c.gk_dim, GkClass::Infinite);
        assert_eq!(c.stable_rank, StableRank::Two);
        assert!(!c.purely_infinite_simple && !c.has_fd_rep);
        assert_eq!(c.simple, Applicable::NotApplicable);
        assert_eq!(c.lpa_structure.as_deref(), Some("L_K(Δ)^(ℤ/2ℤ)"));

        let c = run("integers", "2=1;3=1");
        assert_eq!((c.gk_dim, c.stable_rank), (GkClass::Zero, StableRank::One));
        assert_eq!(c.ibn, Applicable::NotApplicable);

        let c = run("integers", "1=1;-1=1");
        assert!(c.purely_infinite_simple);
        assert_eq!(c.simple, Applicable::Value(true));
        assert_eq!(c.stable_rank, StableRank::Two);
    }

    #[test]
    fn trivial_group_roses() {
        let c = run("trivial", "1_G=1");
        assert_eq!(c.gk_dim, GkClass::One);
        assert_eq!(c.stable_rank, StableRank::Two);
        assert!(c.has_fd_rep);
        assert_eq!(c.lpa_structure.as_deref(), Some("M_1(K[x,x⁻¹])^(1)"));
        assert!(run("trivial", "1_G=3").purely_infinite_simple);
    }

    #[test]
    fn single_cycles() {
        let c = run("cyclic:6", "2=1");
        assert_eq!(
            c.fd_category.as_deref(),
            Some("(M_{K[x,x⁻¹]}^fd)^(2 cosets)")
        );
        assert_eq!(c.lpa_structure.as_deref(), Some("M_3(K[x,x⁻¹])^(2)"));
        assert_eq!(run("cyclic:4", "1=1").simple, Applicable::Value(false));
    }

    #[test]
    fn zero_ramification() {
        let c = run("symmetric:3", "");
        assert_eq!(c.lpa_structure.as_deref(), Some("K^(6)"));
        assert_eq!((c.gk_dim, c.stable_rank), (GkClass::Zero, StableRank::One));
        assert_eq!(
            (c.has_fd_rep, c.ibn, c.ugn),
            (true, Applicable::Value(true), Applicable::Value(true))
        );
        assert_eq!(c.fd_category.as_deref(), Some("(M_K^fd)^(G)"));
        assert_eq!(c.simple, Applicable::NotApplicable);
    }

    #[test]
    fn json_uses_markers() {
        let v = run("symmetric:3", "(1 2)=1").to_json();
        assert_eq!(v["fd_category"], "NONE");
        assert_eq!(v["stable_rank"], "INFINITE");
        assert_eq!(v["gk_dim"], "INFINITE");
        let v = run("integers", "2=1").to_json();
        assert_eq!(v["ibn"], "NOT_APPLICABLE");
        assert_eq!(v["stable_rank"], 1);
    }
}
