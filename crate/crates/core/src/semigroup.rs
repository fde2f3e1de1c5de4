//! The subsemigroup `S` generated by the support of a ramification, the
//! subgroup `⟨S⟩` it generates and the group of units of `S`.
//!
//! Finite groups are handled by exhaustive closure. For the integers the
//! decisions are number-theoretic: a finitely generated subsemigroup of ℤ
//! with generators of both signs is `gcd·ℤ`, and otherwise it is a
//! (possibly shifted) numerical semigroup.

use num_integer::Integer;
use serde_json::{json, Value};

use crate::cardinal::Cardinal;
use crate::groups::{AmbientGroup, FiniteGroup, Subgroup};
use crate::ramification::{RamificationData, SupportSet};

/// Subsemigroup of ℤ generated by a finite set of integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSemigroup {
    generators: Vec<i64>,
}

impl IntegerSemigroup {
    pub fn new(mut generators: Vec<i64>) -> Self {
        generators.sort_unstable();
        generators.dedup();
        IntegerSemigroup { generators }
    }

    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    fn has_positive(&self) -> bool {
        self.generators.iter().any(|&g| g > 0)
    }

    fn has_negative(&self) -> bool {
        self.generators.iter().any(|&g| g < 0)
    }

    pub fn is_submonoid(&self) -> bool {
        self.generators.contains(&0) || (self.has_positive() && self.has_negative())
    }

    pub fn is_subgroup(&self) -> bool {
        let only_zero = !self.generators.is_empty() && self.generators.iter().all(|&g| g == 0);
        only_zero || (self.has_positive() && self.has_negative())
    }

    /// `d` with `⟨S⟩ = d·ℤ`; zero when `⟨S⟩ = {0}`.
    pub fn modulus(&self) -> u64 {
        self.generators
            .iter()
            .fold(0i64, |acc, &g| acc.gcd(&g))
            .unsigned_abs()
    }

    /// Exact membership test.
    pub fn contains(&self, n: i64) -> bool {
        if self.generators.is_empty() {
            return false;
        }
        if self.has_positive() && self.has_negative() {
            let d = self.modulus() as i64;
            return n % d == 0;
        }
        if n == 0 {
            return self.generators.contains(&0);
        }
        let sign = if self.has_positive() { 1 } else { -1 };
        if n.signum() != sign {
            return false;
        }
        let gens: Vec<u64> = self
            .generators
            .iter()
            .filter(|&&g| g != 0)
            .map(|&g| g.unsigned_abs())
            .collect();
        if gens.is_empty() {
            return false;
        }
        numerical_semigroup_contains(&gens, n.unsigned_abs())
    }
}

/// Whether `n ≥ 1` is a sum of (one or more) elements of `gens` (all ≥ 1).
fn numerical_semigroup_contains(gens: &[u64], n: u64) -> bool {
    let d = gens.iter().fold(0u64, |acc, &g| acc.gcd(&g));
    if !n.is_multiple_of(d) {
        return false;
    }
    let reduced: Vec<u64> = gens.iter().map(|&g| g / d).collect();
    let m = n / d;
    let (lo, hi) = (
        *reduced.iter().min().unwrap(),
        *reduced.iter().max().unwrap(),
    );
    // Schur's bound: every integer beyond (lo-1)(hi-1)-1 is representable
    let bound = (lo - 1) * (hi - 1);
    if m >= bound {
        return true;
    }
    let mut reachable = vec![false; m as usize + 1];
    reachable[0] = true;
    for v in 1..=m as usize {
        reachable[v] = reduced
            .iter()
            .any(|&g| g as usize <= v && reachable[v - g as usize]);
    }
    reachable[m as usize]
}

/// `(is_submonoid, is_subgroup, modulus of ⟨S⟩)` for a subsemigroup of ℤ.
pub fn integer_semigroup_flags(gens: &[i64]) -> (bool, bool, u64) {
    let s = IntegerSemigroup::new(gens.to_vec());
    (s.is_submonoid(), s.is_subgroup(), s.modulus())
}

/// Closure of `gens` under the group product (words of length ≥ 1).
pub fn semigroup_closure_finite(group: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    let mut queue: Vec<usize> = Vec::new();
    for &g in gens {
        if !seen[g] {
            seen[g] = true;
            queue.push(g);
        }
    }
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    group.elements().filter(|&x| seen[x]).collect()
}

/// Largest subgroup inside a product-closed set `s`, or `None` when `s`
/// does not contain the identity (the unit group is then the trivial graph's
/// single anonymous vertex).
pub fn unit_group(group: &FiniteGroup, s: &[usize]) -> Option<Subgroup> {
    let contains = |x: usize| s.binary_search(&x).is_ok();
    if !contains(group.identity()) {
        return None;
    }
    Some(Subgroup::from_members(
        s.iter()
            .copied()
            .filter(|&x| contains(group.inv(x)))
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemigroupMembers {
    Finite(Vec<usize>),
    Integer(IntegerSemigroup),
}

/// A subgroup of the ambient group: explicit for finite groups, `d·ℤ` for
/// the integers (`d = 0` meaning `{0}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupDescriptor {
    Finite(Subgroup),
    Multiples { modulus: u64 },
}

impl SubgroupDescriptor {
    pub fn order(&self) -> Cardinal {
        match self {
            SubgroupDescriptor::Finite(h) => h.order().into(),
            SubgroupDescriptor::Multiples { modulus: 0 } => Cardinal::Finite(1),
            SubgroupDescriptor::Multiples { .. } => Cardinal::Infinite,
        }
    }

    pub fn as_finite(&self) -> Option<&Subgroup> {
        match self {
            SubgroupDescriptor::Finite(h) => Some(h),
            SubgroupDescriptor::Multiples { .. } => None,
        }
    }

    fn to_json(&self, group: &AmbientGroup) -> Value {
        match self {
            SubgroupDescriptor::Finite(h) => {
                let g = group
                    .as_finite()
                    .expect("finite subgroup of a finite group");
                json!(h.members.iter().map(|&x| g.name(x)).collect::<Vec<_>>())
            }
            SubgroupDescriptor::Multiples { modulus: 0 } => json!("{0}"),
            SubgroupDescriptor::Multiples { modulus: 1 } => json!("ℤ"),
            SubgroupDescriptor::Multiples { modulus } => json!(format!("{modulus}ℤ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupReport {
    pub s_members: SemigroupMembers,
    pub is_submonoid: bool,
    pub is_subgroup: bool,
    pub equals_whole_group: bool,
    /// `⟨S⟩`, the vertex set of Δ.
    pub delta0: SubgroupDescriptor,
    /// Units of `S`, the vertex set of Λ; `None` is the trivial-graph marker.
    pub lambda0: Option<SubgroupDescriptor>,
    pub delta0_is_normal: bool,
    /// Reported `true` for the trivial-graph marker.
    pub lambda0_is_normal: bool,
    pub coset_count_delta0: Cardinal,
    pub scc_count_delta: Cardinal,
}

impl SemigroupReport {
    /// `|S|`, when finite.
    pub fn s_order(&self) -> Cardinal {
        match &self.s_members {
            SemigroupMembers::Finite(v) => v.len().into(),
            SemigroupMembers::Integer(s) => {
                if s.generators().iter().all(|&g| g == 0) {
                    Cardinal::Finite(if s.generators().is_empty() { 0 } else { 1 })
                } else {
                    Cardinal::Infinite
                }
            }
        }
    }

    pub fn to_json(&self, group: &AmbientGroup) -> Value {
        let s_members = match &self.s_members {
            SemigroupMembers::Finite(v) => {
                let g = group
                    .as_finite()
                    .expect("finite semigroup of a finite group");
                json!(v.iter().map(|&x| g.name(x)).collect::<Vec<_>>())
            }
            SemigroupMembers::Integer(s) => json!({ "generated_by": s.generators() }),
        };
        json!({
            "s_members": s_members,
            "is_submonoid": self.is_submonoid,
            "is_subgroup": self.is_subgroup,
            "equals_whole_group": self.equals_whole_group,
            "delta0": self.delta0.to_json(group),
            "lambda0": match &self.lambda0 {
                Some(l) => l.to_json(group),
                None => json!("TRIVIAL"),
            },
            "delta0_is_normal": self.delta0_is_normal,
            "lambda0_is_normal": self.lambda0_is_normal,
            "coset_count_delta0": self.coset_count_delta0,
            "scc_count_delta": self.scc_count_delta,
        })
    }
}

/// Computes `S`, `⟨S⟩`, the units of `S` and the derived counts.
pub fn analyze(group: &AmbientGroup, r: &RamificationData) -> SemigroupReport {
    match (group, r.support_elements()) {
        (AmbientGroup::Finite(g), SupportSet::Finite(support)) => analyze_finite(g, &support),
        (AmbientGroup::Integers, SupportSet::Integer(support)) => analyze_integers(&support),
        _ => panic!("ramification data does not belong to {}", group.spec()),
    }
}

fn analyze_finite(g: &FiniteGroup, support: &[usize]) -> SemigroupReport {
    let s = semigroup_closure_finite(g, support);
    let contains = |x: usize| s.binary_search(&x).is_ok();
    let is_submonoid = contains(g.identity());
    let is_subgroup = is_submonoid && s.iter().all(|&x| contains(g.inv(x)));
    let delta0 = g.generated_subgroup(support);
    let lambda0 = unit_group(g, &s);
    let delta0_is_normal = g
        .is_normal(&delta0)
        .expect("generated subgroup is a subgroup");
    let lambda0_is_normal = lambda0
        .as_ref()
        .map(|l| g.is_normal(l).expect("unit group is a subgroup"))
        .unwrap_or(true);
    let cosets = g
        .coset_count(&delta0)
        .expect("generated subgroup is a subgroup");
    let scc_count = match &lambda0 {
        Some(l) if is_submonoid => delta0.order() / l.order(),
        _ => delta0.order(),
    };
    SemigroupReport {
        equals_whole_group: s.len() == g.order(),
        s_members: SemigroupMembers::Finite(s),
        is_submonoid,
        is_subgroup,
        delta0: SubgroupDescriptor::Finite(delta0),
        lambda0: lambda0.map(SubgroupDescriptor::Finite),
        delta0_is_normal,
        lambda0_is_normal,
        coset_count_delta0: cosets.into(),
        scc_count_delta: scc_count.into(),
    }
}

fn analyze_integers(support: &[i64]) -> SemigroupReport {
    let s = IntegerSemigroup::new(support.to_vec());
    let (is_submonoid, is_subgroup, d) = (s.is_submonoid(), s.is_subgroup(), s.modulus());
    let lambda0 = match (is_submonoid, is_subgroup) {
        (false, _) => None,
        (true, true) => Some(SubgroupDescriptor::Multiples { modulus: d }),
        (true, false) => Some(SubgroupDescriptor::Multiples { modulus: 0 }),
    };
    let scc_count = if d == 0 || is_subgroup {
        Cardinal::Finite(1)
    } else {
        Cardinal::Infinite
    };
    SemigroupReport {
        s_members: SemigroupMembers::Integer(s),
        is_submonoid,
        is_subgroup,
        equals_whole_group: is_subgroup && d == 1,
        delta0: SubgroupDescriptor::Multiples { modulus: d },
        lambda0,
        delta0_is_normal: true,
        lambda0_is_normal: true,
        coset_count_delta0: if d == 0 {
            Cardinal::Infinite
        } else {
            Cardinal::Finite(d)
        },
        scc_count_delta: scc_count,
    }
}
