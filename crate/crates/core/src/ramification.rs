//! Ramification data: a finitely supported assignment of multiplicities to
//! conjugacy classes, written as `rep=mult` terms separated by semicolons.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{AmbientGroup, FiniteGroup};

/// Default cap on a single multiplicity.
pub const DEFAULT_MAX_MULTIPLICITY: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RamificationError {
    #[error("unknown element: {reason}")]
    UnknownElement {
        reason: String,
        offset: usize,
        len: usize,
    },
    #[error("conflicting multiplicities {first} and {second} for the class of `{class}`")]
    ConflictingMultiplicity {
        class: String,
        first: u32,
        second: u32,
        offset: usize,
        len: usize,
    },
    #[error("negative multiplicity `{value}`")]
    NegativeMultiplicity {
        value: String,
        offset: usize,
        len: usize,
    },
    #[error("ramification data must have finite support")]
    InfiniteSupport,
    #[error("malformed term: {reason}")]
    Syntax {
        reason: String,
        offset: usize,
        len: usize,
    },
    #[error("multiplicity {mult} exceeds the configured cap of {cap}")]
    MultiplicityLimit {
        mult: u64,
        cap: u32,
        offset: usize,
        len: usize,
    },
}

impl RamificationError {
    /// Byte span of the offending text in the parsed input, when known.
    pub fn span(&self) -> Option<(usize, usize)> {
        match *self {
            RamificationError::UnknownElement { offset, len, .. }
            | RamificationError::ConflictingMultiplicity { offset, len, .. }
            | RamificationError::NegativeMultiplicity { offset, len, .. }
            | RamificationError::Syntax { offset, len, .. }
            | RamificationError::MultiplicityLimit { offset, len, .. } => {
                Some((offset, len.max(1)))
            }
            RamificationError::InfiniteSupport => None,
        }
    }

    pub fn is_size_limit(&self) -> bool {
        matches!(self, RamificationError::MultiplicityLimit { .. })
    }
}

/// The union of all supported conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportSet {
    Finite(Vec<usize>),
    Integer(Vec<i64>),
}

impl SupportSet {
    pub fn is_empty(&self) -> bool {
        match self {
            SupportSet::Finite(v) => v.is_empty(),
            SupportSet::Integer(v) => v.is_empty(),
        }
    }
}

/// One row of the ramification, for display and serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationEntry {
    pub rep: String,
    pub mult: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_size: Option<u64>,
}

/// Batch-file form: `{"entries":[{"rep":"(1 2 3)","mult":1}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationDocument {
    pub entries: Vec<RamificationEntry>,
}

#[derive(Debug, Clone)]
pub enum RamificationData {
    /// Keys are conjugacy-class indices of the group.
    Finite {
        group: Arc<FiniteGroup>,
        entries: BTreeMap<usize, u32>,
    },
    /// Keys are integers (every class of ℤ is a singleton).
    Integer { entries: BTreeMap<i64, u32> },
}

impl RamificationData {
    pub fn zero(group: &AmbientGroup) -> Self {
        match group {
            AmbientGroup::Finite(g) => RamificationData::Finite {
                group: g.clone(),
                entries: BTreeMap::new(),
            },
            AmbientGroup::Integers => RamificationData::Integer {
                entries: BTreeMap::new(),
            },
        }
    }

    /// Builds from `(class index, multiplicity)` pairs, dropping zeros.
    pub fn from_class_multiplicities(
        group: &Arc<FiniteGroup>,
        mults: impl IntoIterator<Item = (usize, u32)>,
    ) -> Self {
        let entries = mults
            .into_iter()
            .filter(|&(c, m)| {
                assert!(
                    c < group.conjugacy_classes().len(),
                    "class index out of range"
                );
                m > 0
            })
            .collect();
        RamificationData::Finite {
            group: group.clone(),
            entries,
        }
    }

    pub fn from_integer_multiplicities(mults: impl IntoIterator<Item = (i64, u32)>) -> Self {
        RamificationData::Integer {
            entries: mults.into_iter().filter(|&(_, m)| m > 0).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RamificationData::Finite { entries, .. } => entries.is_empty(),
            RamificationData::Integer { entries } => entries.is_empty(),
        }
    }

    /// `Σ_C r_C·|C|`, the common in- and out-degree of every vertex of the
    /// Hopf graph. Always finite because supports are finite.
    pub fn degree_sum(&self) -> u64 {
        match self {
            RamificationData::Finite { group, entries } => entries
                .iter()
                .map(|(&c, &m)| m as u64 * group.conjugacy_classes()[c].len() as u64)
                .sum(),
            RamificationData::Integer { entries } => entries.values().map(|&m| m as u64).sum(),
        }
    }

    pub fn support_elements(&self) -> SupportSet {
        match self {
            RamificationData::Finite { group, entries } => {
                let mut v: Vec<usize> = entries
                    .keys()
                    .flat_map(|&c| group.conjugacy_classes()[c].members.iter().copied())
                    .collect();
                v.sort_unstable();
                SupportSet::Finite(v)
            }
            RamificationData::Integer { entries } => {
                SupportSet::Integer(entries.keys().copied().collect())
            }
        }
    }

    /// Multiplicity of the class containing finite element `x`.
    pub fn multiplicity_of_element(&self, x: usize) -> u32 {
        match self {
            RamificationData::Finite { group, entries } => {
                entries.get(&group.class_index_of(x)).copied().unwrap_or(0)
            }
            RamificationData::Integer { .. } => panic!("element index on integer ramification"),
        }
    }

    /// `(element, multiplicity)` for every element of the support, sorted.
    pub fn finite_steps(&self) -> Vec<(usize, u32)> {
        match self {
            RamificationData::Finite { group, entries } => {
                let mut v: Vec<(usize, u32)> = entries
                    .iter()
                    .flat_map(|(&c, &m)| {
                        group.conjugacy_classes()[c]
                            .members
                            .iter()
                            .map(move |&x| (x, m))
                    })
                    .collect();
                v.sort_unstable();
                v
            }
            RamificationData::Integer { .. } => panic!("finite_steps on integer ramification"),
        }
    }

    pub fn integer_steps(&self) -> Vec<(i64, u32)> {
        match self {
            RamificationData::Integer { entries } => {
                entries.iter().map(|(&k, &m)| (k, m)).collect()
            }
            RamificationData::Finite { .. } => panic!("integer_steps on finite ramification"),
        }
    }

    pub fn entries(&self) -> Vec<RamificationEntry> {
        match self {
            RamificationData::Finite { group, entries } => entries
                .iter()
                .map(|(&c, &m)| {
                    let class = &group.conjugacy_classes()[c];
                    RamificationEntry {
                        rep: group.name(class.representative).to_string(),
                        mult: m,
                        class_size: Some(class.len() as u64),
                    }
                })
                .collect(),
            RamificationData::Integer { entries } => entries
                .iter()
                .map(|(&k, &m)| RamificationEntry {
                    rep: k.to_string(),
                    mult: m,
                    class_size: Some(1),
                })
                .collect(),
        }
    }

    /// Canonical `rep=mult; ...` text, which parses back to an equal value.
    pub fn to_text(&self) -> String {
        self.entries()
            .iter()
            .map(|e| format!("{}={}", e.rep, e.mult))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl PartialEq for RamificationData {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                RamificationData::Finite {
                    group: a,
                    entries: x,
                },
                RamificationData::Finite {
                    group: b,
                    entries: y,
                },
            ) => (Arc::ptr_eq(a, b) || a.spec() == b.spec()) && x == y,
            (
                RamificationData::Integer { entries: x },
                RamificationData::Integer { entries: y },
            ) => x == y,
            _ => false,
        }
    }
}

impl Eq for RamificationData {}

/// Parses `rep=mult; rep=mult; ...`. Each term assigns `mult` to the whole
/// conjugacy class of `rep`; the empty string is the zero ramification.
pub fn parse_ramification(
    group: &AmbientGroup,
    text: &str,
    max_multiplicity: u32,
) -> Result<RamificationData, RamificationError> {
    let mut terms = Vec::new();
    let mut start = 0;
    for piece in text.split(';') {
        let offset = start;
        start += piece.len() + 1;
        if piece.trim().is_empty() {
            continue;
        }
        let Some(eq) = piece.rfind('=') else {
            let lead = piece.len() - piece.trim_start().len();
            return Err(RamificationError::Syntax {
                reason: "expected `rep=mult`".into(),
                offset: offset + lead,
                len: piece.trim().len(),
            });
        };
        let rep = &piece[..eq];
        let mult = &piece[eq + 1..];
        let rep_lead = rep.len() - rep.trim_start().len();
        let mult_lead = mult.len() - mult.trim_start().len();
        terms.push(Term {
            rep: rep.trim(),
            rep_offset: offset + rep_lead,
            mult: mult.trim(),
            mult_offset: offset + eq + 1 + mult_lead,
        });
    }
    build(group, &terms, max_multiplicity)
}

/// Reads the JSON batch form.
pub fn parse_ramification_document(
    group: &AmbientGroup,
    doc: &RamificationDocument,
    max_multiplicity: u32,
) -> Result<RamificationData, RamificationError> {
    let mults: Vec<String> = doc.entries.iter().map(|e| e.mult.to_string()).collect();
    let terms: Vec<Term> = doc
        .entries
        .iter()
        .zip(&mults)
        .map(|(e, m)| Term {
            rep: e.rep.as_str(),
            rep_offset: 0,
            mult: m.as_str(),
            mult_offset: 0,
        })
        .collect();
    build(group, &terms, max_multiplicity)
}

struct Term<'a> {
    rep: &'a str,
    rep_offset: usize,
    mult: &'a str,
    mult_offset: usize,
}

fn build(
    group: &AmbientGroup,
    terms: &[Term<'_>],
    cap: u32,
) -> Result<RamificationData, RamificationError> {
    let mut finite: BTreeMap<usize, (u32, &str)> = BTreeMap::new();
    let mut integer: BTreeMap<i64, (u32, &str)> = BTreeMap::new();
    for term in terms {
        let mult = parse_multiplicity(term, cap)?;
        let conflict = |first: u32, class: &str| RamificationError::ConflictingMultiplicity {
            class: class.to_string(),
            first,
            second: mult,
            offset: term.rep_offset,
            len: term.rep.len(),
        };
        match group {
            AmbientGroup::Finite(g) => {
                let x = g.parse_element(term.rep).map_err(|reason| {
                    RamificationError::UnknownElement {
                        reason,
                        offset: term.rep_offset,
                        len: term.rep.len(),
                    }
                })?;
                let class = g.class_index_of(x);
                match finite.get(&class) {
                    Some(&(first, _)) if first != mult => {
                        return Err(conflict(
                            first,
                            g.name(g.conjugacy_classes()[class].representative),
                        ))
                    }
                    _ => {
                        finite.insert(class, (mult, term.rep));
                    }
                }
            }
            AmbientGroup::Integers => {
                let k = term
                    .rep
                    .parse::<i64>()
                    .map_err(|_| RamificationError::UnknownElement {
                        reason: format!("`{}` is not an integer", term.rep),
                        offset: term.rep_offset,
                        len: term.rep.len(),
                    })?;
                match integer.get(&k) {
                    Some(&(first, _)) if first != mult => {
                        return Err(conflict(first, &k.to_string()))
                    }
                    _ => {
                        integer.insert(k, (mult, term.rep));
                    }
                }
            }
        }
    }
    Ok(match group {
        AmbientGroup::Finite(g) => RamificationData::from_class_multiplicities(
            g,
            finite.into_iter().map(|(c, (m, _))| (c, m)),
        ),
        AmbientGroup::Integers => RamificationData::from_integer_multiplicities(
            integer.into_iter().map(|(k, (m, _))| (k, m)),
        ),
    })
}

fn parse_multiplicity(term: &Term<'_>, cap: u32) -> Result<u32, RamificationError> {
    let text = term.mult;
    let value: i128 = text.parse().map_err(|_| RamificationError::Syntax {
        reason: format!("multiplicity `{text}` is not an integer"),
        offset: term.mult_offset,
        len: text.len(),
    })?;
    if value < 0 {
        return Err(RamificationError::NegativeMultiplicity {
            value: text.to_string(),
            offset: term.mult_offset,
            len: text.len(),
        });
    }
    if value > cap as i128 {
        return Err(RamificationError::MultiplicityLimit {
            mult: value.min(u64::MAX as i128) as u64,
            cap,
            offset: term.mult_offset,
            len: text.len(),
        });
    }
    Ok(value as u32)
}
