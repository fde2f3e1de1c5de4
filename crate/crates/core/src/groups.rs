//! Ambient groups: finite groups stored as validated Cayley tables, and the
//! integer group handled symbolically.
//!
//! Every finite family (cyclic, symmetric, dihedral, direct products, tables
//! loaded from JSON) ends up as the same [`FiniteGroup`] value; the family is
//! only remembered so that element literals can be parsed in the notation
//! users expect.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the order of a finite group (7!).
pub const DEFAULT_MAX_ORDER: usize = 5040;

/// Largest degree accepted for `symmetric:N`.
pub const MAX_SYMMETRIC_DEGREE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group spec: {reason}")]
    InvalidSpec {
        spec: String,
        reason: String,
        offset: usize,
        len: usize,
    },
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the configured cap of {cap}")]
    SizeLimit { order: usize, cap: usize },
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
}

impl GroupError {
    fn spec(spec: &str, reason: impl Into<String>, offset: usize, len: usize) -> Self {
        GroupError::InvalidSpec {
            spec: spec.to_string(),
            reason: reason.into(),
            offset,
            len: len.max(1),
        }
    }

    /// Byte range of the offending part of the spec, when known.
    pub fn span(&self) -> Option<(usize, usize)> {
        match *self {
            GroupError::InvalidSpec { offset, len, .. } => Some((offset, len)),
            _ => None,
        }
    }
}

/// How a finite group was built; drives element-literal parsing.
#[derive(Debug, Clone)]
enum Family {
    Trivial,
    Cyclic,
    Symmetric { degree: usize, perms: Vec<Vec<u8>> },
    Dihedral { n: usize },
    Product(Arc<FiniteGroup>, Arc<FiniteGroup>),
    Table,
}

/// A conjugacy class of a finite group, members sorted by element index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// A set of group elements (sorted indices) together with the elements it
/// was generated from, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub members: Vec<usize>,
    pub generator_witnesses: Vec<usize>,
}

impl Subgroup {
    /// Wraps an arbitrary element set without checking closure.
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup {
            members,
            generator_witnesses: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    spec: String,
    family: Family,
    names: Vec<String>,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    name_index: HashMap<String, usize>,
}

/// JSON form of a Cayley table file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableDocument {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from an explicit table, running every group-axiom check
    /// (associativity included, which is cubic in the order).
    pub fn from_table(
        spec: &str,
        names: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::InvalidTable(
                "a group needs at least one element".into(),
            ));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::InvalidTable(format!("table must be {n}x{n}")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            for &x in row {
                if x >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {x} out of range 0..{n}"
                    )));
                }
                flat.push(x as u32);
            }
        }
        Self::assemble(spec, Family::Table, names, flat, true)
    }

    /// Loads `{"names": [...], "table": [[...]]}` from disk.
    pub fn from_table_file(path: &Path, max_order: usize) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            GroupError::InvalidTable(format!("cannot read {}: {e}", path.display()))
        })?;
        let doc: TableDocument = serde_json::from_str(&text)
            .map_err(|e| GroupError::InvalidTable(format!("{}: {e}", path.display())))?;
        if doc.names.len() > max_order {
            return Err(GroupError::SizeLimit {
                order: doc.names.len(),
                cap: max_order,
            });
        }
        Self::from_table(&format!("table:{}", path.display()), doc.names, doc.table)
    }

    fn assemble(
        spec: &str,
        family: Family,
        names: Vec<String>,
        table: Vec<u32>,
        check_associativity: bool,
    ) -> Result<Self, GroupError> {
        let n = names.len();
        let mut name_index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name_index.insert(name.clone(), i).is_some() {
                return Err(GroupError::InvalidTable(format!(
                    "duplicate element name `{name}`"
                )));
            }
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;

        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| {
                    GroupError::InvalidTable(format!("element `{}` has no inverse", names[x]))
                })?;
            inverses[x] = inv;
        }

        if check_associativity {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::InvalidTable(format!(
                                "not associative at ({}, {}, {})",
                                names[a], names[b], names[c]
                            )));
                        }
                    }
                }
            }
        }

        let mut group = FiniteGroup {
            spec: spec.to_string(),
            family,
            names,
            table,
            identity,
            inverses,
            classes: Vec::new(),
            class_of: Vec::new(),
            name_index,
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for g in 0..n {
                let y = self.conjugate(g, x);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: members[0],
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g⁻¹`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, ordered by smallest member; each representative is
    /// the smallest member of its class.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) of the class containing `x`.
    pub fn class_index_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_of(&self, x: usize) -> &ConjugacyClass {
        &self.classes[self.class_of[x]]
    }

    /// Table rows as nested vectors, in the JSON table-file layout.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n)
            .map(|a| (0..n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Least subgroup containing `gens`, by right multiplication closure from
    /// the identity with generators and their inverses.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Subgroup {
        let mut steps: Vec<usize> = gens.iter().flat_map(|&g| [g, self.inv(g)]).collect();
        steps.sort_unstable();
        steps.dedup();
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &s in &steps {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        let mut witnesses = gens.to_vec();
        witnesses.sort_unstable();
        witnesses.dedup();
        Subgroup {
            members: (0..self.order()).filter(|&x| seen[x]).collect(),
            generator_witnesses: witnesses,
        }
    }

    /// Verifies that `h` contains the identity and is closed under product
    /// and inverse.
    pub fn check_subgroup(&self, h: &Subgroup) -> Result<(), GroupError> {
        if h.members.iter().any(|&x| x >= self.order()) {
            return Err(GroupError::NotASubgroup(
                "element index out of range".into(),
            ));
        }
        if !h.contains(self.identity) {
            return Err(GroupError::NotASubgroup("missing the identity".into()));
        }
        for &a in &h.members {
            if !h.contains(self.inv(a)) {
                return Err(GroupError::NotASubgroup(format!(
                    "not closed under inverse at {}",
                    self.name(a)
                )));
            }
            for &b in &h.members {
                if !h.contains(self.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!(
                        "not closed under product at ({}, {})",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive check that `g H g⁻¹ = H` for every `g`.
    pub fn is_normal(&self, h: &Subgroup) -> Result<bool, GroupError> {
        self.check_subgroup(h)?;
        Ok(self
            .elements()
            .all(|g| h.members.iter().all(|&x| h.contains(self.conjugate(g, x)))))
    }

    /// `[G : H]`
    pub fn coset_count(&self, h: &Subgroup) -> Result<usize, GroupError> {
        self.check_subgroup(h)?;
        let (n, m) = (self.order(), h.order());
        assert_eq!(n % m, 0, "Lagrange violated: {m} does not divide {n}");
        Ok(n / m)
    }

    /// Parses an element literal in the notation of the group's family,
    /// falling back to exact display names.
    pub fn parse_element(&self, text: &str) -> Result<usize, String> {
        let t = text.trim();
        if let Some(&i) = self.name_index.get(t) {
            return Ok(i);
        }
        let parsed = match &self.family {
            Family::Trivial => match t {
                "1" | "e" | "id" | "1_G" | "()" => Ok(0),
                _ => Err(format!("`{t}` is not the identity of the trivial group")),
            },
            Family::Cyclic => t
                .parse::<i64>()
                .map(|k| k.rem_euclid(self.order() as i64) as usize)
                .map_err(|_| format!("`{t}` is not an integer residue")),
            Family::Symmetric { degree, perms } => parse_permutation(t, *degree).and_then(|p| {
                perms
                    .iter()
                    .position(|q| *q == p)
                    .ok_or_else(|| format!("`{t}` is not in the group"))
            }),
            Family::Dihedral { n } => parse_dihedral_word(t, *n).map(|(i, j)| i + n * j),
            Family::Product(a, b) => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| format!("`{t}` is not a pair `(x,y)`"))?;
                let split =
                    top_level_comma(inner).ok_or_else(|| format!("`{t}` is not a pair `(x,y)`"))?;
                let x = a.parse_element(&inner[..split])?;
                let y = b.parse_element(&inner[split + 1..])?;
                Ok(x * b.order() + y)
            }
            Family::Table => Err(format!("no element named `{t}`")),
        };
        parsed
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.spec, self.order())
    }
}

/// Either a finite group or the integers.
#[derive(Debug, Clone)]
pub enum AmbientGroup {
    Finite(Arc<FiniteGroup>),
    Integers,
}

impl AmbientGroup {
    pub fn spec(&self) -> &str {
        match self {
            AmbientGroup::Finite(g) => g.spec(),
            AmbientGroup::Integers => "integers",
        }
    }

    pub fn as_finite(&self) -> Option<&Arc<FiniteGroup>> {
        match self {
            AmbientGroup::Finite(g) => Some(g),
            AmbientGroup::Integers => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AmbientGroup::Finite(_))
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            AmbientGroup::Finite(g) => g.is_abelian(),
            AmbientGroup::Integers => true,
        }
    }
}

/// Parses a group spec (`trivial`, `cyclic:N`, `symmetric:N`, `dihedral:N`,
/// `product(A,B)`, `table:FILE`, or `integers`).
pub fn parse_group(spec: &str, max_order: usize) -> Result<AmbientGroup, GroupError> {
    match spec.trim() {
        "integers" | "Z" | "ℤ" | "int" => Ok(AmbientGroup::Integers),
        _ => build_finite_group(spec, max_order).map(|g| AmbientGroup::Finite(Arc::new(g))),
    }
}

/// Builds a finite group from a family descriptor.
pub fn build_finite_group(spec: &str, max_order: usize) -> Result<FiniteGroup, GroupError> {
    let lead = spec.len() - spec.trim_start().len();
    let body = spec.trim();
    build_at(spec, body, lead, max_order)
}

fn build_at(full: &str, s: &str, offset: usize, cap: usize) -> Result<FiniteGroup, GroupError> {
    let number = |tail: &str, at: usize| -> Result<usize, GroupError> {
        tail.trim().parse::<usize>().map_err(|_| {
            GroupError::spec(
                full,
                format!("expected a positive integer, found `{tail}`"),
                at,
                tail.len(),
            )
        })
    };
    let check_cap = |order: usize| {
        if order > cap {
            Err(GroupError::SizeLimit { order, cap })
        } else {
            Ok(())
        }
    };

    if s == "trivial" {
        return cyclic(s, 1, Family::Trivial, "1_G");
    }
    if let Some(tail) = s.strip_prefix("cyclic:") {
        let at = offset + "cyclic:".len();
        let n = number(tail, at)?;
        if n == 0 {
            return Err(GroupError::spec(
                full,
                "cyclic order must be at least 1",
                at,
                tail.len(),
            ));
        }
        check_cap(n)?;
        return cyclic(s, n, Family::Cyclic, "0");
    }
    if let Some(tail) = s.strip_prefix("symmetric:") {
        let at = offset + "symmetric:".len();
        let n = number(tail, at)?;
        if !(2..=MAX_SYMMETRIC_DEGREE).contains(&n) {
            return Err(GroupError::spec(
                full,
                format!("symmetric degree must be in 2..={MAX_SYMMETRIC_DEGREE}"),
                at,
                tail.len(),
            ));
        }
        check_cap((1..=n).product())?;
        return symmetric(s, n);
    }
    if let Some(tail) = s.strip_prefix("dihedral:") {
        let at = offset + "dihedral:".len();
        let n = number(tail, at)?;
        if n < 2 {
            return Err(GroupError::spec(
                full,
                "dihedral parameter must be at least 2",
                at,
                tail.len(),
            ));
        }
        check_cap(2 * n)?;
        return dihedral(s, n);
    }
    if let Some(tail) = s.strip_prefix("table:") {
        let g = FiniteGroup::from_table_file(Path::new(tail.trim()), cap)?;
        return Ok(g);
    }
    if let Some(rest) = s.strip_prefix("product(") {
        let at = offset + "product(".len();
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| GroupError::spec(full, "missing closing `)`", offset + s.len(), 1))?;
        let split = top_level_comma(inner).ok_or_else(|| {
            GroupError::spec(
                full,
                "product needs two comma-separated factors",
                at,
                inner.len(),
            )
        })?;
        let (left, right) = (&inner[..split], &inner[split + 1..]);
        let left_lead = left.len() - left.trim_start().len();
        let right_lead = right.len() - right.trim_start().len();
        let a = build_at(full, left.trim(), at + left_lead, cap)?;
        let b = build_at(full, right.trim(), at + split + 1 + right_lead, cap)?;
        check_cap(a.order().saturating_mul(b.order()))?;
        return Ok(product(s, Arc::new(a), Arc::new(b)));
    }
    let word_len = s.find([':', '(']).unwrap_or(s.len());
    Err(GroupError::spec(
        full,
        format!(
            "unknown group family `{}` (expected trivial, cyclic:N, symmetric:N, dihedral:N, product(A,B), table:FILE or integers)",
            &s[..word_len]
        ),
        offset,
        word_len,
    ))
}

fn cyclic(
    spec: &str,
    n: usize,
    family: Family,
    identity_name: &str,
) -> Result<FiniteGroup, GroupError> {
    let names = if n == 1 {
        vec![identity_name.to_string()]
    } else {
        (0..n).map(|i| i.to_string()).collect()
    };
    let table = (0..n)
        .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32))
        .collect();
    FiniteGroup::assemble(spec, family, names, table, false)
}

fn symmetric(spec: &str, degree: usize) -> Result<FiniteGroup, GroupError> {
    let perms = permutations_lex(degree);
    let index: HashMap<&[u8], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let n = perms.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &perms {
        for b in &perms {
            // (a·b)(x) = a(b(x))
            let ab: Vec<u8> = b.iter().map(|&x| a[x as usize]).collect();
            table.push(index[ab.as_slice()] as u32);
        }
    }
    let names = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::assemble(
        spec,
        Family::Symmetric { degree, perms },
        names,
        table,
        false,
    )
}

fn dihedral(spec: &str, n: usize) -> Result<FiniteGroup, GroupError> {
    // element r^i s^j has index i + n*j
    let order = 2 * n;
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        let (i, j) = (a % n, a / n);
        for b in 0..order {
            let (k, l) = (b % n, b / n);
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            table.push((rot + n * ((j + l) % 2)) as u32);
        }
    }
    let names = (0..order)
        .map(|a| {
            let (i, j) = (a % n, a / n);
            let r = match i {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{i}"),
            };
            match (r.is_empty(), j) {
                (true, 0) => "1".to_string(),
                (_, 0) => r,
                (_, _) => format!("{r}s"),
            }
        })
        .collect();
    FiniteGroup::assemble(spec, Family::Dihedral { n }, names, table, false)
}

fn product(spec: &str, a: Arc<FiniteGroup>, b: Arc<FiniteGroup>) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let first = a.mul(x / nb, y / nb);
            let second = b.mul(x % nb, y % nb);
            table.push((first * nb + second) as u32);
        }
    }
    let names = (0..n)
        .map(|x| format!("({},{})", a.name(x / nb), b.name(x % nb)))
        .collect();
    FiniteGroup::assemble(spec, Family::Product(a, b), names, table, false)
        .expect("direct product of groups is a group")
}

/// All permutations of `0..n` in lexicographic order of one-line notation.
fn permutations_lex(n: usize) -> Vec<Vec<u8>> {
    let mut current: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![current.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

/// Compact cycle notation with 1-based points, e.g. `(123)(45)`; `id` for the identity.
fn cycle_notation(perm: &[u8]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = perm[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        "id".to_string()
    } else {
        out
    }
}

/// Parses products of cycles such as `(1 2 3)`, `(1,2)(3,4)`, `(123)`.
/// Cycles compose right to left, matching the group multiplication.
fn parse_permutation(text: &str, degree: usize) -> Result<Vec<u8>, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if matches!(t.as_str(), "id" | "e" | "1" | "()" | "") {
        return Ok((0..degree as u8).collect());
    }
    let mut perm: Vec<u8> = (0..degree as u8).collect();
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("`{text}` is not cycle notation"))?;
        let close = body
            .find(')')
            .ok_or_else(|| format!("unclosed cycle in `{text}`"))?;
        let inner = &body[..close];
        let points: Vec<usize> = if inner.contains([',', ' ']) {
            inner
                .split([',', ' '])
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| format!("bad point `{p}` in `{text}`"))
                })
                .collect::<Result<_, _>>()?
        } else {
            inner
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| format!("bad point `{c}` in `{text}`"))
                })
                .collect::<Result<_, _>>()?
        };
        if let Some(&p) = points.iter().find(|&&p| p == 0 || p > degree) {
            return Err(format!("point {p} outside 1..={degree}"));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(format!("repeated point in cycle `({inner})`"));
        }
        cycles.push(points);
        rest = body[close + 1..].trim_start();
    }
    for cycle in cycles.iter().rev() {
        let mut c: Vec<u8> = (0..degree as u8).collect();
        for w in 0..cycle.len() {
            c[cycle[w] - 1] = (cycle[(w + 1) % cycle.len()] - 1) as u8;
        }
        // perm := c ∘ perm (later cycles act first)
        perm = perm.iter().map(|&x| c[x as usize]).collect();
    }
    Ok(perm)
}

/// Parses a word in `r`, `s` (optionally with `^k` exponents) into `(i, j)`
/// with the element equal to `r^i s^j`.
fn parse_dihedral_word(text: &str, n: usize) -> Result<(usize, usize), String> {
    let t: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
        .collect();
    if matches!(t.as_str(), "1" | "e" | "id") {
        return Ok((0, 0));
    }
    let (mut i, mut j) = (0usize, 0usize);
    let chars: Vec<char> = t.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let letter = chars[pos];
        if letter != 'r' && letter != 's' {
            return Err(format!("`{text}` is not a word in r and s"));
        }
        pos += 1;
        let mut exp: i64 = 1;
        if pos < chars.len() && chars[pos] == '^' {
            pos += 1;
            let start = pos;
            if pos < chars.len() && chars[pos] == '-' {
                pos += 1;
            }
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            let digits: String = chars[start..pos].iter().collect();
            exp = digits
                .parse()
                .map_err(|_| format!("bad exponent in `{text}`"))?;
        }
        // (r^i s^j) * letter^exp
        if letter == 'r' {
            let k = exp.rem_euclid(n as i64) as usize;
            i = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        } else {
            j = (j + exp.rem_euclid(2) as usize) % 2;
        }
    }
    Ok((i, j))
}

/// Byte index of the first comma at nesting depth zero.
pub(crate) fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
