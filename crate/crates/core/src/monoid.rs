//! The graph monoid `M_E`: the free commutative monoid on the vertices
//! modulo `v = Σ_{s(e)=v} r(e)` for every vertex that emits edges.
//!
//! Equality is decided by searching forward rewrites (`v ↦ Σ r(e)`) from
//! both sides. Two elements are equal in `M_E` exactly when they have a
//! common forward descendant, so a meeting point is a complete witness; the
//! search is cut off by a budget. Inequality is certified by a functional on
//! ℤ^{E⁰} that kills every relation but separates the two elements.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::hopf_graph::MultiDigraph;
use crate::lattice::{Functional, IntegerLattice};

pub type MonoidElement = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonoidBudget {
    pub max_visited: usize,
    pub max_coefficient: u32,
}

impl Default for MonoidBudget {
    fn default() -> Self {
        MonoidBudget {
            max_visited: 100_000,
            max_coefficient: 64,
        }
    }
}

pub const DEFAULT_MAX_MN: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `v ↦ Σ r(e)`
    Forward,
    /// `Σ r(e) ↦ v`
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RewriteStep {
    pub vertex: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Rewrites turning the first element into the second.
    Trace(Vec<RewriteStep>),
    Separator(Functional<BigInt>),
    Note(String),
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        match self {
            Certificate::Trace(steps) => json!({ "trace": steps }),
            Certificate::Separator(f) => functional_json(f),
            Certificate::Note(s) => json!({ "note": s }),
        }
    }
}

fn functional_json(f: &Functional<BigInt>) -> Value {
    json!({
        "functional": f.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "modulus": f.modulus.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidDecision {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

/// Relations of a finite graph, with the lattice they span in ℤ^{E⁰}.
pub struct GraphMonoid<'g> {
    graph: &'g MultiDigraph,
    /// Out-neighbour multiset of each vertex, `None` for sinks.
    images: Vec<Option<Vec<(usize, u32)>>>,
    lattice: IntegerLattice<BigInt>,
}

impl<'g> GraphMonoid<'g> {
    pub fn new(graph: &'g MultiDigraph) -> Self {
        let n = graph.vertex_count();
        let images: Vec<Option<Vec<(usize, u32)>>> = (0..n)
            .map(|v| {
                if graph.out_degree(v) == 0 {
                    return None;
                }
                let mut counts: Vec<(usize, u32)> = Vec::new();
                // successors come sorted by range
                for w in graph.successors(v) {
                    match counts.last_mut() {
                        Some((last, k)) if *last == w => *k += 1,
                        _ => counts.push((w, 1)),
                    }
                }
                Some(counts)
            })
            .collect();
        let relations = images.iter().enumerate().filter_map(|(v, img)| {
            img.as_ref().map(|img| {
                let mut row = vec![BigInt::zero(); n];
                row[v] += 1;
                for &(w, k) in img {
                    row[w] -= k;
                }
                row
            })
        });
        let lattice = IntegerLattice::from_generators(n, relations);
        GraphMonoid {
            graph,
            images,
            lattice,
        }
    }

    pub fn graph(&self) -> &MultiDigraph {
        self.graph
    }

    pub fn relation_lattice(&self) -> &IntegerLattice<BigInt> {
        &self.lattice
    }

    /// Relation vector `e_v − Σ r(e)`, or `None` at a sink.
    pub fn relation(&self, v: usize) -> Option<Vec<BigInt>> {
        self.images[v].as_ref().map(|img| {
            let mut row = vec![BigInt::zero(); self.graph.vertex_count()];
            row[v] += 1;
            for &(w, k) in img {
                row[w] -= k;
            }
            row
        })
    }

    /// Applies one step, or `None` when it does not apply to `x`.
    pub fn apply(&self, x: &[u32], step: RewriteStep) -> Option<MonoidElement> {
        let img = self.images.get(step.vertex)?.as_ref()?;
        let mut y = x.to_vec();
        match step.direction {
            Direction::Forward => {
                if y[step.vertex] == 0 {
                    return None;
                }
                y[step.vertex] -= 1;
                for &(w, k) in img {
                    y[w] += k;
                }
            }
            Direction::Backward => {
                for &(w, k) in img {
                    if y[w] < k {
                        return None;
                    }
                    y[w] -= k;
                }
                y[step.vertex] += 1;
            }
        }
        Some(y)
    }

    fn forward_steps<'a>(
        &'a self,
        x: &'a [u32],
    ) -> impl Iterator<Item = (RewriteStep, MonoidElement)> + 'a {
        (0..x.len()).filter_map(move |v| {
            let step = RewriteStep {
                vertex: v,
                direction: Direction::Forward,
            };
            self.apply(x, step).map(|y| (step, y))
        })
    }

    /// Every element one relation away from `x`, in either direction.
    pub fn one_step_rewrites(&self, x: &[u32]) -> Vec<MonoidElement> {
        let mut out: Vec<MonoidElement> = (0..x.len())
            .flat_map(|v| {
                [Direction::Forward, Direction::Backward]
                    .into_iter()
                    .filter_map(move |direction| {
                        self.apply(
                            x,
                            RewriteStep {
                                vertex: v,
                                direction,
                            },
                        )
                    })
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Runs `trace` from `x`; `None` if some step does not apply.
    pub fn replay(&self, x: &[u32], trace: &[RewriteStep]) -> Option<MonoidElement> {
        trace
            .iter()
            .try_fold(x.to_vec(), |acc, &step| self.apply(&acc, step))
    }

    /// Whether `f` vanishes (mod its modulus) on every defining relation.
    pub fn is_invariant(&self, f: &Functional<BigInt>) -> bool {
        (0..self.graph.vertex_count())
            .filter_map(|v| self.relation(v))
            .all(|rel| f.is_zero_mod(&f.evaluate(&rel)))
    }

    pub fn decide_equal(&self, x: &[u32], y: &[u32], budget: MonoidBudget) -> MonoidDecision {
        if x == y {
            return MonoidDecision {
                verdict: Verdict::Equal,
                certificate: Certificate::Trace(Vec::new()),
            };
        }
        if x > y {
            // search in a canonical orientation so verdicts are symmetric
            let mut d = self.decide_equal(y, x, budget);
            if let Certificate::Trace(t) = d.certificate {
                d.certificate = Certificate::Trace(join_traces(Vec::new(), t));
            }
            return d;
        }
        let search = self.meet(&[x.to_vec()], &[y.to_vec()], budget);
        if let SearchOutcome::Met { left, right, .. } = search {
            return MonoidDecision {
                verdict: Verdict::Equal,
                certificate: Certificate::Trace(join_traces(left, right)),
            };
        }
        let diff: Vec<BigInt> = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
            .collect();
        match self.lattice.separating_functional(&diff) {
            Some(f) => MonoidDecision {
                verdict: Verdict::NotEqual,
                certificate: Certificate::Separator(f),
            },
            None => MonoidDecision {
                verdict: Verdict::Unknown,
                certificate: Certificate::Note(match search {
                    SearchOutcome::Exhausted => {
                        "forward closures are disjoint but not separated by a functional".into()
                    }
                    _ => format!(
                        "no common descendant within {} visited elements",
                        budget.max_visited
                    ),
                }),
            },
        }
    }

    /// Forward search from two families of start elements at once; stops at
    /// the first element reachable from both.
    fn meet(
        &self,
        left: &[MonoidElement],
        right: &[MonoidElement],
        budget: MonoidBudget,
    ) -> SearchOutcome {
        let mut sides = [Frontier::new(left), Frontier::new(right)];
        for (i, start) in left.iter().enumerate() {
            if let Some(&j) = sides[1].index.get(start) {
                return SearchOutcome::Met {
                    left: sides[0].path_to(i),
                    right: sides[1].path_to(j),
                    origins: (sides[0].origin(i), sides[1].origin(j)),
                };
            }
        }
        let mut hit_budget = false;
        loop {
            let total = sides[0].nodes.len() + sides[1].nodes.len();
            if total >= budget.max_visited {
                return SearchOutcome::OutOfBudget;
            }
            // expand the smaller open side one element at a time
            let pick = match (sides[0].queue.is_empty(), sides[1].queue.is_empty()) {
                (true, true) => {
                    return if hit_budget {
                        SearchOutcome::OutOfBudget
                    } else {
                        SearchOutcome::Exhausted
                    };
                }
                (true, false) => 1,
                (false, true) => 0,
                (false, false) => usize::from(sides[1].queue.len() < sides[0].queue.len()),
            };
            let node = sides[pick].queue.pop_front().expect("side is open");
            let state = sides[pick].nodes[node].state.clone();
            for (step, next) in self.forward_steps(&state) {
                if next.iter().any(|&c| c > budget.max_coefficient) {
                    hit_budget = true;
                    continue;
                }
                if sides[pick].index.contains_key(&next) {
                    continue;
                }
                let id = sides[pick].push(next.clone(), Some((node, step)));
                if let Some(&other) = sides[1 - pick].index.get(&next) {
                    let (l, r) = if pick == 0 { (id, other) } else { (other, id) };
                    return SearchOutcome::Met {
                        left: sides[0].path_to(l),
                        right: sides[1].path_to(r),
                        origins: (sides[0].origin(l), sides[1].origin(r)),
                    };
                }
            }
        }
    }

    /// Decides whether `m·Σv = n·Σv` forces `m = n`.
    pub fn ibn_test(&self, max_mn: u32, budget: MonoidBudget) -> IbnReport {
        let n = self.graph.vertex_count();
        if self.graph.is_truncated() {
            return IbnReport::unknown("graph is a truncated window of an infinite graph");
        }
        if n == 0 {
            return IbnReport::unknown("graph has no vertices");
        }
        let sigma: Vec<BigInt> = vec![BigInt::one(); n];
        if let Some(f) = self.lattice.rational_separator(&sigma) {
            return IbnReport {
                verdict: IbnVerdict::Ibn,
                witness: None,
                separator: Some(f),
                note: None,
            };
        }
        let ones: MonoidElement = vec![1; n];
        if let Some(w) = self.expansion_probe(&ones, max_mn, budget) {
            return IbnReport::not_ibn(w);
        }
        let starts: Vec<MonoidElement> = (1..=max_mn).map(|m| vec![m; n]).collect();
        if let Some(w) = self.multiples_search(&starts, budget) {
            return IbnReport::not_ibn(w);
        }
        IbnReport::unknown(&format!(
            "no relation among m·Σv for m ≤ {max_mn} within {} visited elements",
            budget.max_visited
        ))
    }

    /// Repeatedly rewrites every vertex of `Σv` at once and watches for a
    /// multiple of `Σv`.
    fn expansion_probe(
        &self,
        ones: &[u32],
        max_mn: u32,
        budget: MonoidBudget,
    ) -> Option<IbnWitness> {
        let mut x = ones.to_vec();
        let mut trace = Vec::new();
        for _ in 0..ones.len().max(1) {
            #[allow(clippy::needless_range_loop)]
            for v in 0..x.len() {
                if self.images[v].is_none() {
                    continue;
                }
                let step = RewriteStep {
                    vertex: v,
                    direction: Direction::Forward,
                };
                for _ in 0..x[v] {
                    trace.push(step);
                }
            }
            x = self.replay(ones, &trace)?;
            if x.iter().any(|&c| c > budget.max_coefficient) {
                return None;
            }
            let k = x[0];
            if k != 1 && k <= max_mn && x.iter().all(|&c| c == k) {
                return Some(IbnWitness { m: 1, n: k, trace });
            }
        }
        None
    }

    fn multiples_search(
        &self,
        starts: &[MonoidElement],
        budget: MonoidBudget,
    ) -> Option<IbnWitness> {
        // split the multiples into two families so that any meeting point
        // relates two different ones; try every split by a bit of m
        let count = starts.len();
        let mut bit = 1usize;
        while bit < count.max(2) {
            let (left, right): (Vec<usize>, Vec<usize>) =
                (0..count).partition(|&i| (i + 1) & bit == 0);
            if !left.is_empty() && !right.is_empty() {
                let l: Vec<MonoidElement> = left.iter().map(|&i| starts[i].clone()).collect();
                let r: Vec<MonoidElement> = right.iter().map(|&i| starts[i].clone()).collect();
                let share = MonoidBudget {
                    max_visited: budget.max_visited
                        / (usize::BITS - count.leading_zeros()) as usize,
                    ..budget
                };
                if let SearchOutcome::Met {
                    left: lt,
                    right: rt,
                    origins,
                } = self.meet(&l, &r, share)
                {
                    let (a, b) = (l[origins.0][0], r[origins.1][0]);
                    let trace = join_traces(lt, rt);
                    return Some(IbnWitness { m: a, n: b, trace });
                }
            }
            bit <<= 1;
        }
        None
    }
}

enum SearchOutcome {
    Met {
        left: Vec<RewriteStep>,
        right: Vec<RewriteStep>,
        origins: (usize, usize),
    },
    Exhausted,
    OutOfBudget,
}

/// `x →* z` followed by the inverse of `y →* z`.
fn join_traces(left: Vec<RewriteStep>, right: Vec<RewriteStep>) -> Vec<RewriteStep> {
    let mut trace = left;
    trace.extend(right.into_iter().rev().map(|s| RewriteStep {
        vertex: s.vertex,
        direction: match s.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        },
    }));
    trace
}

struct Node {
    state: MonoidElement,
    parent: Option<(usize, RewriteStep)>,
    origin: usize,
}

struct Frontier {
    nodes: Vec<Node>,
    index: HashMap<MonoidElement, usize>,
    queue: VecDeque<usize>,
}

impl Frontier {
    fn new(starts: &[MonoidElement]) -> Self {
        let mut f = Frontier {
            nodes: Vec::new(),
            index: HashMap::new(),
            queue: VecDeque::new(),
        };
        for (i, s) in starts.iter().enumerate() {
            if !f.index.contains_key(s) {
                let id = f.nodes.len();
                f.nodes.push(Node {
                    state: s.clone(),
                    parent: None,
                    origin: i,
                });
                f.index.insert(s.clone(), id);
                f.queue.push_back(id);
            }
        }
        f
    }

    fn push(&mut self, state: MonoidElement, parent: Option<(usize, RewriteStep)>) -> usize {
        let id = self.nodes.len();
        let origin = parent.map_or(0, |(p, _)| self.nodes[p].origin);
        self.index.insert(state.clone(), id);
        self.nodes.push(Node {
            state,
            parent,
            origin,
        });
        self.queue.push_back(id);
        id
    }

    fn origin(&self, id: usize) -> usize {
        self.nodes[id].origin
    }

    fn path_to(&self, mut id: usize) -> Vec<RewriteStep> {
        let mut steps = Vec::new();
        while let Some((p, step)) = self.nodes[id].parent {
            steps.push(step);
            id = p;
        }
        steps.reverse();
        steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IbnVerdict {
    Ibn,
    NotIbn,
    Unknown,
}

/// `m·Σv` rewritten into `n·Σv` by `trace`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IbnWitness {
    pub m: u32,
    pub n: u32,
    pub trace: Vec<RewriteStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IbnReport {
    pub verdict: IbnVerdict,
    pub witness: Option<IbnWitness>,
    /// Functional vanishing on the relations with `f(Σv) ≠ 0`.
    pub separator: Option<Functional<BigInt>>,
    pub note: Option<String>,
}

impl IbnReport {
    fn unknown(note: &str) -> Self {
        IbnReport {
            verdict: IbnVerdict::Unknown,
            witness: None,
            separator: None,
            note: Some(note.to_string()),
        }
    }

    fn not_ibn(w: IbnWitness) -> Self {
        IbnReport {
            verdict: IbnVerdict::NotIbn,
            witness: Some(w),
            separator: None,
            note: None,
        }
    }

    pub fn is_decisive(&self) -> bool {
        self.verdict != IbnVerdict::Unknown
    }

    /// Re-checks the certificate against the graph.
    pub fn verify(&self, monoid: &GraphMonoid<'_>) -> bool {
        let n = monoid.graph().vertex_count();
        match self.verdict {
            IbnVerdict::Ibn => self.separator.as_ref().is_some_and(|f| {
                let sigma = vec![BigInt::one(); n];
                f.modulus.is_zero() && monoid.is_invariant(f) && !f.evaluate(&sigma).is_zero()
            }),
            IbnVerdict::NotIbn => self.witness.as_ref().is_some_and(|w| {
                w.m != w.n && monoid.replay(&vec![w.m; n], &w.trace) == Some(vec![w.n; n])
            }),
            IbnVerdict::Unknown => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({ "verdict": self.verdict });
        if let Some(w) = &self.witness {
            out["witness"] = json!({ "m": w.m, "n": w.n, "trace_length": w.trace.len() });
        }
        if let Some(f) = &self.separator {
            out["separator"] = functional_json(f);
        }
        if let Some(note) = &self.note {
            out["note"] = json!(note);
        }
        out
    }
}

pub fn one_step_rewrites(g: &MultiDigraph, x: &[u32]) -> Vec<MonoidElement> {
    GraphMonoid::new(g).one_step_rewrites(x)
}

pub fn decide_equal(
    g: &MultiDigraph,
    x: &[u32],
    y: &[u32],
    budget: MonoidBudget,
) -> MonoidDecision {
    GraphMonoid::new(g).decide_equal(x, y, budget)
}

pub fn ibn_test(g: &MultiDigraph, max_mn: u32, budget: MonoidBudget) -> IbnReport {
    GraphMonoid::new(g).ibn_test(max_mn, budget)
}
