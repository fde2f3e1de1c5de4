//! Directed multigraphs and the Hopf graph constructions on top of them.
//!
//! `Γ` has the group elements as vertices and, for each supported class `C`
//! and each `c ∈ C`, `𝔯_C` parallel edges `x → x·c`. `Δ` is the component of
//! the identity (induced on `⟨S⟩`), `Λ` the subgraph induced on the units of
//! `S`. Over ℤ only finite windows `[-n, n]` can be materialized.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::groups::{AmbientGroup, FiniteGroup};
use crate::ramification::RamificationData;
use crate::semigroup::{SemigroupReport, SubgroupDescriptor};

pub const DEFAULT_MAX_EDGES: u64 = 1_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph would have {edges} edges, above the cap of {cap}")]
    SizeLimit { edges: u64, cap: u64 },
    #[error("edge {index} references vertex {vertex}, but the graph has {vertex_count} vertices")]
    VertexOutOfRange {
        index: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("edge ({from}, {to}, {tag}) appears twice")]
    DuplicateEdge { from: usize, to: usize, tag: u32 },
    #[error("a window over ℤ was requested for a finite group")]
    WindowOnFiniteGroup,
}

/// One edge; `tag` tells parallel edges with the same endpoints apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub range: usize,
    pub tag: u32,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    #[serde(default)]
    truncated: bool,
}

/// Finite directed multigraph with labelled vertices. Edges are kept sorted
/// by `(source, range, tag)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphDocument", try_from = "GraphDocument")]
pub struct MultiDigraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    truncated: bool,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl From<MultiDigraph> for GraphDocument {
    fn from(g: MultiDigraph) -> Self {
        GraphDocument {
            vertices: g.labels,
            edges: g.edges,
            truncated: g.truncated,
        }
    }
}

impl TryFrom<GraphDocument> for MultiDigraph {
    type Error = GraphError;

    fn try_from(doc: GraphDocument) -> Result<Self, GraphError> {
        let mut g = MultiDigraph::new(doc.vertices, doc.edges)?;
        g.truncated = doc.truncated;
        Ok(g)
    }
}

impl MultiDigraph {
    pub fn new(labels: Vec<String>, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        let n = labels.len();
        for (index, e) in edges.iter().enumerate() {
            for vertex in [e.source, e.range] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange {
                        index,
                        vertex,
                        vertex_count: n,
                    });
                }
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let e = w[0];
            return Err(GraphError::DuplicateEdge {
                from: e.source,
                to: e.range,
                tag: e.tag,
            });
        }
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.source].push(i);
            in_edges[e.range].push(i);
        }
        Ok(MultiDigraph {
            labels,
            edges,
            truncated: false,
            out_edges,
            in_edges,
        })
    }

    /// Builds a graph on vertices `0..n` labelled by their index, tagging
    /// parallel edges in order of appearance.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen: HashMap<(usize, usize), u32> = HashMap::new();
        let edges = pairs
            .iter()
            .map(|&(source, range)| {
                let tag = seen.entry((source, range)).or_insert(0);
                *tag += 1;
                Edge {
                    source,
                    range,
                    tag: *tag,
                }
            })
            .collect();
        MultiDigraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_edges[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_edges[v].len()
    }

    /// Ranges of the out-edges of `v`, with multiplicity.
    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges[v].iter().map(|&e| self.edges[e].range)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.in_edges[v].iter().map(|&e| self.edges[e].source)
    }

    /// Set for finite windows of infinite graphs; global analyses must not
    /// be trusted on such graphs.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Checks that the adjacency lists describe exactly the edge list.
    pub fn audit(&self) -> Result<(), String> {
        let mut out_count = vec![0usize; self.vertex_count()];
        let mut in_count = vec![0usize; self.vertex_count()];
        for (v, list) in self.out_edges.iter().enumerate() {
            for &e in list {
                if self.edges[e].source != v {
                    return Err(format!("edge {e} listed as leaving {v}"));
                }
                out_count[v] += 1;
            }
        }
        for (v, list) in self.in_edges.iter().enumerate() {
            for &e in list {
                if self.edges[e].range != v {
                    return Err(format!("edge {e} listed as entering {v}"));
                }
                in_count[v] += 1;
            }
        }
        let mut expect_out = vec![0usize; self.vertex_count()];
        let mut expect_in = vec![0usize; self.vertex_count()];
        for e in &self.edges {
            expect_out[e.source] += 1;
            expect_in[e.range] += 1;
        }
        if out_count != expect_out || in_count != expect_in {
            return Err("adjacency counts disagree with the edge list".into());
        }
        if self.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err("edge list is not strictly sorted".into());
        }
        Ok(())
    }

    /// Subgraph induced on `vertices` (given in the order the new indices
    /// should follow).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> MultiDigraph {
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let edges = vertices
            .iter()
            .flat_map(|&v| self.out_edges[v].iter().map(|&e| self.edges[e]))
            .filter(|e| position[e.range] != usize::MAX)
            .map(|e| Edge {
                source: position[e.source],
                range: position[e.range],
                tag: e.tag,
            })
            .collect();
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let mut g = MultiDigraph::new(labels, edges).expect("induced edges are valid");
        g.truncated = self.truncated;
        g
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Graphviz rendering; one arrow per edge, parallel edges repeated.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
        if self.truncated {
            writeln!(out, "  comment=\"TRUNCATED\";").unwrap();
        }
        for (v, label) in self.labels.iter().enumerate() {
            writeln!(out, "  n{v} [label=\"{}\"];", escape(label)).unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  n{} -> n{};", e.source, e.range).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn check_edge_cap(vertices: u64, sum: u64, cap: u64) -> Result<(), GraphError> {
    let edges = vertices.saturating_mul(sum);
    if edges > cap {
        return Err(GraphError::SizeLimit { edges, cap });
    }
    Ok(())
}

/// `Γ_{G,𝔯}` for a finite group; vertex `i` is element `i`.
pub fn build_gamma(
    group: &FiniteGroup,
    r: &RamificationData,
    max_edges: u64,
) -> Result<MultiDigraph, GraphError> {
    check_edge_cap(group.order() as u64, r.degree_sum(), max_edges)?;
    let steps = r.finite_steps();
    let mut edges = Vec::new();
    for x in group.elements() {
        for &(c, mult) in &steps {
            let y = group.mul(x, c);
            edges.extend((1..=mult).map(|tag| Edge {
                source: x,
                range: y,
                tag,
            }));
        }
    }
    MultiDigraph::new(group.names().to_vec(), edges)
}

/// The part of the ℤ Hopf graph with both endpoints in `[-n, n]`.
pub fn build_window(r: &RamificationData, n: u32) -> MultiDigraph {
    let n = i64::from(n);
    let steps = r.integer_steps();
    if let Some(&(c, _)) = steps.iter().find(|(c, _)| c.abs() > n) {
        log::warn!("support element {c} lies outside the window [-{n}, {n}]");
    }
    let mut edges = Vec::new();
    for k in -n..=n {
        for &(c, mult) in &steps {
            let target = k + c;
            if (-n..=n).contains(&target) {
                let (source, range) = ((k + n) as usize, (target + n) as usize);
                edges.extend((1..=mult).map(|tag| Edge { source, range, tag }));
            }
        }
    }
    let labels = (-n..=n).map(|k| k.to_string()).collect();
    let mut g = MultiDigraph::new(labels, edges).expect("window edges are valid");
    g.truncated = true;
    g
}

/// A materialized subgraph with, for each of its vertices, the index of the
/// corresponding vertex of `Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: MultiDigraph,
    pub parent_vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgraphView {
    Graph(Subgraph),
    /// The one-vertex graph with no edges, not anchored at any element.
    Trivial,
    /// Infinite subgraph that was not windowed.
    Symbolic(String),
}

impl SubgraphView {
    pub fn as_graph(&self) -> Option<&Subgraph> {
        match self {
            SubgraphView::Graph(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfGraphBundle {
    /// `None` for ℤ without a window.
    pub gamma: Option<MultiDigraph>,
    pub delta: SubgraphView,
    pub lambda: SubgraphView,
}

fn induced(gamma: &MultiDigraph, vertices: Vec<usize>) -> Subgraph {
    Subgraph {
        graph: gamma.induced_subgraph(&vertices),
        parent_vertices: vertices,
    }
}

/// Builds `Γ`, `Δ` and `Λ`. For ℤ, `window` selects a finite rendering.
pub fn build_delta_lambda(
    group: &AmbientGroup,
    r: &RamificationData,
    sg: &SemigroupReport,
    window: Option<u32>,
    max_edges: u64,
) -> Result<HopfGraphBundle, GraphError> {
    match group {
        AmbientGroup::Finite(g) => {
            if window.is_some() {
                return Err(GraphError::WindowOnFiniteGroup);
            }
            let gamma = build_gamma(g, r, max_edges)?;
            let delta0 = sg.delta0.as_finite().expect("finite group has finite Δ⁰");
            let delta = SubgraphView::Graph(induced(&gamma, delta0.members.clone()));
            let lambda = match &sg.lambda0 {
                Some(l) => SubgraphView::Graph(induced(
                    &gamma,
                    l.as_finite()
                        .expect("finite group has finite Λ⁰")
                        .members
                        .clone(),
                )),
                None => SubgraphView::Trivial,
            };
            Ok(HopfGraphBundle {
                gamma: Some(gamma),
                delta,
                lambda,
            })
        }
        AmbientGroup::Integers => {
            let lambda_modulus = sg.lambda0.as_ref().map(|l| match l {
                SubgroupDescriptor::Multiples { modulus } => *modulus,
                SubgroupDescriptor::Finite(_) => unreachable!("ℤ has no finite descriptor"),
            });
            let delta_modulus = match sg.delta0 {
                SubgroupDescriptor::Multiples { modulus } => modulus,
                SubgroupDescriptor::Finite(_) => unreachable!("ℤ has no finite descriptor"),
            };
            let Some(n) = window else {
                let describe = |m: u64| match m {
                    0 => "the subgraph on {0}".to_string(),
                    1 => "all of Γ".to_string(),
                    m => format!("the subgraph on {m}ℤ"),
                };
                return Ok(HopfGraphBundle {
                    gamma: None,
                    delta: SubgraphView::Symbolic(describe(delta_modulus)),
                    lambda: match lambda_modulus {
                        Some(m) => SubgraphView::Symbolic(describe(m)),
                        None => SubgraphView::Trivial,
                    },
                });
            };
            check_edge_cap(2 * u64::from(n) + 1, r.degree_sum(), max_edges)?;
            let gamma = build_window(r, n);
            let multiples_of = |m: u64| -> Vec<usize> {
                let n = i64::from(n);
                (-n..=n)
                    .filter(|&k| {
                        if m == 0 {
                            k == 0
                        } else {
                            k.rem_euclid(m as i64) == 0
                        }
                    })
                    .map(|k| (k + n) as usize)
                    .collect()
            };
            let delta = SubgraphView::Graph(induced(&gamma, multiples_of(delta_modulus)));
            let lambda = match lambda_modulus {
                Some(m) => SubgraphView::Graph(induced(&gamma, multiples_of(m))),
                None => SubgraphView::Trivial,
            };
            Ok(HopfGraphBundle {
                gamma: Some(gamma),
                delta,
                lambda,
            })
        }
    }
}
