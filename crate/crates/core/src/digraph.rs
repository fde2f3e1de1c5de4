//! Direct graph-theoretic analyses of finite multigraphs: components,
//! strongly connected components, cycles and exits, chains of cycles,
//! hereditary saturated closures and maximal sinks/cycles.

use std::collections::VecDeque;

use serde::Serialize;

use crate::cardinal::Cardinal;
use crate::hopf_graph::MultiDigraph;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("the graph has no vertices")]
pub struct EmptyGraph;

/// Components of the underlying undirected graph, each sorted, ordered by
/// smallest vertex.
pub fn connected_components(g: &MultiDigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.range));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Vec::new());
        }
        out[slot[root]].push(v);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    /// Sorted vertex lists; ids follow the smallest vertex.
    pub components: Vec<Vec<usize>>,
    /// Sorted, deduplicated successor ids in the condensation.
    pub condensation: Vec<Vec<usize>>,
    /// Whether the component carries an edge inside itself.
    pub has_cycle: Vec<bool>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Component ids in a topological order of the condensation.
    pub fn topological_order(&self) -> Vec<usize> {
        let k = self.len();
        let mut indegree = vec![0usize; k];
        for succ in &self.condensation {
            for &t in succ {
                indegree[t] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..k).filter(|&c| indegree[c] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for &t in &self.condensation[c] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        debug_assert_eq!(order.len(), k, "condensation is acyclic");
        order
    }

    /// Number of out-edges of `v` staying inside its own component.
    fn inner_out_degree(&self, g: &MultiDigraph, v: usize) -> usize {
        let c = self.component_of[v];
        g.successors(v)
            .filter(|&w| self.component_of[w] == c)
            .count()
    }

    /// Whether the component is exactly one cycle: every vertex has a single
    /// out-edge inside it.
    pub fn is_single_cycle(&self, g: &MultiDigraph, c: usize) -> bool {
        self.has_cycle[c]
            && self.components[c]
                .iter()
                .all(|&v| self.inner_out_degree(g, v) == 1)
    }
}

/// Tarjan's algorithm without recursion.
pub fn scc(g: &MultiDigraph) -> SccDecomposition {
    let n = g.vertex_count();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut raw_of = vec![UNSEEN; n];
    let mut raw_count = 0usize;
    let mut counter = 0usize;
    // (vertex, position in its out-edge list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let out = g.out_edges(v);
            if *pos < out.len() {
                let w = g.edge(out[*pos]).range;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component");
                    on_stack[w] = false;
                    raw_of[w] = raw_count;
                    if w == v {
                        break;
                    }
                }
                raw_count += 1;
            }
        }
    }

    // renumber by smallest vertex
    let mut renumber = vec![UNSEEN; raw_count];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for (v, &r) in raw_of.iter().enumerate() {
        if renumber[r] == UNSEEN {
            renumber[r] = components.len();
            components.push(Vec::new());
        }
        components[renumber[r]].push(v);
    }
    let component_of: Vec<usize> = raw_of.iter().map(|&r| renumber[r]).collect();
    let k = components.len();
    let mut condensation = vec![Vec::new(); k];
    let mut has_cycle = vec![false; k];
    for e in g.edges() {
        let (a, b) = (component_of[e.source], component_of[e.range]);
        if a == b {
            has_cycle[a] = true;
        } else {
            condensation[a].push(b);
        }
    }
    for succ in condensation.iter_mut() {
        succ.sort_unstable();
        succ.dedup();
    }
    SccDecomposition {
        component_of,
        components,
        condensation,
        has_cycle,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SinksSources {
    pub sinks: Vec<usize>,
    pub sources: Vec<usize>,
    pub regular: Vec<usize>,
}

pub fn sinks_sources(g: &MultiDigraph) -> SinksSources {
    let n = g.vertex_count();
    SinksSources {
        sinks: (0..n).filter(|&v| g.out_degree(v) == 0).collect(),
        sources: (0..n).filter(|&v| g.in_degree(v) == 0).collect(),
        regular: (0..n).filter(|&v| g.out_degree(v) > 0).collect(),
    }
}

pub fn has_cycle(g: &MultiDigraph) -> bool {
    scc(g).has_cycle.iter().any(|&c| c)
}

/// Whether some cycle passes only through vertices of out-degree one.
pub fn exitless_cycle_exists(g: &MultiDigraph) -> bool {
    let n = g.vertex_count();
    let next = |v: usize| -> Option<usize> {
        (g.out_degree(v) == 1).then(|| g.edge(g.out_edges(v)[0]).range)
    };
    // 0 = unvisited, 1 = on the current walk, 2 = done
    let mut state = vec![0u8; n];
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            match state[v] {
                1 => return true,
                2 => break,
                _ => {}
            }
            state[v] = 1;
            walk.push(v);
            match next(v) {
                Some(w) => v = w,
                None => break,
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub exc_holds: bool,
    /// Longest chain of cycles; infinite when EXC fails.
    pub d1: Cardinal,
    /// Longest chain of cycles whose last cycle has an exit.
    pub d2: Cardinal,
}

impl ChainReport {
    /// `max(2·d1 − 1, 2·d2)`, infinite when EXC fails.
    pub fn gk_dimension(&self) -> Cardinal {
        match (self.d1, self.d2) {
            (Cardinal::Finite(d1), Cardinal::Finite(d2)) if self.exc_holds => {
                Cardinal::Finite((2 * d1).saturating_sub(1).max(2 * d2))
            }
            _ => Cardinal::Infinite,
        }
    }
}

pub fn exc_and_chains(g: &MultiDigraph) -> ChainReport {
    let d = scc(g);
    let exc_holds = (0..d.len())
        .filter(|&c| d.has_cycle[c])
        .all(|c| d.is_single_cycle(g, c));
    if !exc_holds {
        return ChainReport {
            exc_holds,
            d1: Cardinal::Infinite,
            d2: Cardinal::Infinite,
        };
    }
    let has_exit = |c: usize| d.components[c].iter().any(|&v| g.out_degree(v) > 1);
    // longest chain of cycle components ending at each component
    let mut ending = vec![0u64; d.len()];
    let (mut d1, mut d2) = (0u64, 0u64);
    for c in d.topological_order() {
        if d.has_cycle[c] {
            ending[c] += 1;
            d1 = d1.max(ending[c]);
            if has_exit(c) {
                d2 = d2.max(ending[c]);
            }
        }
        for &t in &d.condensation[c] {
            ending[t] = ending[t].max(ending[c]);
        }
    }
    ChainReport {
        exc_holds,
        d1: Cardinal::Finite(d1),
        d2: Cardinal::Finite(d2),
    }
}

/// Smallest hereditary saturated set containing `seed`, as a sorted list.
pub fn hs_closure(g: &MultiDigraph, seed: &[usize]) -> Vec<usize> {
    let mask = hs_closure_mask(g, seed);
    (0..g.vertex_count()).filter(|&v| mask[v]).collect()
}

fn hs_closure_mask(g: &MultiDigraph, seed: &[usize]) -> Vec<bool> {
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    // out-edges of v whose range is not yet inside
    let mut remaining: Vec<usize> = (0..n).map(|v| g.out_degree(v)).collect();
    let mut queue: Vec<usize> = Vec::new();
    for &v in seed {
        if !inside[v] {
            inside[v] = true;
            queue.push(v);
        }
    }
    while let Some(w) = queue.pop() {
        for u in g.successors(w) {
            if !inside[u] {
                inside[u] = true;
                queue.push(u);
            }
        }
        for v in g.predecessors(w) {
            remaining[v] -= 1;
            if remaining[v] == 0 && !inside[v] {
                inside[v] = true;
                queue.push(v);
            }
        }
    }
    inside
}

/// Whether `∅` and the whole vertex set are the only hereditary saturated
/// subsets.
pub fn only_trivial_hs(g: &MultiDigraph) -> Result<bool, EmptyGraph> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(EmptyGraph);
    }
    // closure({v}) contains closure({w}) whenever v reaches w, so the
    // terminal components decide
    let d = scc(g);
    Ok((0..d.len())
        .filter(|&c| d.condensation[c].is_empty())
        .all(|c| hs_closure_mask(g, &d.components[c][..1]).iter().all(|&x| x)))
}

/// Whether some sink has no cycle above it, or some cycle has no other
/// cycle above it.
pub fn maximal_sink_or_cycle(g: &MultiDigraph) -> bool {
    let d = scc(g);
    // cycle_above[c]: some cycle component strictly reaches c
    let mut cycle_above = vec![false; d.len()];
    for c in d.topological_order() {
        let pass = cycle_above[c] || d.has_cycle[c];
        for &t in &d.condensation[c] {
            cycle_above[t] |= pass;
        }
    }
    (0..d.len()).any(|c| {
        if cycle_above[c] {
            return false;
        }
        let is_sink = d.components[c].len() == 1 && g.out_degree(d.components[c][0]) == 0;
        is_sink || d.is_single_cycle(g, c)
    })
}
