//! Finite directed multigraphs presenting one-sided shift systems.
//!
//! A graph is a vertex set plus edges with source `src` and range `rng`.
//! Paths are edge sequences e1..eL with s(e_i) = r(e_(i+1)); the shift
//! deletes the first edge. The transfer matrix counts edges by (range,
//! source) and acts on vertex-indexed integer vectors.

use crate::error::{Error, Result};
use crate::exactlin::{Int, IntMatrix};
use num::Zero;
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: String,
    pub rng: String,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct DirectedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub sinks: Vec<String>,
    pub sources: Vec<String>,
    pub row_finite: bool,
}

impl ValidationReport {
    /// True when the graph supports the shift-space analysis: every vertex
    /// emits and receives at least one edge.
    pub fn is_admissible(&self) -> bool {
        self.sinks.is_empty() && self.sources.is_empty()
    }
}

/// Vertex-indexed transfer matrix: a[v][w] counts edges with range v and
/// source w. Rows and columns follow `order`, the vertex ids sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    pub order: Vec<String>,
    pub a: IntMatrix,
}

impl DirectedGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let g = DirectedGraph { vertices, edges };
        g.check()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: DirectedGraph = serde_json::from_str(text)
            .map_err(|e| Error::Structural(format!("graph json: {}", e)))?;
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::Structural(format!("duplicate vertex id {:?}", v)));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for e in &self.edges {
            if !edge_ids.insert(e.id.clone()) {
                return Err(Error::Structural(format!("duplicate edge id {:?}", e.id)));
            }
            for (end, name) in [(&e.src, "src"), (&e.rng, "rng")] {
                if !seen.contains(end) {
                    return Err(Error::Structural(format!(
                        "edge {:?} has dangling {} endpoint {:?}",
                        e.id, name, end
                    )));
                }
            }
        }
        Ok(())
    }

    /// Vertex ids in the fixed lexicographic order used by every matrix.
    pub fn sorted_vertices(&self) -> Vec<String> {
        let mut vs = self.vertices.clone();
        vs.sort();
        vs
    }

    pub fn vertex_index(&self) -> BTreeMap<String, usize> {
        self.sorted_vertices()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect()
    }

    /// Edges with source v, sorted by edge id.
    pub fn out_edges(&self, v: &str) -> Vec<&Edge> {
        let mut es: Vec<&Edge> = self.edges.iter().filter(|e| e.src == v).collect();
        es.sort_by(|a, b| a.id.cmp(&b.id));
        es
    }

    /// Edges with range v, sorted by edge id.
    pub fn in_edges(&self, v: &str) -> Vec<&Edge> {
        let mut es: Vec<&Edge> = self.edges.iter().filter(|e| e.rng == v).collect();
        es.sort_by(|a, b| a.id.cmp(&b.id));
        es
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// The graph with every edge's source and range swapped.
    pub fn reversed(&self) -> DirectedGraph {
        DirectedGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: e.id.clone(),
                    src: e.rng.clone(),
                    rng: e.src.clone(),
                })
                .collect(),
        }
    }
}

pub fn validate(g: &DirectedGraph) -> ValidationReport {
    let mut has_out: BTreeSet<&str> = BTreeSet::new();
    let mut has_in: BTreeSet<&str> = BTreeSet::new();
    for e in &g.edges {
        has_out.insert(&e.src);
        has_in.insert(&e.rng);
    }
    let vs = g.sorted_vertices();
    ValidationReport {
        sinks: vs
            .iter()
            .filter(|v| !has_out.contains(v.as_str()))
            .cloned()
            .collect(),
        sources: vs
            .iter()
            .filter(|v| !has_in.contains(v.as_str()))
            .cloned()
            .collect(),
        row_finite: true,
    }
}

/// Rejects graphs with sinks or sources, naming the offending vertices.
pub fn require_admissible(g: &DirectedGraph) -> Result<()> {
    let report = validate(g);
    if report.is_admissible() {
        return Ok(());
    }
    let mut parts = Vec::new();
    if !report.sources.is_empty() {
        parts.push(format!("sources: {}", report.sources.join(", ")));
    }
    if !report.sinks.is_empty() {
        parts.push(format!("sinks: {}", report.sinks.join(", ")));
    }
    Err(Error::Precondition(format!(
        "graph is not admissible ({})",
        parts.join("; ")
    )))
}

pub fn adjacency_transfer(g: &DirectedGraph) -> Result<TransferMatrix> {
    require_admissible(g)?;
    let order = g.sorted_vertices();
    let idx = g.vertex_index();
    let n = order.len();
    let mut a = IntMatrix::zeros(n, n);
    for e in &g.edges {
        let r = idx[&e.rng];
        let s = idx[&e.src];
        let bumped = a.get(r, s) + 1;
        a.set(r, s, bumped);
    }
    Ok(TransferMatrix { order, a })
}

/// A^n f by repeated application; n = 0 returns f unchanged.
pub fn transfer_apply(tm: &TransferMatrix, f: &[Int], n: u32) -> Result<Vec<Int>> {
    if f.len() != tm.order.len() {
        return Err(Error::Dimension(format!(
            "vector has {} coordinates, graph has {} vertices",
            f.len(),
            tm.order.len()
        )));
    }
    let mut out = f.to_vec();
    for _ in 0..n {
        out = tm.a.mul_vec(&out)?;
    }
    Ok(out)
}

/// Strongly connected components over the arrows src -> rng, as a component
/// id per sorted-vertex index. Iterative Tarjan; component ids are not
/// ordered, only equality matters.
fn components(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        call.push((start, 0));
        while let Some(&(v, child)) = call.last() {
            if child == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if child < adj[v].len() {
                call.last_mut().expect("nonempty").1 += 1;
                let w = adj[v][child];
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comp
}

/// Per-vertex flags: lies on a directed cycle. A vertex qualifies when its
/// component has two or more members or it carries a self-loop.
pub fn cycle_vertices(g: &DirectedGraph) -> BTreeSet<String> {
    let order = g.sorted_vertices();
    let idx = g.vertex_index();
    let n = order.len();
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        adj[idx[&e.src]].push(idx[&e.rng]);
    }
    let comp = components(n, &adj);
    let mut size = vec![0usize; n];
    for &c in &comp {
        if c != usize::MAX {
            size[c] += 1;
        }
    }
    let mut on_cycle = BTreeSet::new();
    for (i, v) in order.iter().enumerate() {
        if size[comp[i]] >= 2 || g.edges.iter().any(|e| e.src == *v && e.rng == *v) {
            on_cycle.insert(v.clone());
        }
    }
    on_cycle
}

/// Vertices on a cycle receiving a second incoming edge, each paired with
/// its entrance: the lowest-id incoming edge other than the chosen cycle
/// edge. Empty exactly when no cycle has an entrance.
pub fn cycles_with_entrance(g: &DirectedGraph) -> Result<Vec<(String, String)>> {
    require_admissible(g)?;
    let on_cycle = cycle_vertices(g);
    let idx = g.vertex_index();
    let order = g.sorted_vertices();
    let n = order.len();
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        adj[idx[&e.src]].push(idx[&e.rng]);
    }
    let comp = components(n, &adj);

    let mut out = Vec::new();
    for v in &order {
        if !on_cycle.contains(v) {
            continue;
        }
        let incoming = g.in_edges(v);
        if incoming.len() < 2 {
            continue;
        }
        // Lowest-id incoming edge from inside the component: it closes a
        // cycle through v, so any other incoming edge is an entrance.
        let cycle_edge = incoming
            .iter()
            .find(|e| comp[idx[&e.src]] == comp[idx[&e.rng]])
            .ok_or_else(|| {
                Error::Inconsistency(format!("cycle vertex {} has no internal in-edge", v))
            })?;
        let entrance = incoming
            .iter()
            .find(|e| e.id != cycle_edge.id)
            .expect("two incoming edges, one excluded");
        out.push((v.clone(), entrance.id.clone()));
    }
    Ok(out)
}

/// Shortest directed cycle through v as a walk of edge ids, deterministic
/// by breadth-first search with edges taken in id order. None when v lies
/// on no cycle.
pub fn shortest_cycle_through(g: &DirectedGraph, v: &str) -> Option<Vec<String>> {
    // parent[u] = edge id arriving at u on the shortest walk from v.
    let mut parent: BTreeMap<String, &Edge> = BTreeMap::new();
    let mut queue: Vec<&str> = vec![v];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for e in g.out_edges(u) {
            if e.rng == v {
                let mut walk = vec![e.id.clone()];
                let mut at = u;
                while at != v {
                    let back = parent[at];
                    walk.push(back.id.clone());
                    at = &back.src;
                }
                walk.reverse();
                return Some(walk);
            }
            if !parent.contains_key(&e.rng) && e.rng != v {
                parent.insert(e.rng.clone(), e);
                queue.push(e.rng.as_str());
            }
        }
    }
    None
}

/// Counts length-L paths without materializing them. Saturates at u128.
pub fn path_count(g: &DirectedGraph, length: usize) -> u128 {
    if length == 0 {
        return g.vertices.len() as u128;
    }
    // State after a prefix is the source vertex of its last edge; the next
    // edge must have range equal to that state.
    let idx = g.vertex_index();
    let n = idx.len();
    let mut cnt = vec![0u128; n];
    for e in &g.edges {
        cnt[idx[&e.src]] = cnt[idx[&e.src]].saturating_add(1);
    }
    for _ in 1..length {
        let mut next = vec![0u128; n];
        for e in &g.edges {
            let from = idx[&e.rng];
            let to = idx[&e.src];
            next[to] = next[to].saturating_add(cnt[from]);
        }
        cnt = next;
    }
    cnt.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// True when the vector is nonnegative and nonzero.
pub fn dominates_zero(v: &[Int]) -> bool {
    use num::Signed;
    v.iter().all(|x| !x.is_negative()) && !is_zero_vec(v)
}
