//! Layered directed graphs and their induced posets.
//!
//! A layered graph assigns each vertex a non-negative level; in a valid graph
//! every edge drops the level by exactly one. Ordering a graph by "u is above
//! v when a directed path runs from u to v" turns it into a poset whose order
//! homology drives everything else in this crate.
//!
//! Graphs are immutable after construction. Construction rejects malformed
//! input (duplicate ids, duplicate edges, unknown endpoints); violations of
//! the layered condition itself are not rejected but reported by
//! [`LayeredGraph::validate`], so that the CLI can show them.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poset::FinitePoset;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex id must be non-empty")]
    EmptyId,
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("edge endpoint {0:?} is not a declared vertex")]
    UnknownVertex(String),
    #[error("duplicate edge ({0:?}, {1:?})")]
    DuplicateEdge(String, String),
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Opaque handle to a vertex of one particular graph. Handles index the
/// canonical vertex order — ascending (level, id) — and are only meaningful
/// for the graph that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub(crate) usize);

impl Vertex {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A violation of the layered condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub tail: String,
    pub head: String,
    pub tail_level: u32,
    pub head_level: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edge {} -> {} goes from level {} to level {} (must drop exactly 1)",
            self.tail, self.head, self.tail_level, self.head_level
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Uniformity verdict; failing tails are vertices whose successor sets are
/// not connected by common lower covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformReport {
    pub uniform: bool,
    pub failing_tails: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalReport {
    pub vertices: Vec<Vertex>,
    pub all_level_zero: bool,
    pub unique: bool,
}

#[derive(Debug, Clone)]
pub struct LayeredGraph {
    ids: Vec<String>,
    levels: Vec<u32>,
    lookup: HashMap<String, usize>,
    /// Edges as (tail, head) index pairs, sorted.
    edges: Vec<(usize, usize)>,
    edge_set: HashSet<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    /// reach[u * n + v] == true iff a directed path u -> v exists.
    reach: Vec<bool>,
    height: u32,
    violations: Vec<Violation>,
}

impl LayeredGraph {
    /// Builds a graph from (id, level) pairs and id edges.
    pub fn new(
        vertices: Vec<(String, u32)>,
        edges: Vec<(String, String)>,
    ) -> Result<Self, GraphError> {
        let mut sorted = vertices;
        let mut seen = HashSet::new();
        for (id, _) in &sorted {
            if id.is_empty() {
                return Err(GraphError::EmptyId);
            }
            if !seen.insert(id.clone()) {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        sorted.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        let n = sorted.len();
        let ids: Vec<String> = sorted.iter().map(|(id, _)| id.clone()).collect();
        let levels: Vec<u32> = sorted.iter().map(|&(_, l)| l).collect();
        let lookup: HashMap<String, usize> =
            ids.iter().enumerate().map(|(k, id)| (id.clone(), k)).collect();

        let mut edge_set = HashSet::new();
        let mut edge_list = Vec::with_capacity(edges.len());
        for (t, h) in &edges {
            let ti = *lookup.get(t).ok_or_else(|| GraphError::UnknownVertex(t.clone()))?;
            let hi = *lookup.get(h).ok_or_else(|| GraphError::UnknownVertex(h.clone()))?;
            if !edge_set.insert((ti, hi)) {
                return Err(GraphError::DuplicateEdge(t.clone(), h.clone()));
            }
            edge_list.push((ti, hi));
        }
        edge_list.sort_unstable();

        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(t, h) in &edge_list {
            succ[t].push(h);
            pred[h].push(t);
        }

        let violations = edge_list
            .iter()
            .filter(|&&(t, h)| levels[t] != levels[h] + 1)
            .map(|&(t, h)| Violation {
                tail: ids[t].clone(),
                head: ids[h].clone(),
                tail_level: levels[t],
                head_level: levels[h],
            })
            .collect();

        // Reachability closure by DFS from each vertex; correct (and
        // terminating) even on graphs that break the layered condition.
        let mut reach = vec![false; n * n];
        for start in 0..n {
            let mut stack: Vec<usize> = succ[start].clone();
            while let Some(v) = stack.pop() {
                if !reach[start * n + v] {
                    reach[start * n + v] = true;
                    stack.extend_from_slice(&succ[v]);
                }
            }
        }

        Ok(LayeredGraph {
            height: levels.iter().copied().max().unwrap_or(0),
            ids,
            levels,
            lookup,
            edges: edge_list,
            edge_set,
            succ,
            pred,
            reach,
            violations,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc = serde_json::from_str(s)?;
        doc.into_graph()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Maximum level; 0 for the empty graph.
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Vertices in canonical order: ascending (level, id).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.ids.len()).map(Vertex)
    }

    pub fn vertices_at_level(&self, level: u32) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().filter(move |&v| self.level(v) == level)
    }

    /// Number of vertices of positive level, |V_+|.
    pub fn positive_vertex_count(&self) -> usize {
        self.levels.iter().filter(|&&l| l > 0).count()
    }

    pub fn vertex(&self, id: &str) -> Option<Vertex> {
        self.lookup.get(id).map(|&k| Vertex(k))
    }

    pub fn require_vertex(&self, id: &str) -> Result<Vertex, GraphError> {
        self.vertex(id).ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn id(&self, v: Vertex) -> &str {
        &self.ids[v.0]
    }

    pub fn level(&self, v: Vertex) -> u32 {
        self.levels[v.0]
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().map(|&(t, h)| (Vertex(t), Vertex(h)))
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport { violations: self.violations.clone() }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// True iff a directed path runs from `u` down to `v` (then u > v in the
    /// induced order).
    pub fn less_than(&self, u: Vertex, v: Vertex) -> bool {
        self.reach[u.0 * self.ids.len() + v.0]
    }

    /// True iff the edge (u, v) exists; on valid graphs this is the covering
    /// relation of the induced order.
    pub fn covers(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_set.contains(&(u.0, v.0))
    }

    /// S(v): heads of the edges leaving `v`, in canonical order.
    pub fn successor_set(&self, v: Vertex) -> Vec<Vertex> {
        self.succ[v.0].iter().map(|&h| Vertex(h)).collect()
    }

    pub fn predecessors(&self, v: Vertex) -> Vec<Vertex> {
        self.pred[v.0].iter().map(|&t| Vertex(t)).collect()
    }

    /// The induced poset: element k of the result is the k-th canonical
    /// vertex, and x < y iff a directed path runs from y to x.
    ///
    /// Panics on invalid graphs, where the reachability relation need not be
    /// an order.
    pub fn poset(&self) -> FinitePoset {
        assert!(self.is_valid(), "poset of an invalid layered graph is undefined");
        let n = self.ids.len();
        let mut less = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                less[a * n + b] = self.reach[b * n + a];
            }
        }
        FinitePoset::from_closed_relation(n, less)
    }

    /// Γ_{a,i}: the subgraph induced by {w : a > w and level(a) - level(w) <= i-1}.
    pub fn level_window_subgraph(&self, a: Vertex, i: u32) -> InducedSubgraph<'_> {
        let floor = self.level(a) as i64 - (i as i64 - 1);
        let members: Vec<usize> = (0..self.ids.len())
            .filter(|&w| self.reach[a.0 * self.ids.len() + w] && self.levels[w] as i64 >= floor)
            .collect();
        self.induced(members)
    }

    /// Induced subgraph on an arbitrary canonical-index set.
    fn induced(&self, members: Vec<usize>) -> InducedSubgraph<'_> {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let in_set: HashSet<usize> = members.iter().copied().collect();
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(t, h)| in_set.contains(&t) && in_set.contains(&h))
            .collect();
        InducedSubgraph { parent: self, members, edges }
    }

    /// Uniformity test. For each tail t with |S(t)| >= 2, S(t) must be
    /// connected under "v ~ v' iff some w is covered by both": on a valid
    /// layered graph the intermediate vertices of any down-up sequence below
    /// t live at level |t| - 1 and below t, hence in S(t), so connectivity of
    /// S(t) is exactly the down-up-sequence condition.
    pub fn is_uniform(&self) -> UniformReport {
        assert!(self.is_valid(), "uniformity of an invalid layered graph is undefined");
        let mut failing = Vec::new();
        for t in self.vertices() {
            let heads = &self.succ[t.0];
            if heads.len() < 2 {
                continue;
            }
            // BFS over heads, linked when successor sets intersect.
            let linked = |a: usize, b: usize| -> bool {
                let (sa, sb) = (&self.succ[a], &self.succ[b]);
                sa.iter().any(|w| sb.binary_search(w).is_ok())
            };
            let mut seen = vec![false; heads.len()];
            let mut queue = vec![0usize];
            seen[0] = true;
            while let Some(k) = queue.pop() {
                for j in 0..heads.len() {
                    if !seen[j] && linked(heads[k], heads[j]) {
                        seen[j] = true;
                        queue.push(j);
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                failing.push(t);
            }
        }
        UniformReport { uniform: failing.is_empty(), failing_tails: failing }
    }

    /// Vertices with no outgoing edges, plus the two hypotheses other
    /// modules care about: all minimal at level 0, and uniqueness.
    pub fn minimal_vertices(&self) -> MinimalReport {
        let vertices: Vec<Vertex> =
            self.vertices().filter(|v| self.succ[v.0].is_empty()).collect();
        let all_level_zero = vertices.iter().all(|&v| self.level(v) == 0);
        let unique = vertices.len() == 1;
        MinimalReport { vertices, all_level_zero, unique }
    }
}

/// A subgraph induced by a vertex subset; keeps the parent's labels.
#[derive(Debug, Clone)]
pub struct InducedSubgraph<'g> {
    parent: &'g LayeredGraph,
    members: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl<'g> InducedSubgraph<'g> {
    pub fn parent(&self) -> &'g LayeredGraph {
        self.parent
    }

    pub fn vertex_count(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member vertices of the parent, in canonical order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().map(|&k| Vertex(k))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v.0).is_ok()
    }

    /// The poset induced by paths inside the subgraph. Element k corresponds
    /// to the k-th member vertex. (For level windows of valid graphs this
    /// coincides with restricting the parent order: descending paths cannot
    /// leave the window.)
    pub fn poset(&self) -> FinitePoset {
        let n = self.members.len();
        let pos: HashMap<usize, usize> =
            self.members.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(t, h) in &self.edges {
            succ[pos[&t]].push(pos[&h]);
        }
        let mut less = vec![false; n * n];
        for start in 0..n {
            let mut stack = succ[start].clone();
            while let Some(v) = stack.pop() {
                // less[v][start]: v is below start.
                if !less[v * n + start] {
                    less[v * n + start] = true;
                    stack.extend_from_slice(&succ[v]);
                }
            }
        }
        FinitePoset::from_closed_relation(n, less)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: String,
    level: u32,
}

impl GraphDoc {
    fn into_graph(self) -> Result<LayeredGraph, GraphError> {
        LayeredGraph::new(
            self.vertices.into_iter().map(|v| (v.id, v.level)).collect(),
            self.edges,
        )
    }
}

impl Serialize for LayeredGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let doc = GraphDoc {
            vertices: self
                .vertices()
                .map(|v| VertexDoc { id: self.id(v).to_string(), level: self.level(v) })
                .collect(),
            edges: self
                .edges()
                .map(|(t, h)| (self.id(t).to_string(), self.id(h).to_string()))
                .collect(),
        };
        doc.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LayeredGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(deserializer)?;
        doc.into_graph().map_err(serde::de::Error::custom)
    }
}
