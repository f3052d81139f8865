//! Simple undirected graphs, edge-list I/O, minor mappings and normalization.

mod io;
mod minor;
mod normalize;

pub mod generators;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{parse_edge_list, read_edge_list, write_edge_list};
pub use minor::{verify_minor_mapping, MinorMapping};
pub use normalize::{
    denormalize_embedding, find_free_subgraph, normalize, FreeKind, FreeSubgraph, ReplayLog,
    ReplayStep,
};

/// Vertex identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Vertex(pub u64);

// JSON object keys arrive as strings, and buffered (tagged) content keeps
// them that way, so numeric strings are accepted as well.
impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Id;
        impl serde::de::Visitor<'_> for Id {
            type Value = Vertex;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a vertex id")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Vertex, E> {
                Ok(Vertex(v))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Vertex, E> {
                u64::try_from(v).map(Vertex).map_err(E::custom)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Vertex, E> {
                v.parse().map(Vertex).map_err(E::custom)
            }
        }
        d.deserialize_any(Id)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Vertex {
    fn from(v: u64) -> Self {
        Vertex(v)
    }
}

/// Undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn ends(self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    pub fn other(self, v: Vertex) -> Vertex {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    adj: BTreeMap<Vertex, Vec<Vertex>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge iterator; duplicate edges collapse, loops are rejected.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(Vertex(u), Vertex(v))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// Adds `uv`; returns `Ok(false)` if it was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let nu = self.adj.entry(u).or_default();
        match nu.binary_search(&v) {
            Ok(_) => return Ok(false),
            Err(i) => nu.insert(i, v),
        }
        let nv = self.adj.entry(v).or_default();
        if let Err(i) = nv.binary_search(&u) {
            nv.insert(i, u);
        }
        Ok(true)
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        let mut removed = false;
        if let Some(nu) = self.adj.get_mut(&u) {
            if let Ok(i) = nu.binary_search(&v) {
                nu.remove(i);
                removed = true;
            }
        }
        if let Some(nv) = self.adj.get_mut(&v) {
            if let Ok(i) = nv.binary_search(&u) {
                nv.remove(i);
            }
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: Vertex) -> bool {
        let Some(nbrs) = self.adj.remove(&v) else {
            return false;
        };
        for w in nbrs {
            if let Some(nw) = self.adj.get_mut(&w) {
                if let Ok(i) = nw.binary_search(&v) {
                    nw.remove(i);
                }
            }
        }
        true
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj
            .get(&u)
            .is_some_and(|n| n.binary_search(&v).is_ok())
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.adj.keys().copied().collect()
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(&u, nbrs)| {
            nbrs.iter()
                .filter(move |&&w| u < w)
                .map(move |&w| Edge::new(u, w))
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, nbrs)| {
                (
                    v,
                    nbrs.iter().copied().filter(|w| keep.contains(w)).collect(),
                )
            })
            .collect();
        Graph { adj }
    }

    pub fn without_vertices(&self, drop: &BTreeSet<Vertex>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| !drop.contains(v))
            .map(|(&v, nbrs)| {
                (
                    v,
                    nbrs.iter().copied().filter(|w| !drop.contains(w)).collect(),
                )
            })
            .collect();
        Graph { adj }
    }

    pub fn without_edges<'a, I>(&self, drop: I) -> Graph
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut g = self.clone();
        for e in drop {
            let (a, b) = e.ends();
            g.remove_edge(a, b);
        }
        g
    }

    /// Union of two graphs on possibly overlapping vertex sets.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v);
        }
        for e in other.edges() {
            let (a, b) = e.ends();
            let _ = g.add_edge(a, b);
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = self.reach(v, |_| true);
            comp.sort();
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn component_subgraphs(&self) -> Vec<Graph> {
        self.components()
            .into_iter()
            .map(|c| self.induced(&c.into_iter().collect()))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertices reachable from `start` through vertices accepted by `allow`.
    pub fn reach<F: Fn(Vertex) -> bool>(&self, start: Vertex, allow: F) -> Vec<Vertex> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &w in self.neighbors(v) {
                if allow(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// BFS distances from a set of sources.
    pub fn bfs_distances(&self, sources: &[Vertex]) -> BTreeMap<Vertex, usize> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &s in sources {
            if self.contains(s) && dist.insert(s, 0).is_none() {
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for &w in self.neighbors(v) {
                if !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path between two vertices using only vertices accepted by `allow`.
    pub fn shortest_path<F: Fn(Vertex) -> bool>(
        &self,
        from: Vertex,
        to: Vertex,
        allow: F,
    ) -> Option<Vec<Vertex>> {
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::new();
        parent.insert(from, from);
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in self.neighbors(v) {
                if (w == to || allow(w)) && !parent.contains_key(&w) {
                    parent.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Largest unused vertex id plus one.
    pub fn fresh_id(&self) -> u64 {
        self.adj.keys().next_back().map_or(0, |v| v.0 + 1)
    }
}

/// Index-based adjacency view used by the hot loops.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub ids: Vec<Vertex>,
    pub adj: Vec<Vec<usize>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        let ids: Vec<Vertex> = g.vertices().collect();
        let index: HashMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect())
            .collect();
        Dense { ids, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Vertex set helper.
pub fn vset<I: IntoIterator<Item = Vertex>>(it: I) -> BTreeSet<Vertex> {
    it.into_iter().collect()
}
