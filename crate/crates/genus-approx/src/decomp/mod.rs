//! Balanced separators, tree decompositions with width certificates and
//! leveled planarizing sets.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphcore::{Graph, Vertex};
use crate::planarity::is_planar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorResult {
    pub separator: BTreeSet<Vertex>,
    /// Largest remaining component divided by the vertex count of the input.
    pub balance: f64,
}

fn largest_component(g: &Graph, removed: &BTreeSet<Vertex>) -> usize {
    let mut seen: BTreeSet<Vertex> = removed.clone();
    let mut best = 0;
    for v in g.vertices() {
        if seen.contains(&v) {
            continue;
        }
        let part = g.reach(v, |w| !removed.contains(&w));
        best = best.max(part.len());
        seen.extend(part);
    }
    best
}

fn fits(g: &Graph, sep: &BTreeSet<Vertex>, balance: f64) -> bool {
    largest_component(g, sep) as f64 <= balance * g.vertex_count() as f64
}

/// BFS-level cut separator, shrunk by dropping vertices while the bound holds.
///
/// Any `balance` below 1 is honoured exactly; the whole vertex set is the
/// fallback.
pub fn balanced_separator(g: &Graph, balance: f64) -> SeparatorResult {
    let n = g.vertex_count();
    let report = |sep: BTreeSet<Vertex>| {
        let balance = if n == 0 {
            0.0
        } else {
            largest_component(g, &sep) as f64 / n as f64
        };
        SeparatorResult { separator: sep, balance }
    };
    if n == 0 || fits(g, &BTreeSet::new(), balance) {
        return report(BTreeSet::new());
    }
    let mut best: Option<(usize, usize, BTreeSet<Vertex>)> = None;
    let mut consider = |sep: BTreeSet<Vertex>| {
        let big = largest_component(g, &sep);
        if big as f64 > balance * n as f64 {
            return;
        }
        let key = (sep.len(), big);
        if best.as_ref().map_or(true, |(s, b, _)| key < (*s, *b)) {
            best = Some((sep.len(), big, sep));
        }
    };
    let first = g.vertices().next().expect("nonempty");
    let far = |from: Vertex| {
        g.bfs_distances(&[from])
            .into_iter()
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
            .map_or(from, |(v, _)| v)
    };
    let a = far(first);
    let b = far(a);
    let mut starts = vec![first, a, b];
    starts.dedup();
    for s in starts {
        let dist = g.bfs_distances(&[s]);
        let depth = dist.values().copied().max().unwrap_or(0);
        let mut levels: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); depth + 1];
        for (&v, &d) in &dist {
            levels[d].insert(v);
        }
        for level in levels {
            consider(level);
        }
    }
    let mut sep = best.map_or_else(|| g.vertex_set(), |(_, _, s)| s);
    let candidates: Vec<Vertex> = sep.iter().copied().collect();
    for v in candidates {
        sep.remove(&v);
        if !fits(g, &sep, balance) {
            sep.insert(v);
        }
    }
    report(sep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub tree: Graph,
    pub bags: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(Vertex),
    #[error("edge {0}-{1} is in no bag")]
    UncoveredEdge(Vertex, Vertex),
    #[error("bags holding {0} are not connected in the tree")]
    Disconnected(Vertex),
    #[error("the decomposition tree is not a tree")]
    NotATree,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.values().map(BTreeSet::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the three defining conditions against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompositionError> {
        let t = &self.tree;
        if !t.is_empty() && (!t.is_connected() || t.edge_count() + 1 != t.vertex_count()) {
            return Err(DecompositionError::NotATree);
        }
        let mut holders: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for (&node, bag) in &self.bags {
            for &v in bag {
                holders.entry(v).or_default().insert(node);
            }
        }
        for v in g.vertices() {
            let nodes = holders.get(&v).ok_or(DecompositionError::UncoveredVertex(v))?;
            let start = *nodes.iter().next().expect("nonempty");
            if t.reach(start, |x| nodes.contains(&x)).len() != nodes.len() {
                return Err(DecompositionError::Disconnected(v));
            }
        }
        for e in g.edges() {
            let (u, v) = e.ends();
            if !self.bags.values().any(|b| b.contains(&u) && b.contains(&v)) {
                return Err(DecompositionError::UncoveredEdge(u, v));
            }
        }
        Ok(())
    }
}

/// Minimum-degree elimination ordering turned into a decomposition.
pub fn approx_tree_decomposition(g: &Graph) -> TreeDecomposition {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| (v, g.neighbors(v).iter().copied().collect()))
        .collect();
    let mut by_degree: BTreeSet<(usize, Vertex)> = adj.iter().map(|(&v, ns)| (ns.len(), v)).collect();
    let mut order = Vec::with_capacity(adj.len());
    let mut bags_by_vertex: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    while let Some((_, v)) = by_degree.pop_first() {
        let nbrs = adj.remove(&v).expect("pending vertex");
        for &a in &nbrs {
            let before = adj[&a].len();
            let entry = adj.get_mut(&a).expect("pending neighbour");
            entry.remove(&v);
            entry.extend(nbrs.iter().copied().filter(|&b| b != a));
            let after = entry.len();
            by_degree.remove(&(before, a));
            by_degree.insert((after, a));
        }
        let mut bag = nbrs;
        bag.insert(v);
        bags_by_vertex.insert(v, bag);
        order.push(v);
    }
    let rank: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut tree = Graph::new();
    let mut bags = BTreeMap::new();
    let mut roots = Vec::new();
    for &v in &order {
        let node = Vertex(rank[&v] as u64);
        tree.add_vertex(node);
        let bag = &bags_by_vertex[&v];
        let parent = bag.iter().filter(|&&w| w != v).min_by_key(|&&w| rank[&w]);
        match parent {
            Some(&p) => {
                tree.add_edge(node, Vertex(rank[&p] as u64)).expect("distinct nodes");
            }
            None => roots.push(node),
        }
        bags.insert(node, bag.clone());
    }
    for pair in roots.windows(2) {
        tree.add_edge(pair[0], pair[1]).expect("distinct roots");
    }
    TreeDecomposition { tree, bags }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanarizingConfig {
    pub balance: f64,
    /// Non-planar pieces allowed per level, as a multiple of the budget.
    pub cap_factor: f64,
}

impl Default for PlanarizingConfig {
    fn default() -> Self {
        PlanarizingConfig {
            balance: 2.0 / 3.0,
            cap_factor: 1.0,
        }
    }
}

impl PlanarizingConfig {
    pub fn cap(&self, genus_budget: usize) -> usize {
        (self.cap_factor * genus_budget as f64).floor() as usize
    }
}

/// Too many vertex-disjoint non-planar pieces on one recursion level.
#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize, Deserialize)]
#[error("level {level} has {count} non-planar pieces, more than the cap {cap}")]
pub struct PieceRejection {
    pub level: usize,
    pub count: usize,
    pub cap: usize,
    /// Vertex sets of the offending pieces.
    pub pieces: Vec<BTreeSet<Vertex>>,
}

impl PieceRejection {
    /// Re-checks that the pieces are disjoint, non-planar and exceed the cap.
    pub fn verify(&self, g: &Graph) -> bool {
        let mut seen = BTreeSet::new();
        self.pieces.len() == self.count
            && self.count > self.cap
            && self.pieces.iter().all(|p| {
                p.iter().all(|v| g.contains(*v) && seen.insert(*v)) && !is_planar(&g.induced(p))
            })
    }
}

/// Recursive separator removal until every piece passes `is_flat`.
///
/// `is_flat` decides whether a piece needs no further splitting; the plain
/// planarizing set uses planarity, the framed variant uses planarity of the
/// framing.
pub fn leveled_removal<F>(
    g: &Graph,
    genus_budget: usize,
    cfg: &PlanarizingConfig,
    is_flat: F,
) -> Result<BTreeSet<Vertex>, PieceRejection>
where
    F: Fn(&Graph) -> bool + Sync,
{
    let cap = cfg.cap(genus_budget);
    let mut removed = BTreeSet::new();
    let mut pieces: Vec<Graph> = g.component_subgraphs();
    let mut level = 0;
    loop {
        let bad: Vec<Graph> = pieces.into_par_iter().filter(|p| !is_flat(p)).collect();
        if bad.is_empty() {
            return Ok(removed);
        }
        if bad.len() > cap {
            return Err(PieceRejection {
                level,
                count: bad.len(),
                cap,
                pieces: bad.iter().map(Graph::vertex_set).collect(),
            });
        }
        let splits: Vec<(BTreeSet<Vertex>, Vec<Graph>)> = bad
            .par_iter()
            .map(|p| {
                let sep = balanced_separator(p, cfg.balance).separator;
                let rest = p.without_vertices(&sep).component_subgraphs();
                (sep, rest)
            })
            .collect();
        pieces = Vec::new();
        for (sep, rest) in splits {
            removed.extend(sep);
            pieces.extend(rest);
        }
        level += 1;
    }
}

/// Vertex set whose removal leaves `g` planar, or a certificate that the
/// Euler genus of `g` exceeds the budget.
///
/// After the recursion succeeds, vertices are put back greedily while the
/// remainder stays planar.
pub fn planarizing_set(
    g: &Graph,
    genus_budget: usize,
    cfg: &PlanarizingConfig,
) -> Result<BTreeSet<Vertex>, PieceRejection> {
    let mut x = leveled_removal(g, genus_budget, cfg, is_planar)?;
    let order: Vec<Vertex> = x.iter().copied().collect();
    for v in order {
        x.remove(&v);
        if !is_planar(&g.without_vertices(&x)) {
            x.insert(v);
        }
    }
    debug_assert!(is_planar(&g.without_vertices(&x)));
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    #[test]
    fn path_separator_is_the_middle() {
        let r = balanced_separator(&path(9), 2.0 / 3.0);
        assert_eq!(r.separator, BTreeSet::from([Vertex(4)]));
        assert!(r.balance <= 0.5);
    }

    #[test]
    fn clique_separator_respects_balance() {
        let g = complete(6);
        let r = balanced_separator(&g, 2.0 / 3.0);
        assert!(r.separator.len() <= 4);
        assert!(r.balance <= 2.0 / 3.0);
    }

    #[test]
    fn decomposition_widths() {
        let t = approx_tree_decomposition(&star(6));
        t.validate(&star(6)).unwrap();
        assert_eq!(t.width(), 1);
        let c = approx_tree_decomposition(&cycle(5));
        c.validate(&cycle(5)).unwrap();
        assert_eq!(c.width(), 2);
    }

    #[test]
    fn planarizing_k5_and_rejecting_three_copies() {
        let cfg = PlanarizingConfig::default();
        let x = planarizing_set(&complete(5), 1, &cfg).unwrap();
        assert!(!x.is_empty());
        assert!(is_planar(&complete(5).without_vertices(&x)));
        let three = disjoint_union(&disjoint_union(&complete(5), &complete(5)), &complete(5));
        let rej = planarizing_set(&three, 1, &cfg).unwrap_err();
        assert_eq!((rej.level, rej.count), (0, 3));
        assert!(rej.verify(&three));
    }

    #[test]
    fn planar_needs_nothing() {
        let cfg = PlanarizingConfig::default();
        assert!(planarizing_set(&grid(6, 6), 0, &cfg).unwrap().is_empty());
    }
}
