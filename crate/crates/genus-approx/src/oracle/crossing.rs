//! Exact crossing number and planarization numbers by exhaustive search.

use std::collections::{BTreeMap, BTreeSet};

use super::{girth, Meter, OracleBudget, OracleError};
use crate::graphcore::{Edge, Graph, Vertex};
use crate::planarity::is_planar;

/// Edge-minimal non-planar subgraph, i.e. a Kuratowski subdivision.
fn kuratowski_edges(g: &Graph, meter: &Meter) -> Result<Vec<Edge>, OracleError> {
    let mut h = g.clone();
    for e in g.edges() {
        meter.tick()?;
        let (a, b) = e.ends();
        h.remove_edge(a, b);
        if is_planar(&h) {
            h.add_edge(a, b).expect("restoring an edge");
        }
    }
    Ok(h.edges().collect())
}

/// Lower bound on the crossing number of a simple graph from Euler's formula.
fn euler_floor(g: &Graph) -> usize {
    let (n, m) = (g.vertex_count(), g.edge_count());
    if n < 3 {
        return 0;
    }
    match girth(g) {
        None => 0,
        Some(k) => m.saturating_sub(k * (n - 2) / (k - 2)),
    }
}

/// Partial drawing: original edges cut into segments at chosen crossings.
#[derive(Clone)]
struct Planarized {
    graph: Graph,
    /// Original edge carried by each segment.
    origin: BTreeMap<Edge, Edge>,
    /// Crossing partners along each original edge, in order from its first end.
    along: BTreeMap<Edge, Vec<Edge>>,
    next: u64,
}

impl Planarized {
    fn new(g: &Graph) -> Self {
        Planarized {
            graph: g.clone(),
            origin: g.edges().map(|e| (e, e)).collect(),
            along: BTreeMap::new(),
            next: g.fresh_id(),
        }
    }

    fn crosses(&self, e: Edge, f: Edge) -> bool {
        self.along.get(&e).is_some_and(|xs| xs.contains(&f))
    }

    /// Position of the segment `s` along its original edge, counted in crossings.
    fn rank(&self, s: Edge) -> usize {
        let o = self.origin[&s];
        let (first, _) = o.ends();
        let mut at = first;
        let mut prev = None;
        let mut k = 0;
        loop {
            let step = self
                .graph
                .neighbors(at)
                .iter()
                .copied()
                .find(|&w| Some(w) != prev && self.origin.get(&Edge::new(at, w)) == Some(&o))
                .expect("segments chain along the edge");
            if Edge::new(at, step) == s {
                return k;
            }
            prev = Some(at);
            at = step;
            k += 1;
        }
    }

    fn cross(&self, s: Edge, t: Edge) -> Planarized {
        let (e, f) = (self.origin[&s], self.origin[&t]);
        let (rs, rt) = (self.rank(s), self.rank(t));
        let mut out = self.clone();
        let x = Vertex(out.next);
        out.next += 1;
        for (seg, orig) in [(s, e), (t, f)] {
            let (a, b) = seg.ends();
            out.graph.remove_edge(a, b);
            out.origin.remove(&seg);
            for end in [a, b] {
                out.graph.add_edge(end, x).expect("fresh crossing vertex");
                out.origin.insert(Edge::new(end, x), orig);
            }
        }
        out.along.entry(e).or_default().insert(rs, f);
        out.along.entry(f).or_default().insert(rt, e);
        out
    }

    fn key(&self) -> BTreeMap<Edge, Vec<Edge>> {
        self.along.clone()
    }
}

/// Whether `g` has a drawing with at most `k` crossings.
///
/// Any drawing of a non-planar partial planarization crosses two edges of
/// each of its Kuratowski subgraphs, so branching over those pairs is
/// complete. Only good drawings are searched: adjacent edges never cross and
/// two edges cross at most once.
pub fn crossing_number_at_most(g: &Graph, k: usize, budget: &OracleBudget) -> Result<bool, OracleError> {
    let meter = Meter::new(budget);
    let mut seen = BTreeSet::new();
    at_most(&Planarized::new(g), k, &meter, &mut seen)
}

fn at_most(
    p: &Planarized,
    k: usize,
    meter: &Meter,
    seen: &mut BTreeSet<BTreeMap<Edge, Vec<Edge>>>,
) -> Result<bool, OracleError> {
    meter.tick()?;
    if !seen.insert(p.key()) {
        return Ok(false);
    }
    if is_planar(&p.graph) {
        return Ok(true);
    }
    if k == 0 || euler_floor(&p.graph) > k {
        return Ok(false);
    }
    let segs = kuratowski_edges(&p.graph, meter)?;
    for (i, &s) in segs.iter().enumerate() {
        for &t in &segs[i + 1..] {
            let (e, f) = (p.origin[&s], p.origin[&t]);
            let (a, b) = e.ends();
            if e == f || f.touches(a) || f.touches(b) || p.crosses(e, f) {
                continue;
            }
            if at_most(&p.cross(s, t), k - 1, meter, seen)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn exact_crossing_number(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let mut total = 0;
    for comp in g.component_subgraphs() {
        let mut k = euler_floor(&comp);
        while !crossing_number_at_most(&comp, k, budget)? {
            k += 1;
        }
        total += k;
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// Calls `f` on every `k`-subset of `items` until it returns `true`.
fn any_subset<T: Copy>(items: &[T], k: usize, f: &mut dyn FnMut(&[T]) -> Result<bool, OracleError>) -> Result<bool, OracleError> {
    fn go<T: Copy>(
        items: &[T],
        k: usize,
        from: usize,
        pick: &mut Vec<T>,
        f: &mut dyn FnMut(&[T]) -> Result<bool, OracleError>,
    ) -> Result<bool, OracleError> {
        if pick.len() == k {
            return f(pick);
        }
        for i in from..=items.len() - (k - pick.len()) {
            pick.push(items[i]);
            let hit = go(items, k, i + 1, pick, f)?;
            pick.pop();
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// Fewest vertices whose deletion leaves a planar graph.
pub fn exact_vertex_planarization(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let meter = Meter::new(budget);
    let vs: Vec<Vertex> = g.vertices().collect();
    for k in 0..=vs.len() {
        meter.charge(binomial(vs.len(), k))?;
        if any_subset(&vs, k, &mut |x| {
            meter.tick()?;
            Ok(is_planar(&g.without_vertices(&x.iter().copied().collect())))
        })? {
            return Ok(k);
        }
    }
    unreachable!("deleting every vertex leaves a planar graph")
}

/// Fewest edges whose deletion leaves a planar graph.
pub fn exact_edge_planarization(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let meter = Meter::new(budget);
    let es: Vec<Edge> = g.edges().collect();
    for k in euler_floor(g)..=es.len() {
        meter.charge(binomial(es.len(), k))?;
        if any_subset(&es, k, &mut |y| {
            meter.tick()?;
            Ok(is_planar(&g.without_edges(y)))
        })? {
            return Ok(k);
        }
    }
    unreachable!("deleting every edge leaves a planar graph")
}
