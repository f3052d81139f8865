//! Crossing-number drawings and planar vertex/edge deletion on top of the
//! orientable pipeline and noose cutting.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::embedding::{
    cut_vertices_of_noose_and_restrict, planar_embedding, representativity, shortest_noncontractible_noose,
    EmbeddingError, EmbeddingRecord, NooseKind, RotationEmbedding,
};
use crate::genusdraw::{draw_orientable, DrawError, GenusCertificate, PipelineConfig};
use crate::graphcore::{Edge, Graph, Vertex};
use crate::planarity::is_planar;

/// First id handed to crossing vertices.
pub const CROSSING_BASE: u64 = 1 << 61;

pub fn is_crossing_vertex(v: Vertex) -> bool {
    v.0 & CROSSING_BASE != 0 && v.0 >> 62 == 0
}

fn as_record<S: Serializer>(e: &RotationEmbedding, s: S) -> Result<S::Ok, S::Error> {
    EmbeddingRecord::from(e).serialize(s)
}

fn from_record<'de, D: Deserializer<'de>>(d: D) -> Result<RotationEmbedding, D::Error> {
    let rec = EmbeddingRecord::deserialize(d)?;
    rec.to_embedding().map_err(serde::de::Error::custom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    CrossingNumber,
    VertexPlanarization,
    EdgePlanarization,
}

/// Evidence that the requested quantity exceeds the budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionEvidence {
    /// The orientable pipeline rejected a genus budget that the quantity bounds.
    Genus { certificate: Box<GenusCertificate> },
    /// An orientable drawing of a subgraph whose representativity exceeds
    /// `budget + 2`; deleting `budget` vertices cannot make it planar.
    Representativity {
        representativity: usize,
        threshold: f64,
        #[serde(serialize_with = "as_record", deserialize_with = "from_record")]
        drawing: RotationEmbedding,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionRejection {
    pub quantity: Quantity,
    pub budget: usize,
    pub evidence: ReductionEvidence,
}

impl ReductionRejection {
    pub fn verify(&self, g: &Graph) -> bool {
        match &self.evidence {
            ReductionEvidence::Genus { certificate } => {
                !certificate.is_drawn()
                    && certificate.verify(g)
                    && certificate.genus_budget >= self.genus_budget_implied(g)
            }
            ReductionEvidence::Representativity {
                representativity: rho,
                threshold,
                drawing,
            } => {
                let sub = drawing.graph();
                let inside = sub.vertices().all(|v| g.contains(v))
                    && sub.edges().all(|e| {
                        let (a, b) = e.ends();
                        g.has_edge(a, b)
                    });
                inside
                    && drawing.is_orientable()
                    && representativity(drawing) == Some(*rho)
                    && (*rho as f64) > *threshold
                    && *threshold >= (self.budget + 2) as f64
            }
        }
    }

    /// Genus bound implied by the quantity being at most the budget.
    fn genus_budget_implied(&self, g: &Graph) -> usize {
        match self.quantity {
            Quantity::CrossingNumber => self.budget,
            Quantity::VertexPlanarization | Quantity::EdgePlanarization => g.max_degree() * self.budget,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Draw(#[from] DrawError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Decision<T> {
    Feasible(T),
    Rejected(ReductionRejection),
}

impl<T> Decision<T> {
    pub fn feasible(self) -> Option<T> {
        match self {
            Decision::Feasible(t) => Some(t),
            Decision::Rejected(_) => None,
        }
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, Decision::Rejected(_))
    }
}

/// A planar drawing of `g` in which each crossing is a degree-4 vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingDrawing {
    pub planarized: Graph,
    #[serde(serialize_with = "as_record", deserialize_with = "from_record")]
    pub embedding: RotationEmbedding,
    pub crossings: usize,
    /// The two original edges meeting at each crossing vertex.
    pub provenance: BTreeMap<Vertex, (Edge, Edge)>,
    pub config: PipelineConfig,
}

impl CrossingDrawing {
    /// Replaces each crossing vertex by the two edges passing straight
    /// through it, pairing opposite positions of its rotation.
    pub fn smoothed(&self) -> Result<Graph, String> {
        let mut rot = self.embedding.rotation().clone();
        for &x in self.provenance.keys() {
            let around = rot.remove(&x).ok_or_else(|| format!("crossing {x} is not drawn"))?;
            if around.len() != 4 {
                return Err(format!("crossing {x} has degree {}", around.len()));
            }
            for (p, q) in [(around[0], around[2]), (around[1], around[3])] {
                if p == q {
                    return Err(format!("crossing {x} closes a loop at {p}"));
                }
                for (end, other) in [(p, q), (q, p)] {
                    let slot = rot
                        .get_mut(&end)
                        .and_then(|r| r.iter_mut().find(|y| **y == x))
                        .ok_or_else(|| format!("rotation at {end} lost crossing {x}"))?;
                    *slot = other;
                }
            }
        }
        let mut g = Graph::new();
        for (&v, nbrs) in &rot {
            g.add_vertex(v);
            if nbrs.iter().collect::<BTreeSet<_>>().len() != nbrs.len() {
                return Err(format!("smoothing creates parallel edges at {v}"));
            }
            for &w in nbrs {
                g.add_edge(v, w).map_err(|e| e.to_string())?;
            }
        }
        Ok(g)
    }

    pub fn verify(&self, g: &Graph) -> bool {
        let provenance_ok = self.provenance.iter().all(|(&x, &(a, b))| {
            is_crossing_vertex(x) && a != b && g.has_edge(a.ends().0, a.ends().1) && g.has_edge(b.ends().0, b.ends().1)
        });
        let crossings: BTreeSet<Vertex> = self.planarized.vertices().filter(|&v| !g.contains(v)).collect();
        provenance_ok
            && self.crossings == self.provenance.len()
            && crossings == self.provenance.keys().copied().collect()
            && self.embedding.euler_genus() == 0
            && self.embedding.embeds(&self.planarized)
            && is_planar(&self.planarized)
            && self.smoothed().is_ok_and(|s| s == *g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deletion {
    Vertices(BTreeSet<Vertex>),
    Edges(BTreeSet<Edge>),
}

impl Deletion {
    pub fn len(&self) -> usize {
        match self {
            Deletion::Vertices(x) => x.len(),
            Deletion::Edges(y) => y.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, g: &Graph) -> Graph {
        match self {
            Deletion::Vertices(x) => g.without_vertices(x),
            Deletion::Edges(y) => g.without_edges(y),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarizationResult {
    pub deletion: Deletion,
    /// Planar drawing of what remains.
    #[serde(serialize_with = "as_record", deserialize_with = "from_record")]
    pub witness: RotationEmbedding,
    pub config: PipelineConfig,
}

impl PlanarizationResult {
    pub fn verify(&self, g: &Graph) -> bool {
        let in_g = match &self.deletion {
            Deletion::Vertices(x) => x.iter().all(|&v| g.contains(v)),
            Deletion::Edges(y) => y.iter().all(|e| {
                let (a, b) = e.ends();
                g.has_edge(a, b)
            }),
        };
        in_g && self.witness.euler_genus() == 0 && self.witness.embeds(&self.deletion.apply(g))
    }
}

/// Outcome of cutting nooses: the vertices cut to reach a planar drawing.
enum Cut {
    Planar(BTreeSet<Vertex>),
    TooRepresentative(ReductionEvidence),
}

/// Cuts the shortest nonseparating noose (any noncontractible one if none
/// is nonseparating) until the drawing is planar, or stops when the
/// representativity exceeds `threshold`.
fn cut_until_planar(g: &Graph, e: RotationEmbedding, threshold: f64) -> Result<Cut, ReductionError> {
    let (mut h, mut e) = (g.clone(), e);
    let mut removed = BTreeSet::new();
    while e.euler_genus() > 0 {
        let nonseparating = shortest_noncontractible_noose(&e, NooseKind::Nonseparating);
        // The representativity is at most the nonseparating length, so the
        // costlier search over all nooses only runs when that bound is too weak.
        let noose = match nonseparating {
            Some(n) if n.length as f64 <= threshold => n,
            short => {
                let any = shortest_noncontractible_noose(&e, NooseKind::Any)
                    .ok_or_else(|| ReductionError::Invariant("nonplanar drawing without noose".into()))?;
                if any.length as f64 > threshold {
                    return Ok(Cut::TooRepresentative(ReductionEvidence::Representativity {
                        representativity: any.length,
                        threshold,
                        drawing: e,
                    }));
                }
                short.unwrap_or(any)
            }
        };
        let (h2, e2) = cut_vertices_of_noose_and_restrict(&h, &e, &noose)?;
        removed.extend(noose.vertex_set());
        h = h2;
        e = e2;
    }
    Ok(Cut::Planar(removed))
}

fn genus_rejection(quantity: Quantity, budget: usize, cert: GenusCertificate) -> ReductionRejection {
    ReductionRejection {
        quantity,
        budget,
        evidence: ReductionEvidence::Genus {
            certificate: Box::new(cert),
        },
    }
}

/// Planar drawing of `g` with crossings, or a proof that `cr(g) > k`.
pub fn crossing_number_drawing(
    g: &Graph,
    k: usize,
    cfg: &PipelineConfig,
) -> Result<Decision<CrossingDrawing>, ReductionError> {
    let comps = g.component_subgraphs();
    let parts: Vec<Result<Decision<CrossingDrawing>, ReductionError>> = comps
        .par_iter()
        .enumerate()
        .map(|(i, c)| crossing_component(c, k, cfg, CROSSING_BASE + ((i as u64) << 32)))
        .collect();
    let mut out = CrossingDrawing {
        planarized: Graph::new(),
        embedding: RotationEmbedding::from_rotation(BTreeMap::new())?,
        crossings: 0,
        provenance: BTreeMap::new(),
        config: *cfg,
    };
    for part in parts {
        match part? {
            Decision::Feasible(d) => {
                out.planarized = out.planarized.union(&d.planarized);
                out.embedding = out.embedding.disjoint_union(&d.embedding);
                out.crossings += d.crossings;
                out.provenance.extend(d.provenance);
            }
            Decision::Rejected(r) => return Ok(Decision::Rejected(r)),
        }
    }
    if !out.verify(g) {
        return Err(ReductionError::Invariant("crossing drawing failed revalidation".into()));
    }
    Ok(Decision::Feasible(out))
}

fn crossing_component(
    comp: &Graph,
    k: usize,
    cfg: &PipelineConfig,
    first_id: u64,
) -> Result<Decision<CrossingDrawing>, ReductionError> {
    let base = match planar_embedding(comp) {
        Some(e) => {
            return Ok(Decision::Feasible(CrossingDrawing {
                planarized: comp.clone(),
                embedding: e,
                crossings: 0,
                provenance: BTreeMap::new(),
                config: *cfg,
            }))
        }
        None => draw_orientable(comp, k, cfg)?,
    };
    let Some(drawing) = base.drawing.clone() else {
        return Ok(Decision::Rejected(genus_rejection(Quantity::CrossingNumber, k, base)));
    };
    // Deleting one end of every crossed edge planarizes, so k + 2 is the
    // smallest threshold at which a rejection stays sound.
    let threshold = (cfg.orientable_alpha * k as f64).max((k + 2) as f64);
    let removed = match cut_until_planar(comp, drawing, threshold)? {
        Cut::Planar(removed) => removed,
        Cut::TooRepresentative(evidence) => {
            return Ok(Decision::Rejected(ReductionRejection {
                quantity: Quantity::CrossingNumber,
                budget: k,
                evidence,
            }))
        }
    };
    let candidates: Vec<Edge> = comp
        .edges()
        .filter(|e| {
            let (a, b) = e.ends();
            removed.contains(&a) || removed.contains(&b)
        })
        .collect();
    let mut kept = comp.without_edges(&candidates);
    let mut reinsert = Vec::new();
    for e in candidates {
        let (a, b) = e.ends();
        kept.add_edge(a, b).expect("edge came from the component");
        if !is_planar(&kept) {
            kept.remove_edge(a, b);
            reinsert.push(e);
        }
    }
    if !kept.is_connected() {
        return Err(ReductionError::Invariant("maximal re-addition left the component disconnected".into()));
    }
    let mut emb = planar_embedding(&kept).ok_or_else(|| ReductionError::Invariant("kept edges not planar".into()))?;
    let mut next_id = first_id;
    // Current segment -> original edge it belongs to.
    let mut origin: BTreeMap<Edge, Edge> = kept.edges().map(|e| (e, e)).collect();
    let mut provenance = BTreeMap::new();
    while !reinsert.is_empty() {
        let mut best: Option<(usize, usize, crate::embedding::EdgeInsertion)> = None;
        for (i, e) in reinsert.iter().enumerate() {
            let (a, b) = e.ends();
            let mut probe = next_id;
            let ins = emb.insert_edge_planar(a, b, &mut probe)?;
            if best.as_ref().is_none_or(|(_, c, _)| ins.crossings.len() < *c) {
                best = Some((i, ins.crossings.len(), ins));
            }
        }
        let (i, _, ins) = best.expect("reinsert is nonempty");
        let new_edge = reinsert.remove(i);
        for c in &ins.crossings {
            let crossed = origin.remove(&c.crossed).expect("crossed segment has an origin");
            let (p, q) = c.crossed.ends();
            origin.insert(Edge::new(p, c.vertex), crossed);
            origin.insert(Edge::new(c.vertex, q), crossed);
            provenance.insert(c.vertex, (crossed, new_edge));
            next_id = next_id.max(c.vertex.0 + 1);
        }
        for w in ins.route.windows(2) {
            origin.insert(Edge::new(w[0], w[1]), new_edge);
        }
        emb = ins.embedding;
    }
    Ok(Decision::Feasible(CrossingDrawing {
        planarized: emb.graph(),
        crossings: provenance.len(),
        embedding: emb,
        provenance,
        config: *cfg,
    }))
}

/// Vertex set whose deletion planarizes `g`, or a proof that more than `k`
/// vertices are needed.
pub fn vertex_planarization(
    g: &Graph,
    k: usize,
    cfg: &PipelineConfig,
) -> Result<Decision<PlanarizationResult>, ReductionError> {
    if let Some(witness) = planar_embedding(g) {
        return Ok(Decision::Feasible(PlanarizationResult {
            deletion: Deletion::Vertices(BTreeSet::new()),
            witness,
            config: *cfg,
        }));
    }
    let delta = g.max_degree();
    let cert = draw_orientable(g, delta * k, cfg)?;
    let Some(drawing) = cert.drawing.clone() else {
        return Ok(Decision::Rejected(genus_rejection(Quantity::VertexPlanarization, k, cert)));
    };
    let threshold = PipelineConfig::vertex_planarization_threshold(delta, k) as f64;
    let mut x = match cut_until_planar(g, drawing, threshold)? {
        Cut::Planar(removed) => removed,
        Cut::TooRepresentative(evidence) => {
            return Ok(Decision::Rejected(ReductionRejection {
                quantity: Quantity::VertexPlanarization,
                budget: k,
                evidence,
            }))
        }
    };
    for v in x.clone() {
        x.remove(&v);
        if !is_planar(&g.without_vertices(&x)) {
            x.insert(v);
        }
    }
    let witness = planar_embedding(&g.without_vertices(&x))
        .ok_or_else(|| ReductionError::Invariant("vertex deletion left a nonplanar graph".into()))?;
    Ok(Decision::Feasible(PlanarizationResult {
        deletion: Deletion::Vertices(x),
        witness,
        config: *cfg,
    }))
}

/// Edge set whose deletion planarizes `g`, or a proof that more than `k`
/// edges are needed.
pub fn edge_planarization(
    g: &Graph,
    k: usize,
    cfg: &PipelineConfig,
) -> Result<Decision<PlanarizationResult>, ReductionError> {
    let x = match vertex_planarization(g, k, cfg)? {
        Decision::Feasible(r) => match r.deletion {
            Deletion::Vertices(x) => x,
            Deletion::Edges(_) => unreachable!("vertex planarization deletes vertices"),
        },
        Decision::Rejected(r) => {
            return Ok(Decision::Rejected(ReductionRejection {
                quantity: Quantity::EdgePlanarization,
                ..r
            }))
        }
    };
    let mut y: BTreeSet<Edge> = g.edges().filter(|e| x.iter().any(|&v| e.touches(v))).collect();
    let mut rest = g.without_edges(&y);
    for e in y.clone() {
        let (a, b) = e.ends();
        rest.add_edge(a, b).expect("edge came from g");
        if is_planar(&rest) {
            y.remove(&e);
        } else {
            rest.remove_edge(a, b);
        }
    }
    let witness = planar_embedding(&rest).ok_or_else(|| ReductionError::Invariant("edge deletion left a nonplanar graph".into()))?;
    Ok(Decision::Feasible(PlanarizationResult {
        deletion: Deletion::Edges(y),
        witness,
        config: *cfg,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    fn cfg() -> PipelineConfig {
        PipelineConfig::default()
    }

    #[test]
    fn planar_graph_has_no_crossings() {
        let g = grid(4, 4);
        let d = crossing_number_drawing(&g, 0, &cfg()).unwrap().feasible().unwrap();
        assert_eq!(d.crossings, 0);
        assert!(d.verify(&g));
    }

    #[test]
    fn k5_crossing_drawing_smooths_back() {
        let g = complete(5);
        let d = crossing_number_drawing(&g, 1, &cfg()).unwrap().feasible().unwrap();
        assert!(d.crossings >= 1);
        assert!(d.verify(&g));
    }

    #[test]
    fn k6_crossing_drawing() {
        let g = complete(6);
        let d = crossing_number_drawing(&g, 3, &cfg()).unwrap().feasible().unwrap();
        assert!(d.crossings >= 3);
        assert!(d.verify(&g));
    }

    #[test]
    fn tampered_crossing_drawing_fails() {
        let g = complete(5);
        let mut d = crossing_number_drawing(&g, 1, &cfg()).unwrap().feasible().unwrap();
        let (&x, _) = d.provenance.iter().next().unwrap();
        d.provenance.remove(&x);
        assert!(!d.verify(&g));
    }

    #[test]
    fn vertex_planarization_of_k5() {
        let g = complete(5);
        let r = vertex_planarization(&g, 1, &cfg()).unwrap().feasible().unwrap();
        assert!(!r.deletion.is_empty());
        assert!(r.verify(&g));
    }

    #[test]
    fn two_k5s_need_two_vertices() {
        let g = disjoint_union(&complete(5), &complete(5));
        match vertex_planarization(&g, 1, &cfg()).unwrap() {
            Decision::Feasible(r) => {
                assert!(r.deletion.len() >= 2);
                assert!(r.verify(&g));
            }
            Decision::Rejected(r) => assert!(r.verify(&g)),
        }
    }

    #[test]
    fn edge_planarization_of_small_obstructions() {
        for g in [complete(5), complete_bipartite(3, 3)] {
            let r = edge_planarization(&g, 1, &cfg()).unwrap().feasible().unwrap();
            assert!(!r.deletion.is_empty());
            assert!(r.verify(&g));
        }
    }

    #[test]
    fn planar_graph_needs_no_deletion() {
        let g = wheel(5);
        assert!(vertex_planarization(&g, 0, &cfg()).unwrap().feasible().unwrap().deletion.is_empty());
        assert!(edge_planarization(&g, 0, &cfg()).unwrap().feasible().unwrap().deletion.is_empty());
    }

    #[test]
    fn decisions_round_trip_through_json() {
        let g = complete(5);
        let d = crossing_number_drawing(&g, 1, &cfg()).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        let back: Decision<CrossingDrawing> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }
}
