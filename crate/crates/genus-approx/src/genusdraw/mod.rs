//! Drawing pipelines for Euler genus and orientable genus.
//!
//! Both pipelines either draw the input or reject it with evidence that can
//! be re-checked against the input graph.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{leveled_removal, PieceRejection, PlanarizingConfig};
use crate::embedding::{
    cut_vertices_of_noose_and_restrict, embed_patch_in_disk, planar_embedding, shortest_noncontractible_noose,
    EmbeddingError, EmbeddingRecord, NooseKind, RotationEmbedding, Sign,
};
use crate::graphcore::{denormalize_embedding, normalize, Edge, Graph, Vertex};
use crate::patchwork::{
    boundary_cycles, compute_skeleton, frame, framing_id, is_framing_vertex, segments, PatchConfig, PatchError,
    PatchSet, Skeleton, SkeletonStop,
};
use crate::planarity::is_planar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Skeleton loop stops once the width certificate is at most this.
    pub treewidth_threshold: usize,
    /// Nested cycles requested beyond the budget when building a patch.
    pub ring_surplus: usize,
    /// Non-planar pieces tolerated per separator level, per unit of budget.
    pub cap_factor: f64,
    /// Largest component fraction a separator may leave.
    pub balance: f64,
    /// The orientable pipeline rejects once representativity exceeds `alpha * g^2`.
    pub orientable_alpha: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            treewidth_threshold: 12,
            ring_surplus: 3,
            cap_factor: 1.0,
            balance: 2.0 / 3.0,
            orientable_alpha: 1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown setting {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {reason}")]
    BadValue { key: String, reason: String },
}

impl PipelineConfig {
    pub fn planarizing(&self) -> PlanarizingConfig {
        PlanarizingConfig {
            balance: self.balance,
            cap_factor: self.cap_factor,
        }
    }

    pub fn patch(&self) -> PatchConfig {
        PatchConfig {
            treewidth_threshold: self.treewidth_threshold,
            ring_surplus: self.ring_surplus,
            planarizing: self.planarizing(),
        }
    }

    pub fn orientable_threshold(&self, genus_budget: usize) -> f64 {
        self.orientable_alpha * (genus_budget * genus_budget) as f64
    }

    /// Noose length above which the vertex-deletion pipeline rejects.
    pub fn vertex_planarization_threshold(max_degree: usize, k: usize) -> usize {
        (2 * max_degree + 1) * k + 2
    }

    /// Overrides one field from a `key=value` pair; the value is parsed as JSON.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let mut doc = serde_json::to_value(*self).expect("config serializes");
        let slot = doc
            .get_mut(key)
            .ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
        *slot = serde_json::from_str(value).map_err(|e| ConfigError::BadValue {
            key: key.into(),
            reason: e.to_string(),
        })?;
        let updated: PipelineConfig = serde_json::from_value(doc).map_err(|e| ConfigError::BadValue {
            key: key.into(),
            reason: e.to_string(),
        })?;
        updated.validate().map_err(|reason| ConfigError::BadValue { key: key.into(), reason })?;
        *self = updated;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.treewidth_threshold == 0 {
            return Err("treewidth_threshold must be positive".into());
        }
        if self.ring_surplus < 3 {
            return Err("ring_surplus must be at least 3".into());
        }
        if !(self.cap_factor >= 1.0) {
            return Err("cap_factor below 1 would reject graphs within budget".into());
        }
        if !(self.balance > 0.5 && self.balance < 1.0) {
            return Err("balance must lie strictly between 1/2 and 1".into());
        }
        if !(self.orientable_alpha > 0.0) {
            return Err("orientable_alpha must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Drawn,
    Rejected,
}

/// Why a budget was rejected. Piece-based evidence refers to the normalized
/// form of the component `component` of the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RejectionEvidence {
    /// Too many disjoint non-planar induced pieces on one separator level.
    NonPlanarPieces {
        component: BTreeSet<Vertex>,
        rejection: PieceRejection,
    },
    /// Too many disjoint pieces of the skeleton whose framing is non-planar.
    FramedPieces {
        component: BTreeSet<Vertex>,
        rejection: PieceRejection,
        cycles: Vec<Vec<Vertex>>,
    },
    /// A drawing of a subgraph whose representativity exceeds the threshold.
    Representativity {
        representativity: usize,
        threshold: f64,
        projective: bool,
        drawing: EmbeddingRecord,
    },
}

impl RejectionEvidence {
    pub fn verify(&self, g: &Graph, cfg: &PipelineConfig, genus_budget: usize) -> bool {
        match self {
            RejectionEvidence::NonPlanarPieces { component, rejection } => {
                let (gn, _) = normalize(&g.induced(component));
                rejection.verify(&gn)
            }
            RejectionEvidence::FramedPieces {
                component,
                rejection,
                cycles,
            } => {
                let (gn, _) = normalize(&g.induced(component));
                let mut seen = BTreeSet::new();
                rejection.count == rejection.pieces.len()
                    && rejection.count > rejection.cap
                    && rejection.pieces.iter().all(|p| {
                        p.iter().all(|v| gn.contains(*v) && seen.insert(*v))
                            && frame(&gn.induced(p), cycles).is_ok_and(|f| !is_planar(&f))
                    })
            }
            RejectionEvidence::Representativity {
                representativity,
                threshold,
                projective,
                drawing,
            } => {
                let Ok(e) = drawing.to_embedding() else {
                    return false;
                };
                let sub = e.graph();
                let inside = sub.vertices().all(|v| g.contains(v))
                    && sub.edges().all(|edge| {
                        let (a, b) = edge.ends();
                        g.has_edge(a, b)
                    });
                let rho = shortest_noncontractible_noose(&e, NooseKind::Any).map(|n| n.length);
                let rho_ok = !*projective || (*representativity != 2 && representativity / 2 > genus_budget);
                inside
                    && !e.is_orientable()
                    && rho == Some(*representativity)
                    && *threshold >= cfg.orientable_threshold(genus_budget)
                    && (*representativity as f64) > *threshold
                    && *projective == (e.euler_genus() == 1)
                    && rho_ok
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawStats {
    pub components: usize,
    pub nonplanar_components: usize,
    pub normalization_steps: usize,
    pub patches: usize,
    pub skeleton_width: usize,
    /// Components whose skeleton loop stopped without a flat grid.
    pub skeleton_without_flat_grid: usize,
    /// Vertices removed to planarize framed skeletons.
    pub planarizing_vertices: usize,
    /// Vertices removed by cutting nooses in the orientable pipeline.
    pub noose_vertices: usize,
    /// Sum over patches of boundary edges missing from the planarized skeleton.
    pub missing_boundary_edges: usize,
}

impl DrawStats {
    fn absorb(&mut self, other: &DrawStats) {
        self.components += other.components;
        self.nonplanar_components += other.nonplanar_components;
        self.normalization_steps += other.normalization_steps;
        self.patches += other.patches;
        self.skeleton_width = self.skeleton_width.max(other.skeleton_width);
        self.skeleton_without_flat_grid += other.skeleton_without_flat_grid;
        self.planarizing_vertices += other.planarizing_vertices;
        self.noose_vertices += other.noose_vertices;
        self.missing_boundary_edges += other.missing_boundary_edges;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenusCertificate {
    pub verdict: Verdict,
    pub genus_budget: usize,
    /// Euler genus of the drawing.
    pub genus: Option<usize>,
    pub orientable: Option<bool>,
    pub embedding: Option<EmbeddingRecord>,
    pub rejection_evidence: Option<RejectionEvidence>,
    pub stats: DrawStats,
    pub config: PipelineConfig,
    #[serde(skip)]
    pub drawing: Option<RotationEmbedding>,
}

impl GenusCertificate {
    fn drawn(e: RotationEmbedding, genus_budget: usize, stats: DrawStats, cfg: &PipelineConfig) -> Self {
        GenusCertificate {
            verdict: Verdict::Drawn,
            genus_budget,
            genus: Some(e.euler_genus()),
            orientable: Some(e.is_orientable()),
            embedding: Some(EmbeddingRecord::from(&e)),
            rejection_evidence: None,
            stats,
            config: *cfg,
            drawing: Some(e),
        }
    }

    fn rejected(evidence: RejectionEvidence, genus_budget: usize, stats: DrawStats, cfg: &PipelineConfig) -> Self {
        GenusCertificate {
            verdict: Verdict::Rejected,
            genus_budget,
            genus: None,
            orientable: None,
            embedding: None,
            rejection_evidence: Some(evidence),
            stats,
            config: *cfg,
            drawing: None,
        }
    }

    pub fn is_drawn(&self) -> bool {
        self.verdict == Verdict::Drawn
    }

    /// Re-traces a drawing against `g`, or re-checks the rejection evidence.
    pub fn verify(&self, g: &Graph) -> bool {
        match (&self.embedding, &self.rejection_evidence) {
            (Some(rec), None) => rec.to_embedding().is_ok_and(|e| {
                e.embeds(g)
                    && Some(e.euler_genus()) == self.genus
                    && Some(e.is_orientable()) == self.orientable
            }),
            (None, Some(ev)) => ev.verify(g, &self.config, self.genus_budget),
            _ => false,
        }
    }
}

#[derive(Debug, Error)]
pub enum DrawError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("patch computation failed: {0}")]
    Patch(PatchError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

enum Outcome {
    Drawn(RotationEmbedding, DrawStats),
    Rejected(RejectionEvidence),
}

/// Euler-genus drawing: either an embedding of `g` or a sound rejection of
/// `eg(g) <= genus_budget`.
pub fn draw_euler(g: &Graph, genus_budget: usize, cfg: &PipelineConfig) -> Result<GenusCertificate, DrawError> {
    cfg.validate().map_err(DrawError::Config)?;
    let comps = g.component_subgraphs();
    let outcomes: Vec<Result<Outcome, DrawError>> = comps
        .par_iter()
        .map(|c| draw_component(c, genus_budget, cfg))
        .collect();
    let mut stats = DrawStats::default();
    let mut drawing = RotationEmbedding::from_rotation(BTreeMap::new())?;
    for outcome in outcomes {
        match outcome? {
            Outcome::Drawn(e, s) => {
                stats.absorb(&s);
                drawing = drawing.disjoint_union(&e);
            }
            Outcome::Rejected(ev) => return Ok(GenusCertificate::rejected(ev, genus_budget, stats, cfg)),
        }
    }
    if !drawing.embeds(g) {
        return Err(DrawError::Invariant("drawing does not match the input graph".into()));
    }
    Ok(GenusCertificate::drawn(drawing, genus_budget, stats, cfg))
}

fn draw_component(comp: &Graph, genus_budget: usize, cfg: &PipelineConfig) -> Result<Outcome, DrawError> {
    let mut stats = DrawStats {
        components: 1,
        ..DrawStats::default()
    };
    if let Some(e) = planar_embedding(comp) {
        return Ok(Outcome::Drawn(e, stats));
    }
    stats.nonplanar_components = 1;
    let component = comp.vertex_set();
    let (gn, log) = normalize(comp);
    stats.normalization_steps = log.len();
    if genus_budget == 0 {
        let rejection = PieceRejection {
            level: 0,
            count: 1,
            cap: 0,
            pieces: vec![gn.vertex_set()],
        };
        return Ok(Outcome::Rejected(RejectionEvidence::NonPlanarPieces { component, rejection }));
    }
    let drawn = match draw_normalized(&gn, genus_budget, cfg, &mut stats)? {
        Ok(e) => e,
        Err(rejection) => {
            return Ok(Outcome::Rejected(match rejection {
                NormalizedRejection::Pieces(rejection) => RejectionEvidence::NonPlanarPieces { component, rejection },
                NormalizedRejection::Framed(rejection, cycles) => RejectionEvidence::FramedPieces {
                    component,
                    rejection,
                    cycles,
                },
            }))
        }
    };
    let e = denormalize_embedding(&log, &drawn)?;
    if !e.embeds(comp) {
        return Err(DrawError::Invariant("denormalized drawing misses part of the component".into()));
    }
    Ok(Outcome::Drawn(e, stats))
}

enum NormalizedRejection {
    Pieces(PieceRejection),
    Framed(PieceRejection, Vec<Vec<Vertex>>),
}

fn draw_normalized(
    gn: &Graph,
    genus_budget: usize,
    cfg: &PipelineConfig,
    stats: &mut DrawStats,
) -> Result<Result<RotationEmbedding, NormalizedRejection>, DrawError> {
    if let Some(e) = planar_embedding(gn) {
        return Ok(Ok(e));
    }
    let skel = match compute_skeleton(gn, genus_budget, &cfg.patch()) {
        Ok(s) => s,
        Err(PatchError::Reject(r)) => return Ok(Err(NormalizedRejection::Pieces(r))),
        Err(e) => return Err(DrawError::Patch(e)),
    };
    stats.patches = skel.patches.len();
    stats.skeleton_width = skel.width;
    stats.skeleton_without_flat_grid = usize::from(skel.stop == SkeletonStop::NoFlatGrid);
    let removed = match planarize_framed_skeleton(&skel.graph, &skel.patches, genus_budget, cfg) {
        Ok(s) => s,
        Err(r) => return Ok(Err(NormalizedRejection::Framed(r, boundary_cycles(&skel.patches)))),
    };
    stats.planarizing_vertices = removed.len();
    let (glued, missing) = glue_patches(gn, &skel, &removed)?;
    stats.missing_boundary_edges = missing;
    let genus = glued.euler_genus();
    if genus > 3 * missing {
        return Err(DrawError::Invariant(format!(
            "patch extension reached Euler genus {genus}, above 3 x {missing} missing boundary edges"
        )));
    }
    let full = reattach(gn, glued, &removed)?;
    Ok(Ok(full))
}

/// Vertex set `S` such that every component of `skel − S` has a planar
/// framing, pruned greedily; or a rejection when too many pieces on one
/// level have non-planar framings.
pub fn planarize_framed_skeleton(
    skel: &Graph,
    ps: &PatchSet,
    genus_budget: usize,
    cfg: &PipelineConfig,
) -> Result<BTreeSet<Vertex>, PieceRejection> {
    let cycles = boundary_cycles(ps);
    let framed_planar = |h: &Graph| is_planar(&frame(h, &cycles).expect("host ids are below the framing range"));
    let mut s = leveled_removal(skel, genus_budget, &cfg.planarizing(), framed_planar)?;
    for v in s.clone() {
        s.remove(&v);
        if !framed_planar(&skel.without_vertices(&s)) {
            s.insert(v);
        }
    }
    Ok(s)
}

/// Interior neighbours of boundary vertex `cycle[i]` in a disk drawing,
/// listed from the side of `cycle[i-1]` to the side of `cycle[i+1]`.
fn inner_neighbours(disk: &RotationEmbedding, cycle: &[Vertex], i: usize) -> Vec<Vertex> {
    let k = cycle.len();
    let (prev, next) = (cycle[(i + k - 1) % k], cycle[(i + 1) % k]);
    let rot = disk.rotation_at(cycle[i]);
    let d = rot.len();
    let p = rot.iter().position(|&x| x == prev).expect("cycle neighbour");
    let forward: Vec<Vertex> = (1..d).map(|j| rot[(p + j) % d]).take_while(|&x| x != next).collect();
    if !forward.is_empty() {
        return forward;
    }
    let n = rot.iter().position(|&x| x == next).expect("cycle neighbour");
    let mut backward: Vec<Vertex> = (1..d).map(|j| rot[(n + j) % d]).take_while(|&x| x != prev).collect();
    backward.reverse();
    backward
}

/// Moves the disk-side copies of the segment's boundary vertices onto the
/// real vertices, in the slots left by the segment's framing.
fn glue_segment(
    u: &RotationEmbedding,
    cycle_id: usize,
    cycle: &[Vertex],
    positions: &[usize],
    copy: &BTreeMap<Vertex, Vertex>,
    reverse: bool,
    twist: Sign,
) -> RotationEmbedding {
    let mut out = u.clone();
    let mut framing = BTreeSet::new();
    for &i in positions {
        let (c, c2) = (cycle[i], copy[&cycle[i]]);
        let slot = framing_id(cycle_id as u32, 2, i as u32);
        framing.insert(slot);
        framing.insert(framing_id(cycle_id as u32, 3, i as u32));
        let mut list = out.rotation_at(c2).to_vec();
        if reverse {
            list.reverse();
        }
        for &x in &list {
            let rot = out.rotation_mut().get_mut(&x).expect("disk vertex");
            let at = rot.iter().position(|&y| y == c2).expect("copy neighbour");
            rot[at] = c;
            let s = out.signs_mut().remove(&Edge::new(c2, x)).expect("signed disk edge");
            out.signs_mut().insert(Edge::new(c, x), s * twist);
        }
        let rot = out.rotation_mut().get_mut(&c).expect("boundary vertex drawn");
        let at = rot.iter().position(|&y| y == slot).expect("framing slot");
        rot.splice(at..=at, list);
        out.rotation_mut().remove(&c2);
        out.rotation_mut()
            .get_mut(&slot)
            .expect("framing vertex")
            .retain(|&y| y != c);
        out.signs_mut().remove(&Edge::new(c, slot));
    }
    out.without_vertices(&framing)
}

/// Planar drawing of the framed remainder with every patch interior glued
/// back in; returns the drawing of `gn − removed` and `Σ n_C`.
fn glue_patches(
    gn: &Graph,
    skel: &Skeleton,
    removed: &BTreeSet<Vertex>,
) -> Result<(RotationEmbedding, usize), DrawError> {
    let rest = skel.graph.without_vertices(removed);
    let cycles = boundary_cycles(&skel.patches);
    let framed = frame(&rest, &cycles).map_err(|e| DrawError::Invariant(e.to_string()))?;
    let mut u = planar_embedding(&framed)
        .ok_or_else(|| DrawError::Invariant("framed remainder is not planar".into()))?;
    let mut next_id = gn.fresh_id();
    let mut missing = 0;
    for (id, patch) in skel.patches.patches.iter().enumerate() {
        let cyc = &patch.cycle;
        let k = cyc.len();
        missing += (0..k).filter(|&i| !rest.has_edge(cyc[i], cyc[(i + 1) % k])).count();
        let on_cycle = patch.cycle_set();
        let mut xg = Graph::new();
        for &v in &patch.vertices {
            xg.add_vertex(v);
        }
        for e in &patch.edges {
            let (a, b) = e.ends();
            let chord = on_cycle.contains(&a) && on_cycle.contains(&b) && !is_cycle_edge(cyc, a, b);
            if !chord {
                xg.add_edge(a, b).expect("patch edges are simple");
            }
        }
        let disk = embed_patch_in_disk(&xg, cyc)?;
        let copy: BTreeMap<Vertex, Vertex> = cyc
            .iter()
            .map(|&c| {
                next_id += 1;
                (c, Vertex(next_id - 1))
            })
            .collect();
        let rename = |v: Vertex| copy.get(&v).copied().unwrap_or(v);
        let mut rotation = BTreeMap::new();
        for v in disk.vertices() {
            let rot = match cyc.iter().position(|&c| c == v) {
                Some(i) => inner_neighbours(&disk, cyc, i),
                None => disk.rotation_at(v).to_vec(),
            };
            rotation.insert(rename(v), rot.into_iter().map(rename).collect());
        }
        let signs = disk
            .signs()
            .iter()
            .filter(|(e, _)| {
                let (a, b) = e.ends();
                !(on_cycle.contains(&a) && on_cycle.contains(&b))
            })
            .map(|(e, &s)| {
                let (a, b) = e.ends();
                (Edge::new(rename(a), rename(b)), s)
            })
            .collect();
        let d = RotationEmbedding::new(rotation, signs)?;
        u = u.disjoint_union(&d);
        let runs = match segments(&rest, cyc) {
            None => vec![(0..k).collect::<Vec<usize>>()],
            Some(runs) => runs,
        };
        for run in runs {
            let best = [(false, Sign::Plus), (true, Sign::Plus), (false, Sign::Minus), (true, Sign::Minus)]
                .into_iter()
                .map(|(rev, twist)| glue_segment(&u, id, cyc, &run, &copy, rev, twist))
                .min_by_key(RotationEmbedding::euler_genus)
                .expect("four variants");
            u = best;
        }
        let leftover: BTreeSet<Vertex> = copy.values().copied().filter(|&c| u.contains(c)).collect();
        u = u.without_vertices(&leftover);
    }
    let framing: BTreeSet<Vertex> = u.vertices().filter(|&v| is_framing_vertex(v)).collect();
    u = u.without_vertices(&framing);
    if !u.embeds(&gn.without_vertices(removed)) {
        return Err(DrawError::Invariant("glued drawing does not match the graph minus the planarizing set".into()));
    }
    Ok((u, missing))
}

fn is_cycle_edge(cycle: &[Vertex], a: Vertex, b: Vertex) -> bool {
    let k = cycle.len();
    (0..k).any(|i| Edge::new(cycle[i], cycle[(i + 1) % k]) == Edge::new(a, b))
}

/// Adds the vertices of `removed` back with all their edges to drawn
/// vertices, most-connected first; every edge that shares no face with its
/// partner costs a handle.
pub fn reattach(
    g: &Graph,
    mut e: RotationEmbedding,
    removed: &BTreeSet<Vertex>,
) -> Result<RotationEmbedding, EmbeddingError> {
    let mut pending: BTreeSet<Vertex> = removed.iter().copied().filter(|&v| !e.contains(v)).collect();
    while !pending.is_empty() {
        let x = *pending
            .iter()
            .max_by_key(|&&v| {
                let drawn = g.neighbors(v).iter().filter(|&&w| e.contains(w)).count();
                (drawn, std::cmp::Reverse(v))
            })
            .expect("pending is nonempty");
        let nbrs: Vec<Vertex> = g.neighbors(x).iter().copied().filter(|&w| e.contains(w)).collect();
        e = e.attach_vertex(x, &nbrs)?;
        pending.remove(&x);
    }
    Ok(e)
}

/// Orientable drawing: either an orientable embedding of `g` or a sound
/// rejection of `genus(g) <= genus_budget`.
pub fn draw_orientable(g: &Graph, genus_budget: usize, cfg: &PipelineConfig) -> Result<GenusCertificate, DrawError> {
    let euler = draw_euler(g, 2 * genus_budget, cfg)?;
    let mut stats = euler.stats.clone();
    let Some(mut e) = euler.drawing else {
        let ev = euler.rejection_evidence.expect("rejections carry evidence");
        return Ok(GenusCertificate::rejected(ev, genus_budget, stats, cfg));
    };
    let mut h = g.clone();
    let mut removed = BTreeSet::new();
    let threshold = cfg.orientable_threshold(genus_budget);
    while !e.is_orientable() {
        let noose = shortest_noncontractible_noose(&e, NooseKind::Any)
            .ok_or_else(|| DrawError::Invariant("nonorientable drawing without a noncontractible noose".into()))?;
        let rho = noose.length;
        if rho as f64 > threshold {
            let anchor = noose.vertices()[0];
            let comp: BTreeSet<Vertex> = e
                .components()
                .into_iter()
                .find(|c| c.contains(&anchor))
                .expect("noose lies in a component")
                .into_iter()
                .collect();
            let part = e.restrict(&comp);
            let projective = part.euler_genus() == 1;
            // In the projective plane the orientable genus is exactly floor(rho / 2) unless rho = 2.
            let sound = !projective || (rho != 2 && rho / 2 > genus_budget);
            if sound {
                let ev = RejectionEvidence::Representativity {
                    representativity: rho,
                    threshold,
                    projective,
                    drawing: EmbeddingRecord::from(&part),
                };
                return Ok(GenusCertificate::rejected(ev, genus_budget, stats, cfg));
            }
        }
        let (h2, e2) = cut_vertices_of_noose_and_restrict(&h, &e, &noose)?;
        removed.extend(noose.vertex_set());
        h = h2;
        e = e2;
    }
    stats.noose_vertices = removed.len();
    let e = reattach(g, e, &removed)?;
    let e = e
        .to_all_plus()
        .ok_or_else(|| DrawError::Invariant("reattachment lost orientability".into()))?;
    if e.euler_genus() % 2 != 0 || !e.embeds(g) {
        return Err(DrawError::Invariant("orientable drawing failed revalidation".into()));
    }
    Ok(GenusCertificate::drawn(e, genus_budget, stats, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    #[test]
    fn planar_inputs_are_drawn_flat() {
        let cfg = PipelineConfig::default();
        for g in [grid(5, 5), wheel(6), cube()] {
            let c = draw_euler(&g, 0, &cfg).unwrap();
            assert_eq!(c.genus, Some(0));
            assert!(c.verify(&g));
        }
    }

    #[test]
    fn k5_without_budget_is_rejected() {
        let g = complete(5);
        let c = draw_euler(&g, 0, &PipelineConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Rejected);
        assert!(c.verify(&g));
    }

    #[test]
    fn k5_with_budget_one_is_drawn() {
        let g = complete(5);
        let c = draw_euler(&g, 1, &PipelineConfig::default()).unwrap();
        assert!(c.is_drawn());
        assert!(c.genus.unwrap() >= 1);
        assert!(c.verify(&g));
    }

    #[test]
    fn orientable_k33() {
        let g = complete_bipartite(3, 3);
        let c = draw_orientable(&g, 1, &PipelineConfig::default()).unwrap();
        assert!(c.is_drawn());
        assert_eq!(c.orientable, Some(true));
        assert_eq!(c.genus.unwrap() % 2, 0);
        assert!(c.verify(&g));
    }

    #[test]
    fn three_k5s_exceed_budget_one() {
        let g = disjoint_union(&disjoint_union(&complete(5), &complete(5)), &complete(5));
        // Components are drawn independently, so each K5 fits budget 1 on its own.
        let c = draw_euler(&g, 1, &PipelineConfig::default()).unwrap();
        assert!(c.verify(&g));
        let ps = PatchSet::default();
        let r = planarize_framed_skeleton(&g, &ps, 1, &PipelineConfig::default()).unwrap_err();
        assert_eq!(r.count, 3);
        assert!(r.verify(&g));
    }

    #[test]
    fn set_overrides_and_validates() {
        let mut cfg = PipelineConfig::default();
        cfg.set("treewidth_threshold", "20").unwrap();
        assert_eq!(cfg.treewidth_threshold, 20);
        assert!(matches!(cfg.set("nope", "1"), Err(ConfigError::UnknownKey(_))));
        assert!(cfg.set("balance", "0.2").is_err());
        assert_eq!(cfg.balance, 2.0 / 3.0);
    }
}
