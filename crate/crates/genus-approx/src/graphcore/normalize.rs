use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Edge, Graph, Vertex};
use crate::embedding::{planar_embedding, EmbeddingError, RotationEmbedding};
use crate::planarity::is_planar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeKind {
    Petal,
    Clump,
}

/// A free piece: `vertices` includes the portals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeSubgraph {
    pub vertices: BTreeSet<Vertex>,
    pub portals: Vec<Vertex>,
    pub kind: FreeKind,
}

impl FreeSubgraph {
    pub fn interior(&self) -> BTreeSet<Vertex> {
        let mut inner = self.vertices.clone();
        for t in &self.portals {
            inner.remove(t);
        }
        inner
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub kind: FreeKind,
    pub portals: Vec<Vertex>,
    /// The removed piece with portals, without any portal–portal edge.
    pub piece: Graph,
    pub edge_added: bool,
    /// Planar rotation of the piece (plus a helper vertex joined to both
    /// portals for clumps) with the portals on one face.
    pub drawing: BTreeMap<Vertex, Vec<Vertex>>,
    /// Helper vertex id used in `drawing` for clumps.
    pub helper: Option<Vertex>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReplayLog {
    pub steps: Vec<ReplayStep>,
}

impl ReplayLog {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Rebuilds the original graph from the normalized one.
    pub fn replay_graph(&self, normalized: &Graph) -> Graph {
        let mut g = normalized.clone();
        for step in self.steps.iter().rev() {
            if step.edge_added {
                g.remove_edge(step.portals[0], step.portals[1]);
            }
            g = g.union(&step.piece);
        }
        g
    }
}

/// Articulation points of `g` restricted to `comp` minus `skip`.
fn articulation_points(g: &Graph, comp: &[Vertex], skip: Option<Vertex>) -> Vec<Vertex> {
    let verts: Vec<Vertex> = comp.iter().copied().filter(|&v| Some(v) != skip).collect();
    let index: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| g.neighbors(v).iter().filter_map(|w| index.get(w).copied()).collect())
        .collect();
    let n = verts.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbour index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&i| is_cut[i]).map(|i| verts[i]).collect()
}

fn split_off(g: &Graph, comp: &BTreeSet<Vertex>, cut: &[Vertex]) -> Vec<Vec<Vertex>> {
    let blocked: BTreeSet<Vertex> = cut.iter().copied().collect();
    let mut seen = blocked.clone();
    let mut parts = Vec::new();
    for &s in comp {
        if seen.contains(&s) {
            continue;
        }
        let part = g.reach(s, |v| !blocked.contains(&v));
        seen.extend(part.iter().copied());
        parts.push(part);
    }
    parts
}

fn is_portal_path(h: &Graph, portals: &[Vertex]) -> bool {
    portals.len() == 2
        && h.edge_count() + 1 == h.vertex_count()
        && h.is_connected()
        && h.vertices().all(|v| {
            let d = h.degree(v);
            if portals.contains(&v) {
                d == 1
            } else {
                d == 2
            }
        })
}

fn with_helper(piece: &Graph, portals: &[Vertex]) -> (Graph, Vertex) {
    let z = Vertex(piece.fresh_id());
    let mut aug = piece.clone();
    for &t in portals {
        aug.add_edge(z, t).expect("helper is fresh");
    }
    (aug, z)
}

struct Candidate {
    key: (usize, usize, Reverse<usize>, Vec<Vertex>, Vec<Vertex>),
    portals: Vec<Vertex>,
    vertices: BTreeSet<Vertex>,
}

fn candidate(g: &Graph, part: &[Vertex], cut: &[Vertex]) -> Option<Candidate> {
    let attached: Vec<Vertex> = cut
        .iter()
        .copied()
        .filter(|&t| g.neighbors(t).iter().any(|w| part.contains(w)))
        .collect();
    if attached.len() != cut.len() {
        return None;
    }
    let vertices: BTreeSet<Vertex> = part.iter().chain(cut).copied().collect();
    let portals: Vec<Vertex> = vertices
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|w| !vertices.contains(w)))
        .collect();
    if portals != cut {
        return None;
    }
    let h = g.induced(&vertices);
    let remaining = g.edge_count() - h.edge_count() + usize::from(cut.len() == 2);
    let key = (
        cut.len(),
        part.len(),
        Reverse(remaining),
        cut.to_vec(),
        vertices.iter().copied().collect(),
    );
    Some(Candidate { key, portals, vertices })
}

fn accept(g: &Graph, c: &Candidate) -> bool {
    let h = g.induced(&c.vertices);
    if is_portal_path(&h, &c.portals) {
        return false;
    }
    match c.portals.len() {
        1 => is_planar(&h),
        _ => is_planar(&with_helper(&h, &c.portals).0),
    }
}

fn best_accepted(g: &Graph, mut cands: Vec<Candidate>) -> Option<FreeSubgraph> {
    cands.sort_by(|a, b| a.key.cmp(&b.key));
    cands.into_iter().find(|c| accept(g, c)).map(|c| FreeSubgraph {
        kind: if c.portals.len() == 1 { FreeKind::Petal } else { FreeKind::Clump },
        vertices: c.vertices,
        portals: c.portals,
    })
}

/// Finds a free subgraph with one or two portals, preferring petals.
///
/// The smallest interior wins; ties keep more edges, then compare portal
/// and vertex ids.
pub fn find_free_subgraph(g: &Graph) -> Option<FreeSubgraph> {
    let comps = g.components();
    let mut petals = Vec::new();
    for comp in &comps {
        let set: BTreeSet<Vertex> = comp.iter().copied().collect();
        for t in articulation_points(g, comp, None) {
            for part in split_off(g, &set, &[t]) {
                petals.extend(candidate(g, &part, &[t]));
            }
        }
    }
    if let Some(found) = best_accepted(g, petals) {
        return Some(found);
    }
    let mut clumps = Vec::new();
    for comp in &comps {
        let set: BTreeSet<Vertex> = comp.iter().copied().collect();
        for &u in comp {
            for w in articulation_points(g, comp, Some(u)) {
                if w < u {
                    continue;
                }
                for part in split_off(g, &set, &[u, w]) {
                    clumps.extend(candidate(g, &part, &[u, w]));
                }
            }
        }
    }
    best_accepted(g, clumps)
}

/// Removes free subgraphs until none is left.
pub fn normalize(g: &Graph) -> (Graph, ReplayLog) {
    let mut current = g.clone();
    let mut log = ReplayLog::default();
    while let Some(free) = find_free_subgraph(&current) {
        let mut piece = current.induced(&free.vertices);
        let mut edge_added = false;
        if let [t1, t2] = free.portals[..] {
            piece.remove_edge(t1, t2);
            edge_added = !current.has_edge(t1, t2);
        }
        let (drawing, helper) = match free.kind {
            FreeKind::Petal => {
                let e = planar_embedding(&piece).expect("petals are planar");
                (e.rotation().clone(), None)
            }
            FreeKind::Clump => {
                let (aug, z) = with_helper(&piece, &free.portals);
                let e = planar_embedding(&aug).expect("clumps are planar with portals outside");
                (e.rotation().clone(), Some(z))
            }
        };
        current = current.without_vertices(&free.interior());
        if let [t1, t2] = free.portals[..] {
            current.add_edge(t1, t2).expect("portals are distinct");
        }
        log.steps.push(ReplayStep {
            kind: free.kind,
            portals: free.portals,
            piece,
            edge_added,
            drawing,
            helper,
        });
    }
    (current, log)
}

fn rotated_after(rot: &[Vertex], anchor: Vertex) -> Vec<Vertex> {
    let i = rot.iter().position(|&w| w == anchor).expect("anchor in rotation");
    rot[i + 1..].iter().chain(&rot[..i]).copied().collect()
}

/// Inserts `block` into the rotation of `at`, right after `anchor`.
fn splice_after(e: &mut RotationEmbedding, at: Vertex, anchor: Vertex, block: &[Vertex]) {
    let rot = e.rotation_mut().get_mut(&at).expect("portal present");
    let i = rot.iter().position(|&w| w == anchor).expect("anchor in rotation");
    rot.splice(i + 1..i + 1, block.iter().copied());
}

fn copy_interior(e: &mut RotationEmbedding, step: &ReplayStep) {
    for (&v, rot) in &step.drawing {
        if step.portals.contains(&v) || Some(v) == step.helper {
            continue;
        }
        e.rotation_mut().insert(v, rot.clone());
    }
    for edge in step.piece.edges() {
        e.signs_mut().insert(edge, crate::embedding::Sign::Plus);
    }
}

fn replay_petal(e: &mut RotationEmbedding, step: &ReplayStep) {
    let t = step.portals[0];
    let block = step.drawing[&t].clone();
    copy_interior(e, step);
    let current = e.rotation_at(t).to_vec();
    match current.first() {
        None => {
            e.rotation_mut().insert(t, block);
        }
        Some(&anchor) => splice_after(e, t, anchor, &block),
    }
}

fn replay_clump(e: &mut RotationEmbedding, step: &ReplayStep) {
    let (t1, t2) = (step.portals[0], step.portals[1]);
    let z = step.helper.expect("clumps carry a helper");
    let twisted = !e.sign(t1, t2).is_plus();
    if twisted {
        e.switch_at(t2);
    }
    let block1 = rotated_after(&step.drawing[&t1], z);
    let block2 = rotated_after(&step.drawing[&t2], z);
    copy_interior(e, step);
    splice_after(e, t1, t2, &block1);
    let before = e.pred(t2, t1);
    // Insert just before t1 at t2, i.e. right after its predecessor.
    if before == t1 {
        let rot = e.rotation_mut().get_mut(&t2).expect("portal present");
        rot.extend(block2.iter().copied());
    } else {
        splice_after(e, t2, before, &block2);
    }
    if twisted {
        e.switch_at(t2);
    }
    if step.edge_added {
        e.remove_edge(t1, t2);
    }
}

/// Extends a drawing of the normalized graph to the original graph on the same surface.
pub fn denormalize_embedding(log: &ReplayLog, e: &RotationEmbedding) -> Result<RotationEmbedding, EmbeddingError> {
    let mut out = e.clone();
    for step in log.steps.iter().rev() {
        for &t in &step.portals {
            if !out.contains(t) {
                return Err(EmbeddingError::MissingVertex(t));
            }
        }
        if let Some(v) = step
            .piece
            .vertices()
            .find(|v| !step.portals.contains(v) && out.contains(*v))
        {
            return Err(EmbeddingError::Malformed(format!("vertex {v} of a removed piece is already drawn")));
        }
        match step.kind {
            FreeKind::Petal => replay_petal(&mut out, step),
            FreeKind::Clump => {
                let (t1, t2) = (step.portals[0], step.portals[1]);
                if !out.has_edge(t1, t2) {
                    return Err(EmbeddingError::Malformed(format!(
                        "portal edge {} missing",
                        Edge::new(t1, t2)
                    )));
                }
                replay_clump(&mut out, step);
            }
        }
    }
    let checked = RotationEmbedding::new_strict(out.rotation().clone(), out.signs().clone())?;
    debug_assert_eq!(checked.euler_genus(), e.euler_genus());
    Ok(checked)
}
