//! Universal patches, patch merging, skeletons and graph framing.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::decomp::{approx_tree_decomposition, PieceRejection, PlanarizingConfig};
use crate::embedding::{planar_embedding, RotationEmbedding};
use crate::graphcore::{find_free_subgraph, Edge, FreeKind, Graph, Vertex};
use crate::gridminor::{planarly_nested_sequence, GridError, NestedCycles};

/// A cycle `cycle` together with the subgraph it encloses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Patch {
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<Edge>,
    pub cycle: Vec<Vertex>,
}

impl Patch {
    /// The patch spanned by `cycle` and the vertices `inside` it: every edge
    /// at an inner vertex plus the cycle edges.
    pub fn enclosed(g: &Graph, cycle: Vec<Vertex>, inside: &BTreeSet<Vertex>) -> Patch {
        let mut edges: BTreeSet<Edge> = cycle_edges(&cycle).collect();
        for &v in inside {
            edges.extend(g.neighbors(v).iter().map(|&w| Edge::new(v, w)));
        }
        let vertices = inside.iter().chain(&cycle).copied().collect();
        Patch { vertices, edges, cycle }
    }

    pub fn cycle_set(&self) -> BTreeSet<Vertex> {
        self.cycle.iter().copied().collect()
    }

    /// Vertices of the patch not on its boundary cycle.
    pub fn interior(&self) -> BTreeSet<Vertex> {
        let c = self.cycle_set();
        self.vertices.iter().copied().filter(|v| !c.contains(v)).collect()
    }

    /// Boundary is a cycle of `g` inside the patch, and the patch is larger than it.
    pub fn is_well_formed(&self, g: &Graph) -> bool {
        let c = self.cycle_set();
        c.len() == self.cycle.len()
            && c.len() >= 3
            && cycle_edges(&self.cycle).all(|e| {
                let (a, b) = e.ends();
                g.has_edge(a, b) && self.edges.contains(&e)
            })
            && c.is_subset(&self.vertices)
            && self.edges.iter().all(|e| {
                let (a, b) = e.ends();
                g.has_edge(a, b) && self.vertices.contains(&a) && self.vertices.contains(&b)
            })
            && (self.vertices.len() > c.len() || self.edges.len() > c.len())
    }

    /// `(X, C)` is a patch of the drawing `e`: `C` bounds a disk whose
    /// contents are exactly `X`.
    pub fn is_patch_of(&self, e: &RotationEmbedding) -> bool {
        let mut inner = e.restrict(&self.vertices);
        for edge in inner.edges().collect::<Vec<_>>() {
            if !self.edges.contains(&edge) {
                let (a, b) = edge.ends();
                inner.remove_edge(a, b);
            }
        }
        if inner.edge_count() != self.edges.len() || inner.components().len() != 1 || inner.euler_genus() != 0 {
            return false;
        }
        let c = self.cycle_set();
        let Some(face) = inner
            .trace_faces()
            .into_iter()
            .find(|f| f.len() == self.cycle.len() && f.vertex_set() == c)
        else {
            return false;
        };
        let corners: Vec<_> = face.corners().collect();
        corners.into_iter().all(|corner| {
            let (a, b) = if corner.state.is_plus() {
                (corner.from, corner.to)
            } else {
                (corner.to, corner.from)
            };
            let v = corner.at;
            let full = e.rotation_at(v);
            let start = full.iter().position(|&x| x == a).expect("restricted neighbour");
            let mut in_gap = BTreeSet::new();
            let mut i = (start + 1) % full.len();
            while full[i] != b {
                in_gap.insert(full[i]);
                i = (i + 1) % full.len();
            }
            let outside: BTreeSet<Vertex> = full
                .iter()
                .copied()
                .filter(|&w| !self.edges.contains(&Edge::new(v, w)))
                .collect();
            in_gap == outside
        })
    }
}

fn cycle_edges(cycle: &[Vertex]) -> impl Iterator<Item = Edge> + '_ {
    (0..cycle.len()).map(move |i| Edge::new(cycle[i], cycle[(i + 1) % cycle.len()]))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PatchSet {
    pub patches: Vec<Patch>,
}

/// Overlap: the interior of one patch meets the other patch.
pub fn overlapping(a: &Patch, b: &Patch) -> bool {
    let meets = |p: &Patch, q: &Patch| p.interior().iter().any(|v| q.vertices.contains(v));
    meets(a, b) || meets(b, a)
}

impl PatchSet {
    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// `X_i ∩ X_j = C_i ∩ C_j` for all pairs, on vertices and edges.
    pub fn is_non_overlapping(&self) -> bool {
        self.patches.iter().enumerate().all(|(i, a)| {
            self.patches[i + 1..].iter().all(|b| {
                let cv: BTreeSet<Vertex> = a.cycle_set().intersection(&b.cycle_set()).copied().collect();
                let xv: BTreeSet<Vertex> = a.vertices.intersection(&b.vertices).copied().collect();
                let ce: BTreeSet<Edge> = cycle_edges(&a.cycle)
                    .filter(|e| cycle_edges(&b.cycle).any(|f| f == *e))
                    .collect();
                let xe: BTreeSet<Edge> = a.edges.intersection(&b.edges).copied().collect();
                cv == xv && ce == xe
            })
        })
    }

    /// All interior vertices across the set.
    pub fn interiors(&self) -> BTreeSet<Vertex> {
        self.patches.iter().flat_map(Patch::interior).collect()
    }
}

/// Absorbs every member overlapping `newp` into it; the result keeps `newp`'s cycle.
pub fn merge_patches(ps: &PatchSet, newp: Patch) -> PatchSet {
    let mut merged = newp;
    let mut rest = ps.patches.clone();
    // Absorbing a member can make the merged patch overlap one seen earlier.
    while let Some(i) = rest.iter().position(|p| overlapping(p, &merged)) {
        let p = rest.remove(i);
        merged.vertices.extend(p.vertices);
        merged.edges.extend(p.edges);
    }
    rest.push(merged);
    let out = PatchSet { patches: rest };
    debug_assert!(out.is_non_overlapping());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PatchConfig {
    /// Width certificate at which the skeleton loop stops.
    pub treewidth_threshold: usize,
    /// Nested cycles requested beyond the budget: `k = budget + ring_surplus`.
    pub ring_surplus: usize,
    pub planarizing: PlanarizingConfig,
}

impl Default for PatchConfig {
    fn default() -> Self {
        PatchConfig {
            treewidth_threshold: 12,
            ring_surplus: 3,
            planarizing: PlanarizingConfig::default(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PatchError {
    #[error(transparent)]
    Reject(#[from] PieceRejection),
    #[error("no flat grid of side {0} was found")]
    TooSmall(usize),
    #[error("input graph is not normalized")]
    NotNormalized,
    #[error("normalization violated: {0}")]
    NormalizationViolated(String),
}

impl From<GridError> for PatchError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::Reject(r) => PatchError::Reject(r),
            GridError::TooSmall(r) => PatchError::TooSmall(r),
        }
    }
}

/// The two boundary walks from `t` to `u` of a planar drawing of `q` with
/// `t` and `u` on the outer face, each reduced to a path.
fn outer_walks(q: &Graph, t: Vertex, u: Vertex) -> Vec<Vec<Vertex>> {
    let mut h = q.clone();
    h.add_edge(t, u).expect("portals are distinct");
    let Some(e) = planar_embedding(&h) else {
        return Vec::new();
    };
    let mut walks = Vec::new();
    for face in e.trace_faces() {
        let k = face.len();
        for i in 0..k {
            let s = face.steps[i];
            if !((s.from == t && s.to == u) || (s.from == u && s.to == t)) {
                continue;
            }
            let mut walk: Vec<Vertex> = (1..=k).map(|j| face.steps[(i + j) % k].from).collect();
            // walk runs from s.to around to s.from
            if walk[0] != t {
                walk.reverse();
            }
            walks.push(simplify_walk(&walk));
        }
    }
    walks.sort();
    walks.dedup();
    walks
}

fn simplify_walk(walk: &[Vertex]) -> Vec<Vertex> {
    let mut path: Vec<Vertex> = Vec::new();
    for &v in walk {
        if let Some(i) = path.iter().position(|&x| x == v) {
            path.truncate(i + 1);
        } else {
            path.push(v);
        }
    }
    path
}

/// The two arcs of `cycle` from `t` to `u`, endpoints included.
fn arcs(cycle: &[Vertex], t: Vertex, u: Vertex) -> [Vec<Vertex>; 2] {
    let n = cycle.len();
    let i = cycle.iter().position(|&x| x == t).expect("portal on cycle");
    debug_assert!(cycle.contains(&u), "portal on cycle");
    let forward: Vec<Vertex> = (0..n).map(|s| cycle[(i + s) % n]).take_while(|&x| x != u).chain([u]).collect();
    let backward: Vec<Vertex> = (0..n).map(|s| cycle[(i + n - s) % n]).take_while(|&x| x != u).chain([u]).collect();
    debug_assert_eq!(forward.len() + backward.len(), n + 2);
    [forward, backward]
}

/// Vertices separated from `anchor` by `cycle`.
fn enclosed_by(g: &Graph, cycle: &[Vertex], anchor: Vertex) -> BTreeSet<Vertex> {
    let on: BTreeSet<Vertex> = cycle.iter().copied().collect();
    let outer: BTreeSet<Vertex> = g.reach(anchor, |v| !on.contains(&v)).into_iter().collect();
    g.vertices().filter(|v| !on.contains(v) && !outer.contains(v)).collect()
}

/// Universal patch of a normalized graph, built from a planarly nested
/// sequence by pushing the second cycle outward past every free piece.
pub fn compute_universal_patch(g: &Graph, genus_budget: usize, cfg: &PatchConfig) -> Result<Patch, PatchError> {
    if find_free_subgraph(g).is_some() {
        return Err(PatchError::NotNormalized);
    }
    let nested = planarly_nested_sequence(g, genus_budget, genus_budget.max(1) + cfg.ring_surplus.max(3), &cfg.planarizing)?;
    let c3_anchor = nested.cycles[2][0];
    let mut psi = nested.cycles[1].clone();
    let mut inside = enclosed_by(g, &psi, c3_anchor);
    loop {
        let w = g.without_vertices(&inside);
        let Some(q) = find_free_subgraph(&w) else {
            break;
        };
        let on_psi: BTreeSet<Vertex> = psi.iter().copied().collect();
        if q.kind == FreeKind::Petal || q.portals.iter().any(|p| !on_psi.contains(p)) {
            return Err(PatchError::NormalizationViolated(format!(
                "free piece with portals {:?} does not hang off the boundary cycle",
                q.portals
            )));
        }
        let (t, u) = (q.portals[0], q.portals[1]);
        let piece = w.induced(&q.vertices);
        let mut best: Option<(Vec<Vertex>, BTreeSet<Vertex>)> = None;
        for l in outer_walks(&piece, t, u) {
            for k in arcs(&psi, t, u) {
                let inner: BTreeSet<Vertex> = l[1..l.len() - 1].iter().copied().collect();
                if k[1..k.len() - 1].iter().any(|v| inner.contains(v)) {
                    continue;
                }
                let candidate: Vec<Vertex> = l.iter().copied().chain(k[1..k.len() - 1].iter().rev().copied()).collect();
                if candidate.len() < 3 {
                    continue;
                }
                let grown = enclosed_by(g, &candidate, c3_anchor);
                if !(inside.is_subset(&grown) && grown.len() > inside.len()) {
                    continue;
                }
                let mut cycles = nested.cycles.clone();
                cycles[1] = candidate.clone();
                let check = NestedCycles { cycles, ..nested.clone() };
                if !check.validate(g) {
                    continue;
                }
                let better = best
                    .as_ref()
                    .map_or(true, |(c, x)| (grown.len(), std::cmp::Reverse(&candidate)) > (x.len(), std::cmp::Reverse(c)));
                if better {
                    best = Some((candidate, grown));
                }
            }
        }
        let Some((next, grown)) = best else {
            return Err(PatchError::NormalizationViolated(format!(
                "no outer walk around the clump at {t:?}, {u:?} keeps the nesting"
            )));
        };
        psi = next;
        inside = grown;
    }
    let patch = Patch::enclosed(g, psi, &inside);
    debug_assert!(patch.is_well_formed(g));
    debug_assert!(find_free_subgraph(&g.without_vertices(&patch.interior())).is_none());
    Ok(patch)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkeletonStop {
    /// The width certificate dropped to the threshold.
    WidthCertified,
    /// The width stayed above the threshold but no flat grid was large enough.
    NoFlatGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skeleton {
    pub patches: PatchSet,
    pub graph: Graph,
    pub width: usize,
    pub stop: SkeletonStop,
}

/// Repeatedly cuts out universal patches until the remaining graph has a
/// narrow tree decomposition.
pub fn compute_skeleton(g: &Graph, genus_budget: usize, cfg: &PatchConfig) -> Result<Skeleton, PatchError> {
    let mut patches = PatchSet::default();
    let mut current = g.clone();
    loop {
        let width = approx_tree_decomposition(&current).width();
        if width <= cfg.treewidth_threshold {
            return Ok(Skeleton { patches, graph: current, width, stop: SkeletonStop::WidthCertified });
        }
        assert!(find_free_subgraph(&current).is_none(), "skeleton graph lost normalization");
        let patch = match compute_universal_patch(&current, genus_budget, cfg) {
            Ok(p) => p,
            Err(PatchError::TooSmall(_)) => {
                return Ok(Skeleton { patches, graph: current, width, stop: SkeletonStop::NoFlatGrid });
            }
            Err(e) => return Err(e),
        };
        let interior = patch.interior();
        assert!(!interior.is_empty(), "patch without interior");
        patches = merge_patches(&patches, patch);
        current = current.without_vertices(&interior);
    }
}

/// Id of a framing vertex: `row` is 2 or 3, `col` the position on the cycle.
pub fn framing_id(cycle_id: u32, row: u8, col: u32) -> Vertex {
    debug_assert!(row == 2 || row == 3);
    Vertex(1 << 62 | u64::from(cycle_id) << 32 | u64::from(row - 2) << 31 | u64::from(col))
}

pub fn is_framing_vertex(v: Vertex) -> bool {
    v.0 >> 62 == 1
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("cycle {0} is not a simple cycle of length at least three")]
    NotACycle(usize),
    #[error("host already uses framing label {0:?}")]
    LabelClash(Vertex),
}

/// Maximal runs of consecutive cycle positions present in `h`, as lists of
/// positions; `None` when the whole cycle is present.
pub(crate) fn segments(h: &Graph, cycle: &[Vertex]) -> Option<Vec<Vec<usize>>> {
    let n = cycle.len();
    let present = |i: usize| h.contains(cycle[i]);
    let linked = |i: usize| present(i) && present((i + 1) % n) && h.has_edge(cycle[i], cycle[(i + 1) % n]);
    if (0..n).all(linked) {
        return None;
    }
    // Start just after a break so no run wraps around.
    let start = (0..n).find(|&i| !linked(i)).expect("some break") + 1;
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for s in 0..n {
        let i = (start + s) % n;
        if present(i) {
            run.push(i);
        }
        if !linked(i) && !run.is_empty() {
            runs.push(std::mem::take(&mut run));
        }
    }
    if !run.is_empty() {
        runs.push(run);
    }
    Some(runs)
}

/// Attaches a 3-row cylinder to every cycle lying fully in `h` and a 3-row
/// grid to every maximal segment of a partially present cycle; the top row
/// is identified with the cycle.
pub fn frame(h: &Graph, cycles: &[Vec<Vertex>]) -> Result<Graph, FrameError> {
    if let Some(v) = h.vertices().find(|&v| is_framing_vertex(v)) {
        return Err(FrameError::LabelClash(v));
    }
    let mut out = h.clone();
    for (id, cycle) in cycles.iter().enumerate() {
        let distinct: BTreeSet<Vertex> = cycle.iter().copied().collect();
        if cycle.len() < 3 || distinct.len() != cycle.len() {
            return Err(FrameError::NotACycle(id));
        }
        let id32 = id as u32;
        let n = cycle.len();
        let mut lay = |cols: &[usize], wrap: bool| {
            for (k, &c) in cols.iter().enumerate() {
                let (r2, r3) = (framing_id(id32, 2, c as u32), framing_id(id32, 3, c as u32));
                out.add_edge(cycle[c], r2).expect("distinct");
                out.add_edge(r2, r3).expect("distinct");
                let next = if k + 1 < cols.len() {
                    Some(cols[k + 1])
                } else if wrap {
                    Some(cols[0])
                } else {
                    None
                };
                if let Some(d) = next {
                    out.add_edge(r2, framing_id(id32, 2, d as u32)).expect("distinct");
                    out.add_edge(r3, framing_id(id32, 3, d as u32)).expect("distinct");
                }
            }
        };
        match segments(h, cycle) {
            None => lay(&(0..n).collect::<Vec<_>>(), true),
            Some(runs) => runs.iter().for_each(|run| lay(run, false)),
        }
    }
    Ok(out)
}

/// Number of vertices `frame` adds.
pub fn framing_size(h: &Graph, cycles: &[Vec<Vertex>]) -> usize {
    cycles
        .iter()
        .map(|c| match segments(h, c) {
            None => 2 * c.len(),
            Some(runs) => runs.iter().map(|r| 2 * r.len()).sum(),
        })
        .sum()
}

/// Cycles of the patches, keyed by their position in the set.
pub fn boundary_cycles(ps: &PatchSet) -> Vec<Vec<Vertex>> {
    ps.patches.iter().map(|p| p.cycle.clone()).collect()
}

/// For each vertex, the patches whose boundary it lies on.
pub fn boundary_membership(ps: &PatchSet) -> BTreeMap<Vertex, Vec<usize>> {
    let mut m: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, p) in ps.patches.iter().enumerate() {
        for &v in &p.cycle {
            m.entry(v).or_default().push(i);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    #[test]
    fn frame_of_a_full_cycle() {
        let h = cycle(5);
        let f = frame(&h, &[h.vertices().collect()]).unwrap();
        assert_eq!(f.vertex_count(), 15);
        assert_eq!(f.edge_count(), 5 + 5 * 2 + 5 * 2);
    }

    #[test]
    fn frame_of_a_segment() {
        let c: Vec<Vertex> = (0..6).map(Vertex).collect();
        let h = path(3);
        let f = frame(&h, &[c]).unwrap();
        assert_eq!(f.vertex_count(), 3 + 6);
        assert_eq!(framing_size(&h, &[(0..6).map(Vertex).collect()]), 6);
    }

    #[test]
    fn empty_frame_is_identity() {
        let h = petersen();
        assert_eq!(frame(&h, &[]).unwrap(), h);
    }

    #[test]
    fn frame_of_subgraph_is_contained() {
        let g = grid(4, 4);
        let c: Vec<Vertex> = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0)]
            .iter()
            .map(|&(i, j)| grid_id(4, i, j))
            .collect();
        let big = frame(&g, &[c.clone()]).unwrap();
        let h = g.without_vertices(&BTreeSet::from([grid_id(4, 0, 2), grid_id(4, 2, 0)]));
        let small = frame(&h, &[c]).unwrap();
        assert!(small.edges().all(|e| {
            let (a, b) = e.ends();
            big.has_edge(a, b)
        }));
    }

    #[test]
    fn merge_into_empty_set() {
        let g = grid(3, 3);
        let c: Vec<Vertex> = [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0)]
            .iter()
            .map(|&(i, j)| grid_id(3, i, j))
            .collect();
        let p = Patch::enclosed(&g, c, &BTreeSet::from([grid_id(3, 1, 1)]));
        assert!(p.is_well_formed(&g));
        let ps = merge_patches(&PatchSet::default(), p.clone());
        assert_eq!(ps.patches, vec![p]);
    }

    #[test]
    fn torus_patch_is_a_disk_of_the_standard_drawing() {
        let g = torus_grid(20, 20);
        let p = compute_universal_patch(&g, 1, &PatchConfig::default()).unwrap();
        assert!(p.is_well_formed(&g));
        assert!(p.is_patch_of(&crate::embedding::torus_grid_embedding(20, 20)));
        assert!(find_free_subgraph(&g.without_vertices(&p.interior())).is_none());
    }

    #[test]
    fn small_width_skeleton_is_the_input() {
        let g = petersen();
        let s = compute_skeleton(&g, 1, &PatchConfig::default()).unwrap();
        assert!(s.patches.is_empty());
        assert_eq!(s.graph, g);
    }
}
