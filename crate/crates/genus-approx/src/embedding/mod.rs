//! Rotation systems with edge signs: face tracing, Euler genus,
//! orientability, nooses and the surgery used by the drawing pipeline.

mod noose;
mod serial;
mod surgery;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphcore::{Edge, Graph, Vertex};
use crate::planarity;

pub use noose::{
    classify_closed_walk, cut_vertices_of_noose_and_restrict, representativity, shortest_noncontractible_noose, Chain, Noose,
    NooseKind, Passage, RadialGraph, RadialNode,
};
pub use serial::EmbeddingRecord;
pub use surgery::{embed_patch_in_disk, Corner, Crossing, EdgeInsertion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bool(self == rhs)
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("edge sign must be 1 or -1, found {other}")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("vertex {0} appears in a rotation but is not a vertex")]
    UnknownVertex(Vertex),
    #[error("rotation at {at} lists {nbr} {count} times")]
    RepeatedEnd { at: Vertex, nbr: Vertex, count: usize },
    #[error("edge {0} is listed at only one endpoint")]
    Asymmetric(Edge),
    #[error("self-loop at {0}")]
    SelfLoop(Vertex),
    #[error("sign given for non-edge {0}")]
    StraySign(Edge),
    #[error("no sign for edge {0}")]
    MissingSign(Edge),
    #[error("edge {0} already present")]
    EdgeExists(Edge),
    #[error("vertex {0} not in embedding")]
    MissingVertex(Vertex),
    #[error("embedding is not planar (Euler genus {0})")]
    NotPlanar(usize),
    #[error("not a disk patch: {0}")]
    NotDiskPatch(String),
    #[error("noose inconsistent with embedding: {0}")]
    BadNoose(String),
    #[error("derived field mismatch: {0}")]
    DerivedMismatch(String),
    #[error("malformed record: {0}")]
    Malformed(String),
}

/// One step of a face walk: leave `from` towards `to` with local orientation `state`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub from: Vertex,
    pub to: Vertex,
    pub state: Sign,
}

/// Closed face walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub steps: Vec<Step>,
}

impl Face {
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.steps.iter().map(|s| s.from)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.vertices().collect()
    }

    /// Corners of the face: the step arriving at a vertex and the one leaving it.
    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        let k = self.steps.len();
        (0..k).map(move |i| {
            let prev = self.steps[(i + k - 1) % k];
            let next = self.steps[i];
            Corner {
                at: next.from,
                from: prev.from,
                to: next.to,
                state: next.state,
            }
        })
    }
}

/// A cellular embedding given by cyclic rotations and edge signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationEmbedding {
    rotation: BTreeMap<Vertex, Vec<Vertex>>,
    signs: BTreeMap<Edge, Sign>,
}

impl RotationEmbedding {
    /// Validates and builds an embedding. Edges absent from `signs` get `+1`.
    pub fn new(
        rotation: BTreeMap<Vertex, Vec<Vertex>>,
        mut signs: BTreeMap<Edge, Sign>,
    ) -> Result<Self, EmbeddingError> {
        let mut edges = BTreeSet::new();
        for (&v, nbrs) in &rotation {
            let mut seen = BTreeSet::new();
            for &w in nbrs {
                if w == v {
                    return Err(EmbeddingError::SelfLoop(v));
                }
                if !rotation.contains_key(&w) {
                    return Err(EmbeddingError::UnknownVertex(w));
                }
                if !seen.insert(w) {
                    let count = nbrs.iter().filter(|&&x| x == w).count();
                    return Err(EmbeddingError::RepeatedEnd { at: v, nbr: w, count });
                }
                edges.insert(Edge::new(v, w));
            }
        }
        for &e in &edges {
            let (a, b) = e.ends();
            if !rotation[&a].contains(&b) || !rotation[&b].contains(&a) {
                return Err(EmbeddingError::Asymmetric(e));
            }
        }
        if let Some(e) = signs.keys().find(|e| !edges.contains(e)) {
            return Err(EmbeddingError::StraySign(*e));
        }
        for e in edges {
            signs.entry(e).or_insert(Sign::Plus);
        }
        Ok(RotationEmbedding { rotation, signs })
    }

    /// Like [`RotationEmbedding::new`] but every edge must carry an explicit sign.
    pub fn new_strict(
        rotation: BTreeMap<Vertex, Vec<Vertex>>,
        signs: BTreeMap<Edge, Sign>,
    ) -> Result<Self, EmbeddingError> {
        let missing = rotation.iter().find_map(|(&v, nbrs)| {
            nbrs.iter()
                .map(|&w| Edge::new(v, w))
                .find(|e| !signs.contains_key(e))
        });
        let emb = Self::new(rotation, signs)?;
        match missing {
            Some(e) => Err(EmbeddingError::MissingSign(e)),
            None => Ok(emb),
        }
    }

    /// Orientable embedding with all signs `+1`.
    pub fn from_rotation(rotation: BTreeMap<Vertex, Vec<Vertex>>) -> Result<Self, EmbeddingError> {
        Self::new(rotation, BTreeMap::new())
    }

    /// Rotation in sorted-neighbour order; useful as an arbitrary starting point.
    pub fn arbitrary(g: &Graph) -> Self {
        let rotation = g.vertices().map(|v| (v, g.neighbors(v).to_vec())).collect();
        Self::from_rotation(rotation).expect("graph adjacency is a valid rotation")
    }

    pub fn rotation(&self) -> &BTreeMap<Vertex, Vec<Vertex>> {
        &self.rotation
    }

    pub fn signs(&self) -> &BTreeMap<Edge, Sign> {
        &self.signs
    }

    pub fn rotation_at(&self, v: Vertex) -> &[Vertex] {
        self.rotation.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sign(&self, u: Vertex, v: Vertex) -> Sign {
        self.signs[&Edge::new(u, v)]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.rotation.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.signs.contains_key(&Edge::new(u, v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.rotation.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.signs.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.signs.len()
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(v);
        }
        for e in self.edges() {
            let (a, b) = e.ends();
            g.add_edge(a, b).expect("embeddings are loopless");
        }
        g
    }

    /// Neighbour following `u` in the rotation at `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Vertex {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == u).expect("u is a neighbour of v");
        rot[(i + 1) % rot.len()]
    }

    /// Neighbour preceding `u` in the rotation at `v`.
    pub fn pred(&self, v: Vertex, u: Vertex) -> Vertex {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == u).expect("u is a neighbour of v");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    pub(crate) fn rotation_mut(&mut self) -> &mut BTreeMap<Vertex, Vec<Vertex>> {
        &mut self.rotation
    }

    pub(crate) fn signs_mut(&mut self) -> &mut BTreeMap<Edge, Sign> {
        &mut self.signs
    }

    /// Faces in a deterministic order.
    pub fn trace_faces(&self) -> Vec<Face> {
        let darts = Darts::new(self);
        darts
            .trace()
            .faces
            .iter()
            .map(|f| Face {
                steps: f
                    .iter()
                    .map(|&(d, s)| {
                        let (v, w) = darts.ends(d);
                        Step {
                            from: darts.ids[v],
                            to: darts.ids[w],
                            state: Sign::from_bool(s),
                        }
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn face_count(&self) -> usize {
        Darts::new(self).trace().faces.len()
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.graph().components()
    }

    /// Sum over components of `2 - n + m - f`, isolated vertices counting one face.
    pub fn euler_genus(&self) -> usize {
        let darts = Darts::new(self);
        let traced = darts.trace();
        let (comp, count) = darts.components();
        let mut n = vec![0i64; count];
        let mut m = vec![0i64; count];
        let mut f = vec![0i64; count];
        for v in 0..darts.len() {
            n[comp[v]] += 1;
            m[comp[v]] += darts.rot[v].len() as i64;
            if darts.rot[v].is_empty() {
                f[comp[v]] += 1;
            }
        }
        for face in &traced.faces {
            let (d, _) = face[0];
            f[comp[darts.ends(d).0]] += 1;
        }
        let total: i64 = (0..count).map(|c| 2 - n[c] + m[c] / 2 - f[c]).sum();
        debug_assert!(total >= 0, "Euler genus cannot be negative");
        total.max(0) as usize
    }

    /// Per-vertex local frames witnessing orientability, or `None`.
    pub fn orientation_frames(&self) -> Option<BTreeMap<Vertex, Sign>> {
        let mut frame: BTreeMap<Vertex, Sign> = BTreeMap::new();
        for root in self.vertices() {
            if frame.contains_key(&root) {
                continue;
            }
            frame.insert(root, Sign::Plus);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let fv = frame[&v];
                for &w in self.rotation_at(v) {
                    let want = fv * self.sign(v, w);
                    match frame.get(&w) {
                        None => {
                            frame.insert(w, want);
                            queue.push_back(w);
                        }
                        Some(&have) if have != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(frame)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_frames().is_some()
    }

    /// Equivalent embedding obtained by reversing the rotation at `v` and
    /// flipping the signs of its edges.
    pub fn switch_at(&mut self, v: Vertex) {
        if let Some(rot) = self.rotation.get_mut(&v) {
            rot.reverse();
            for &w in rot.iter() {
                let s = self.signs.get_mut(&Edge::new(v, w)).expect("edge signed");
                *s = s.flip();
            }
        }
    }

    /// For an orientable embedding, the equivalent one with every sign `+1`.
    pub fn to_all_plus(&self) -> Option<RotationEmbedding> {
        let frames = self.orientation_frames()?;
        let mut out = self.clone();
        for (v, s) in frames {
            if !s.is_plus() {
                out.switch_at(v);
            }
        }
        debug_assert!(out.signs.values().all(|s| s.is_plus()));
        Some(out)
    }

    /// Induced embedding on the surviving vertices, signs inherited.
    pub fn restrict(&self, keep: &BTreeSet<Vertex>) -> RotationEmbedding {
        let rotation = self
            .rotation
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, rot)| (v, rot.iter().copied().filter(|w| keep.contains(w)).collect()))
            .collect();
        let signs = self
            .signs
            .iter()
            .filter(|(e, _)| {
                let (a, b) = e.ends();
                keep.contains(&a) && keep.contains(&b)
            })
            .map(|(&e, &s)| (e, s))
            .collect();
        RotationEmbedding { rotation, signs }
    }

    pub fn without_vertices(&self, drop: &BTreeSet<Vertex>) -> RotationEmbedding {
        let keep = self.vertices().filter(|v| !drop.contains(v)).collect();
        self.restrict(&keep)
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if self.signs.remove(&Edge::new(u, v)).is_none() {
            return false;
        }
        self.rotation.get_mut(&u).expect("endpoint").retain(|&x| x != v);
        self.rotation.get_mut(&v).expect("endpoint").retain(|&x| x != u);
        true
    }

    /// Disjoint union of embeddings on disjoint vertex sets.
    pub fn disjoint_union(&self, other: &RotationEmbedding) -> RotationEmbedding {
        let mut out = self.clone();
        for (&v, rot) in &other.rotation {
            debug_assert!(!out.rotation.contains_key(&v), "vertex sets must be disjoint");
            out.rotation.insert(v, rot.clone());
        }
        out.signs.extend(other.signs.iter().map(|(&e, &s)| (e, s)));
        out
    }

    /// True when this embeds exactly the graph `g`.
    pub fn embeds(&self, g: &Graph) -> bool {
        self.vertex_count() == g.vertex_count()
            && self.edge_count() == g.edge_count()
            && g.vertices().all(|v| self.contains(v))
            && g.edges().all(|e| self.signs.contains_key(&e))
    }
}

/// The standard toroidal drawing of `torus_grid(rows, cols)`.
pub fn torus_grid_embedding(rows: u64, cols: u64) -> RotationEmbedding {
    let id = |r: u64, c: u64| Vertex((r % rows) * cols + (c % cols));
    let rotation = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .map(|(r, c)| {
            (
                id(r, c),
                vec![id(r + rows - 1, c), id(r, c + 1), id(r + 1, c), id(r, c + cols - 1)],
            )
        })
        .collect();
    RotationEmbedding::from_rotation(rotation).expect("symmetric rotation")
}

/// Planar embedding of `g` via the left-right test, re-validated by face
/// tracing; `None` when `g` is not planar.
pub fn planar_embedding(g: &Graph) -> Option<RotationEmbedding> {
    let rotation = planarity::planar_rotation(g)?;
    let emb = RotationEmbedding::from_rotation(rotation).expect("planarity output is a rotation");
    assert_eq!(
        emb.euler_genus(),
        0,
        "planarity test produced a non-planar rotation"
    );
    Some(emb)
}

/// Dense index view of an embedding used by tracing and the noose search.
pub(crate) struct Darts {
    pub ids: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    pub rot: Vec<Vec<usize>>,
    pub plus: Vec<Vec<bool>>,
    /// Position of `v` in the rotation of `rot[v][i]`.
    pub back: Vec<Vec<usize>>,
    pub offset: Vec<usize>,
    tail: Vec<usize>,
    slot: Vec<usize>,
}

pub(crate) struct Traced {
    /// Faces as lists of (dart, state) steps.
    pub faces: Vec<Vec<(usize, bool)>>,
    /// Face id of each (dart, state), indexed by `2 * dart + (state as usize)`.
    pub face_of: Vec<usize>,
}

impl Darts {
    pub fn new(e: &RotationEmbedding) -> Self {
        let ids: Vec<Vertex> = e.rotation.keys().copied().collect();
        let index: HashMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rot: Vec<Vec<usize>> = ids
            .iter()
            .map(|v| e.rotation[v].iter().map(|w| index[w]).collect())
            .collect();
        let plus = ids
            .iter()
            .map(|&v| e.rotation[&v].iter().map(|&w| e.sign(v, w).is_plus()).collect())
            .collect();
        let pos: HashMap<(usize, usize), usize> = rot
            .iter()
            .enumerate()
            .flat_map(|(v, r)| r.iter().enumerate().map(move |(i, &w)| ((v, w), i)))
            .collect();
        let back = rot
            .iter()
            .enumerate()
            .map(|(v, r)| r.iter().map(|&w| pos[&(w, v)]).collect())
            .collect();
        let mut offset = Vec::with_capacity(ids.len() + 1);
        let mut acc = 0;
        for r in &rot {
            offset.push(acc);
            acc += r.len();
        }
        offset.push(acc);
        let mut tail = Vec::with_capacity(acc);
        let mut slot = Vec::with_capacity(acc);
        for (v, r) in rot.iter().enumerate() {
            for i in 0..r.len() {
                tail.push(v);
                slot.push(i);
            }
        }
        Darts {
            ids,
            index,
            rot,
            plus,
            back,
            offset,
            tail,
            slot,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn dart_count(&self) -> usize {
        *self.offset.last().unwrap_or(&0)
    }

    pub fn dart(&self, v: usize, slot: usize) -> usize {
        self.offset[v] + slot
    }

    /// Tail vertex and slot of a dart.
    pub fn slot_of(&self, d: usize) -> (usize, usize) {
        (self.tail[d], self.slot[d])
    }

    pub fn ends(&self, d: usize) -> (usize, usize) {
        let (v, i) = self.slot_of(d);
        (v, self.rot[v][i])
    }

    pub fn reverse(&self, d: usize) -> usize {
        let (v, i) = self.slot_of(d);
        self.dart(self.rot[v][i], self.back[v][i])
    }

    pub fn is_plus(&self, d: usize) -> bool {
        let (v, i) = self.slot_of(d);
        self.plus[v][i]
    }

    /// Next step of a face walk after `(d, state)`.
    pub fn next(&self, d: usize, state: bool) -> (usize, bool) {
        let (v, i) = self.slot_of(d);
        let w = self.rot[v][i];
        let arrive = state == self.plus[v][i];
        let deg = self.rot[w].len();
        let j = self.back[v][i];
        let k = if arrive { (j + 1) % deg } else { (j + deg - 1) % deg };
        (self.dart(w, k), arrive)
    }

    /// The same face edge-side walked backwards.
    pub fn reverse_step(&self, d: usize, state: bool) -> (usize, bool) {
        let arrive = state == self.is_plus(d);
        (self.reverse(d), !arrive)
    }

    pub fn trace(&self) -> Traced {
        let total = self.dart_count();
        let mut face_of = vec![usize::MAX; 2 * total];
        let mut faces = Vec::new();
        for d in 0..total {
            for state in [true, false] {
                if face_of[2 * d + state as usize] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let (mut cd, mut cs) = (d, state);
                loop {
                    walk.push((cd, cs));
                    face_of[2 * cd + cs as usize] = id;
                    let (rd, rs) = self.reverse_step(cd, cs);
                    face_of[2 * rd + rs as usize] = id;
                    let (nd, ns) = self.next(cd, cs);
                    if nd == d && ns == state {
                        break;
                    }
                    cd = nd;
                    cs = ns;
                }
                faces.push(walk);
            }
        }
        Traced { faces, face_of }
    }

    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.rot[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    fn torus_rotation(rows: u64, cols: u64) -> RotationEmbedding {
        let id = |r: u64, c: u64| Vertex((r % rows) * cols + (c % cols));
        let rotation = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| {
                (
                    id(r, c),
                    vec![
                        id(r + rows - 1, c),
                        id(r, c + 1),
                        id(r + 1, c),
                        id(r, c + cols - 1),
                    ],
                )
            })
            .collect();
        RotationEmbedding::from_rotation(rotation).unwrap()
    }

    #[test]
    fn cube_has_six_faces() {
        let e = planar_embedding(&cube()).unwrap();
        assert_eq!(e.face_count(), 6);
        assert_eq!(e.euler_genus(), 0);
    }

    #[test]
    fn toroidal_3x3_has_nine_quadrilaterals() {
        let e = torus_rotation(3, 3);
        let faces = e.trace_faces();
        assert_eq!(faces.len(), 9);
        assert!(faces.iter().all(|f| f.len() == 4));
        assert_eq!(e.euler_genus(), 2);
        assert!(e.is_orientable());
    }

    #[test]
    fn single_edge_one_face() {
        let e = planar_embedding(&path(2)).unwrap();
        let faces = e.trace_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 2);
    }

    #[test]
    fn k4_planar_genus_zero() {
        assert_eq!(planar_embedding(&complete(4)).unwrap().euler_genus(), 0);
    }

    #[test]
    fn twisted_c4_is_nonorientable() {
        let mut e = planar_embedding(&cycle(4)).unwrap();
        e.signs_mut().insert(Edge::new(Vertex(0), Vertex(1)), Sign::Minus);
        assert!(!e.is_orientable());
        // A one-sided cycle alone on the projective plane: one face.
        assert_eq!(e.face_count(), 1);
        assert_eq!(e.euler_genus(), 1);
    }

    #[test]
    fn switching_preserves_faces() {
        let mut e = torus_rotation(3, 4);
        let before = e.euler_genus();
        e.switch_at(Vertex(5));
        e.switch_at(Vertex(0));
        assert_eq!(e.euler_genus(), before);
        let back = e.to_all_plus().unwrap();
        assert_eq!(back.euler_genus(), before);
    }

    #[test]
    fn isolated_vertices_and_components() {
        let mut g = disjoint_union(&cycle(3), &cycle(3));
        g.add_vertex(Vertex(100));
        let e = planar_embedding(&g).unwrap();
        assert_eq!(e.euler_genus(), 0);
        assert_eq!(e.face_count(), 4);
    }

    #[test]
    fn validation_errors() {
        let mut rot = BTreeMap::new();
        rot.insert(Vertex(0), vec![Vertex(1)]);
        rot.insert(Vertex(1), vec![]);
        assert!(matches!(
            RotationEmbedding::from_rotation(rot.clone()),
            Err(EmbeddingError::Asymmetric(_))
        ));
        rot.insert(Vertex(1), vec![Vertex(0), Vertex(0)]);
        assert!(matches!(
            RotationEmbedding::from_rotation(rot),
            Err(EmbeddingError::RepeatedEnd { .. })
        ));
    }
}
