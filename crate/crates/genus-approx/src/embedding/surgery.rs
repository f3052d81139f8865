use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{planar_embedding, Darts, EmbeddingError, RotationEmbedding, Sign};
use crate::graphcore::{Edge, Graph, Vertex};

/// The angle at `at` between the face walk arriving from `from` and leaving to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Corner {
    pub at: Vertex,
    pub from: Vertex,
    pub to: Vertex,
    pub state: Sign,
}

impl Corner {
    /// The same angle seen from the reversed face walk.
    pub fn reversed(self) -> Corner {
        Corner {
            at: self.at,
            from: self.to,
            to: self.from,
            state: self.state.flip(),
        }
    }
}

/// A crossing vertex created by planar edge insertion and the segment it split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub vertex: Vertex,
    pub crossed: Edge,
}

#[derive(Clone, Debug)]
pub struct EdgeInsertion {
    pub embedding: RotationEmbedding,
    pub crossings: Vec<Crossing>,
    /// Route of the new edge: endpoint, crossing vertices, endpoint.
    pub route: Vec<Vertex>,
}

impl RotationEmbedding {
    /// Places `new` into the angle `c`.
    pub fn insert_in_corner(&mut self, c: Corner, new: Vertex) {
        let rot = self.rotation_mut().get_mut(&c.at).expect("corner vertex present");
        if rot.is_empty() {
            rot.push(new);
            return;
        }
        let anchor = if c.state.is_plus() { c.from } else { c.to };
        let i = rot.iter().position(|&x| x == anchor).expect("corner neighbour present");
        rot.insert(i + 1, new);
    }

    /// Draws the new edge `cu.at`–`cv.at` through the two angles.
    pub fn add_edge_in_corners(&mut self, cu: Corner, cv: Corner) {
        self.insert_in_corner(cu, cv.at);
        self.insert_in_corner(cv, cu.at);
        self.signs_mut()
            .insert(Edge::new(cu.at, cv.at), cu.state * cv.state);
    }

    pub fn add_isolated_vertex(&mut self, v: Vertex) {
        self.rotation_mut().entry(v).or_default();
    }

    /// Corners at `v`, grouped by face id, in trace order.
    pub fn corners_by_face(&self) -> Vec<Vec<Corner>> {
        self.trace_faces()
            .iter()
            .map(|f| f.corners().collect())
            .collect()
    }

    fn check_new_edge(&self, u: Vertex, v: Vertex) -> Result<(), EmbeddingError> {
        if u == v {
            return Err(EmbeddingError::SelfLoop(u));
        }
        for x in [u, v] {
            if !self.contains(x) {
                return Err(EmbeddingError::MissingVertex(x));
            }
        }
        if self.has_edge(u, v) {
            return Err(EmbeddingError::EdgeExists(Edge::new(u, v)));
        }
        Ok(())
    }

    /// Adds `uv`, drawing it inside a shared face when one exists and
    /// otherwise across a new handle; orientability is preserved.
    pub fn add_edge_with_handle(&self, u: Vertex, v: Vertex) -> Result<RotationEmbedding, EmbeddingError> {
        self.check_new_edge(u, v)?;
        let mut out = self.clone();
        let du = self.rotation_at(u).is_empty();
        let dv = self.rotation_at(v).is_empty();
        if du || dv {
            let faces = self.corners_by_face();
            let (lone, other) = if du { (u, v) } else { (v, u) };
            out.rotation_mut().insert(lone, vec![other]);
            if let Some(c) = faces.iter().flatten().find(|c| c.at == other) {
                out.insert_in_corner(*c, lone);
            } else {
                out.rotation_mut().insert(other, vec![lone]);
            }
            out.signs_mut().insert(Edge::new(u, v), Sign::Plus);
            return Ok(out);
        }
        let faces = self.corners_by_face();
        for corners in &faces {
            let cu = corners.iter().find(|c| c.at == u);
            let cv = corners.iter().find(|c| c.at == v);
            if let (Some(&cu), Some(&cv)) = (cu, cv) {
                out.add_edge_in_corners(cu, cv);
                return Ok(out);
            }
        }
        let cu = *faces.iter().flatten().find(|c| c.at == u).expect("u has a corner");
        let mut cv = *faces.iter().flatten().find(|c| c.at == v).expect("v has a corner");
        if let Some(frames) = self.orientation_frames() {
            if cu.state * frames[&u] != cv.state * frames[&v] {
                cv = cv.reversed();
            }
        }
        out.add_edge_in_corners(cu, cv);
        Ok(out)
    }

    /// Adds edges from `x` (created if absent) to each of `nbrs`. An isolated
    /// `x` is first placed in the face that sees the most of `nbrs`.
    pub fn attach_vertex(&self, x: Vertex, nbrs: &[Vertex]) -> Result<RotationEmbedding, EmbeddingError> {
        let mut out = self.clone();
        out.add_isolated_vertex(x);
        let mut todo: Vec<Vertex> = nbrs.iter().copied().filter(|&w| !out.has_edge(x, w)).collect();
        todo.sort();
        todo.dedup();
        if todo.is_empty() {
            return Ok(out);
        }
        if out.rotation_at(x).is_empty() {
            let wanted: BTreeSet<Vertex> = todo.iter().copied().collect();
            let best = out
                .trace_faces()
                .into_iter()
                .map(|f| {
                    let seen = f.vertex_set();
                    let hits = wanted.intersection(&seen).count();
                    (hits, f)
                })
                .filter(|(hits, _)| *hits > 0)
                .max_by_key(|(hits, _)| *hits);
            if let Some((_, face)) = best {
                let c = face
                    .corners()
                    .find(|c| wanted.contains(&c.at))
                    .expect("face sees a wanted vertex");
                out.rotation_mut().insert(x, vec![c.at]);
                out.insert_in_corner(c, x);
                out.signs_mut().insert(Edge::new(x, c.at), Sign::Plus);
                todo.retain(|&w| w != c.at);
            }
        }
        for w in todo {
            out = out.add_edge_with_handle(x, w)?;
        }
        Ok(out)
    }

    /// Inserts `uv` into a planar embedding along a shortest dual path,
    /// subdividing every crossed edge with a fresh degree-4 vertex.
    pub fn insert_edge_planar(
        &self,
        u: Vertex,
        v: Vertex,
        next_id: &mut u64,
    ) -> Result<EdgeInsertion, EmbeddingError> {
        self.check_new_edge(u, v)?;
        let genus = self.euler_genus();
        if genus != 0 {
            return Err(EmbeddingError::NotPlanar(genus));
        }
        let base = self.to_all_plus().expect("planar embeddings are orientable");
        let darts = Darts::new(&base);
        let (comp, _) = darts.components();
        let (iu, iv) = (darts.index[&u], darts.index[&v]);
        if comp[iu] != comp[iv] || darts.rot[iu].is_empty() || darts.rot[iv].is_empty() {
            let embedding = base.add_edge_with_handle(u, v)?;
            return Ok(EdgeInsertion {
                embedding,
                crossings: Vec::new(),
                route: vec![u, v],
            });
        }
        let traced = darts.trace();
        let face = |d: usize| traced.face_of[2 * d + 1];
        let nf = traced.faces.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; nf];
        let mut dist = vec![usize::MAX; nf];
        let mut queue = VecDeque::new();
        for slot in 0..darts.rot[iu].len() {
            let f = face(darts.dart(iu, slot));
            if dist[f] == usize::MAX {
                dist[f] = 0;
                queue.push_back(f);
            }
        }
        let targets: BTreeSet<usize> = (0..darts.rot[iv].len())
            .map(|slot| face(darts.dart(iv, slot)))
            .collect();
        let mut hit = None;
        while let Some(f) = queue.pop_front() {
            if targets.contains(&f) {
                hit = Some(f);
                break;
            }
            for &(d, s) in &traced.faces[f] {
                // A mirrored step walks the reverse dart on the same side.
                let d = if s { d } else { darts.reverse(d) };
                let g = face(darts.reverse(d));
                if dist[g] == usize::MAX {
                    dist[g] = dist[f] + 1;
                    parent[g] = Some((f, d));
                    queue.push_back(g);
                }
            }
        }
        let last = hit.expect("connected planar embedding has a dual path");
        let mut crossed = Vec::new();
        let mut cur = last;
        while let Some((prev, d)) = parent[cur] {
            crossed.push(d);
            cur = prev;
        }
        crossed.reverse();
        let first = cur;

        let slot_u = (0..darts.rot[iu].len())
            .find(|&s| face(darts.dart(iu, s)) == first)
            .expect("u lies on the first face");
        let slot_v = (0..darts.rot[iv].len())
            .find(|&s| face(darts.dart(iv, s)) == last)
            .expect("v lies on the last face");
        let before_u = darts.ids[darts.rot[iu][slot_u]];
        let before_v = darts.ids[darts.rot[iv][slot_v]];

        let mut out = base.clone();
        let mut route = vec![u];
        let mut crossings = Vec::new();
        for &d in &crossed {
            let (a, b) = darts.ends(d);
            let (a, b) = (darts.ids[a], darts.ids[b]);
            let c = Vertex(*next_id);
            *next_id += 1;
            crossings.push(Crossing {
                vertex: c,
                crossed: Edge::new(a, b),
            });
            route.push(c);
            replace_in_rotation(&mut out, a, b, c);
            replace_in_rotation(&mut out, b, a, c);
            out.signs_mut().remove(&Edge::new(a, b));
            out.signs_mut().insert(Edge::new(a, c), Sign::Plus);
            out.signs_mut().insert(Edge::new(b, c), Sign::Plus);
            out.rotation_mut().insert(c, vec![a, b]);
        }
        route.push(v);
        for (i, &c) in route.iter().enumerate().skip(1).take(crossed.len()) {
            let (prev, next) = (route[i - 1], route[i + 1]);
            let crossing = crossings[i - 1].crossed;
            let (a, _) = darts.ends(crossed[i - 1]);
            let a = darts.ids[a];
            let b = crossing.other(a);
            out.rotation_mut().insert(c, vec![a, prev, b, next]);
        }
        let after_u = route[1];
        let before_v_nbr = route[route.len() - 2];
        insert_before(&mut out, u, before_u, after_u);
        insert_before(&mut out, v, before_v, before_v_nbr);
        for pair in route.windows(2) {
            out.signs_mut().insert(Edge::new(pair[0], pair[1]), Sign::Plus);
        }
        debug_assert_eq!(out.euler_genus(), 0, "planar insertion must stay planar");
        Ok(EdgeInsertion {
            embedding: out,
            crossings,
            route,
        })
    }
}

fn replace_in_rotation(e: &mut RotationEmbedding, at: Vertex, old: Vertex, new: Vertex) {
    let rot = e.rotation_mut().get_mut(&at).expect("vertex present");
    let i = rot.iter().position(|&x| x == old).expect("neighbour present");
    rot[i] = new;
}

fn insert_before(e: &mut RotationEmbedding, at: Vertex, anchor: Vertex, new: Vertex) {
    let rot = e.rotation_mut().get_mut(&at).expect("vertex present");
    let i = rot.iter().position(|&x| x == anchor).expect("anchor present");
    rot.insert(i, new);
}

/// Planar embedding of `x` in which the cycle `c` bounds a face.
pub fn embed_patch_in_disk(x: &Graph, c: &[Vertex]) -> Result<RotationEmbedding, EmbeddingError> {
    let k = c.len();
    if k < 3 {
        return Err(EmbeddingError::NotDiskPatch("boundary cycle shorter than 3".into()));
    }
    if c.iter().collect::<BTreeSet<_>>().len() != k {
        return Err(EmbeddingError::NotDiskPatch("boundary repeats a vertex".into()));
    }
    for i in 0..k {
        if !x.has_edge(c[i], c[(i + 1) % k]) {
            return Err(EmbeddingError::NotDiskPatch(format!(
                "boundary edge {}-{} missing",
                c[i],
                c[(i + 1) % k]
            )));
        }
    }
    let mut next = x.fresh_id();
    let apex = Vertex(next);
    next += 1;
    let mids: Vec<Vertex> = (0..k).map(|i| Vertex(next + i as u64)).collect();
    let mut aug = x.clone();
    for i in 0..k {
        let (a, b) = (c[i], c[(i + 1) % k]);
        aug.remove_edge(a, b);
        for (p, q) in [(a, mids[i]), (mids[i], b), (apex, mids[i]), (apex, a)] {
            aug.add_edge(p, q).expect("fresh ids");
        }
    }
    let emb = planar_embedding(&aug)
        .ok_or_else(|| EmbeddingError::NotDiskPatch("no planar drawing with the cycle outside".into()))?;
    let mut rotation: BTreeMap<Vertex, Vec<Vertex>> = emb.rotation().clone();
    for i in 0..k {
        let at = c[i];
        let rot = &rotation[&at];
        let d = rot.len();
        let z = rot.iter().position(|&w| w == apex).expect("apex adjacent");
        let ahead = mids[i];
        let behind = mids[(i + k - 1) % k];
        let pos = |w: Vertex| (rot.iter().position(|&y| y == w).expect("mid adjacent") + d - z) % d;
        let (first, second) = if pos(ahead) < pos(behind) {
            (ahead, behind)
        } else {
            (behind, ahead)
        };
        let (pf, ps) = (pos(first), pos(second));
        let walk: Vec<Vertex> = (0..d).map(|j| rot[(z + j) % d]).collect();
        let a_block = &walk[1..pf];
        let b_block = &walk[pf + 1..ps];
        let c_block = &walk[ps + 1..];
        let mut fixed = vec![first];
        fixed.extend_from_slice(a_block);
        fixed.extend_from_slice(b_block);
        fixed.extend_from_slice(c_block);
        fixed.push(second);
        let restored = fixed
            .into_iter()
            .map(|w| {
                if w == ahead {
                    c[(i + 1) % k]
                } else if w == behind {
                    c[(i + k - 1) % k]
                } else {
                    w
                }
            })
            .collect();
        rotation.insert(at, restored);
    }
    rotation.remove(&apex);
    for m in &mids {
        rotation.remove(m);
    }
    let out = RotationEmbedding::from_rotation(rotation)
        .map_err(|e| EmbeddingError::NotDiskPatch(format!("rebuild failed: {e}")))?;
    if out.euler_genus() != 0 || boundary_face_direction(&out, c).is_none() {
        return Err(EmbeddingError::NotDiskPatch("cycle does not bound a face".into()));
    }
    Ok(out)
}

/// For an all-plus embedding, `Some(true)` when a face walks `c` in the
/// given order, `Some(false)` when one walks it reversed.
pub fn boundary_face_direction(e: &RotationEmbedding, c: &[Vertex]) -> Option<bool> {
    let k = c.len();
    let forward = (0..k).all(|i| e.succ(c[i], c[(i + k - 1) % k]) == c[(i + 1) % k]);
    if forward {
        return Some(true);
    }
    let backward = (0..k).all(|i| e.succ(c[i], c[(i + 1) % k]) == c[(i + k - 1) % k]);
    backward.then_some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::generators::*;

    #[test]
    fn chord_in_c4_keeps_plane() {
        let e = planar_embedding(&cycle(4)).unwrap();
        let out = e.add_edge_with_handle(Vertex(0), Vertex(2)).unwrap();
        assert_eq!(out.euler_genus(), 0);
        assert_eq!(out.edge_count(), 5);
    }

    #[test]
    fn joining_components_keeps_genus() {
        let g = disjoint_union(&cycle(3), &cycle(3));
        let e = planar_embedding(&g).unwrap();
        let out = e.add_edge_with_handle(Vertex(0), Vertex(4)).unwrap();
        assert_eq!(out.euler_genus(), 0);
        assert!(out.graph().is_connected());
    }

    #[test]
    fn handle_for_k5() {
        let mut g = complete(5);
        g.remove_edge(Vertex(0), Vertex(1));
        let e = planar_embedding(&g).unwrap();
        let out = e.add_edge_with_handle(Vertex(0), Vertex(1)).unwrap();
        assert!(out.embeds(&complete(5)));
        assert!(out.euler_genus() <= 2);
        assert!(out.euler_genus() >= 1);
        assert!(out.is_orientable());
    }

    #[test]
    fn reinsert_k5_edge_crosses_once() {
        let mut g = complete(5);
        g.remove_edge(Vertex(0), Vertex(1));
        let e = planar_embedding(&g).unwrap();
        let mut next = 100;
        let ins = e.insert_edge_planar(Vertex(0), Vertex(1), &mut next).unwrap();
        assert_eq!(ins.crossings.len(), 1);
        assert_eq!(ins.embedding.euler_genus(), 0);
        assert_eq!(ins.embedding.rotation_at(Vertex(100)).len(), 4);
    }

    #[test]
    fn wheel_hub_inside_rim() {
        let g = wheel(5);
        let rim: Vec<Vertex> = (1..=5).map(Vertex).collect();
        let e = embed_patch_in_disk(&g, &rim).unwrap();
        assert_eq!(e.euler_genus(), 0);
        assert!(boundary_face_direction(&e, &rim).is_some());
    }

    #[test]
    fn bare_cycle_is_its_own_disk() {
        let g = cycle(6);
        let c: Vec<Vertex> = (0..6).map(Vertex).collect();
        let e = embed_patch_in_disk(&g, &c).unwrap();
        assert_eq!(e.face_count(), 2);
    }

    #[test]
    fn k4_with_triangle_boundary() {
        let g = complete(4);
        let c = [Vertex(0), Vertex(1), Vertex(2)];
        let e = embed_patch_in_disk(&g, &c).unwrap();
        assert!(boundary_face_direction(&e, &c).is_some());
    }

    #[test]
    fn pendant_pieces_are_pulled_inside() {
        // Triangle with a pendant vertex at each corner.
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 0), (0, 10), (1, 11), (2, 12)]).unwrap();
        let c = [Vertex(0), Vertex(1), Vertex(2)];
        let e = embed_patch_in_disk(&g, &c).unwrap();
        assert!(boundary_face_direction(&e, &c).is_some());
    }

    #[test]
    fn non_disk_patch_is_rejected() {
        let g = complete(5);
        let c = [Vertex(0), Vertex(1), Vertex(2)];
        assert!(matches!(
            embed_patch_in_disk(&g, &c),
            Err(EmbeddingError::NotDiskPatch(_))
        ));
    }
}
