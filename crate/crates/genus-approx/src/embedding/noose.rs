use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::{Corner, Darts, EmbeddingError, RotationEmbedding, Sign, Traced};
use crate::graphcore::{Edge, Graph, Vertex};

/// Which noncontractible nooses a search accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NooseKind {
    Any,
    OrientationReversing,
    Nonseparating,
}

/// The part of a noose inside one face: it enters at `enter.at` and leaves at `exit.at`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Passage {
    pub face: usize,
    pub enter: Corner,
    pub exit: Corner,
}

/// Closed curve meeting the drawing only in vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Noose {
    pub passages: Vec<Passage>,
    pub length: usize,
    pub contractible: bool,
    pub orientation_reversing: bool,
    pub separating: bool,
}

impl Noose {
    pub fn vertices(&self) -> Vec<Vertex> {
        self.passages.iter().map(|p| p.enter.at).collect()
    }

    pub fn faces(&self) -> Vec<usize> {
        self.passages.iter().map(|p| p.face).collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.vertices().into_iter().collect()
    }
}

/// Open face/vertex walk between two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub vertices: Vec<Vertex>,
    pub faces: Vec<usize>,
}

impl Chain {
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RadialNode {
    Vertex(Vertex),
    Face(usize),
}

/// Vertex–face incidence graph; one edge per corner.
#[derive(Clone, Debug)]
pub struct RadialGraph {
    pub nodes: Vec<RadialNode>,
    /// (vertex node, face node, corner)
    pub edges: Vec<(usize, usize, Corner)>,
}

impl RadialGraph {
    pub fn new(e: &RotationEmbedding) -> Self {
        let faces = e.trace_faces();
        let vertex_ids: Vec<Vertex> = e.vertices().filter(|&v| !e.rotation_at(v).is_empty()).collect();
        let index: BTreeMap<Vertex, usize> = vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut nodes: Vec<RadialNode> = vertex_ids.iter().map(|&v| RadialNode::Vertex(v)).collect();
        let base = nodes.len();
        nodes.extend((0..faces.len()).map(RadialNode::Face));
        let edges = faces
            .iter()
            .enumerate()
            .flat_map(|(f, face)| face.corners().map(move |c| (f, c)))
            .map(|(f, c)| (index[&c.at], base + f, c))
            .collect();
        RadialGraph { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Passages of a cycle given as radial edge ids in walk order, starting
    /// with an edge leaving a vertex node into a face node.
    pub fn passages_of(&self, cycle: &[usize]) -> Vec<Passage> {
        cycle
            .chunks(2)
            .map(|pair| {
                let (_, f, enter) = self.edges[pair[0]];
                let (_, _, exit) = self.edges[pair[1]];
                let face = match self.nodes[f] {
                    RadialNode::Face(id) => id,
                    RadialNode::Vertex(_) => unreachable!("face node"),
                };
                Passage { face, enter, exit }
            })
            .collect()
    }
}

/// Classifies a closed walk by cutting the surface along it.
pub fn classify_closed_walk(e: &RotationEmbedding, passages: &[Passage]) -> Result<Noose, EmbeddingError> {
    validate_passages(e, passages)?;
    let flip = passages
        .iter()
        .fold(Sign::Plus, |acc, p| acc * p.enter.state * p.exit.state);
    let length = passages.len();
    if flip == Sign::Minus {
        return Ok(Noose {
            passages: passages.to_vec(),
            length,
            contractible: false,
            orientation_reversing: true,
            separating: false,
        });
    }
    let (separating, contractible) = cut_two_sided(e, passages);
    Ok(Noose {
        passages: passages.to_vec(),
        length,
        contractible,
        orientation_reversing: false,
        separating,
    })
}

fn validate_passages(e: &RotationEmbedding, passages: &[Passage]) -> Result<(), EmbeddingError> {
    if passages.is_empty() {
        return Err(EmbeddingError::BadNoose("empty noose".into()));
    }
    let faces = e.trace_faces();
    let k = passages.len();
    let mut seen = BTreeSet::new();
    let mut crossed = BTreeSet::new();
    for (i, p) in passages.iter().enumerate() {
        // Two arcs in one face may cross, so a noose meets each face once.
        if !crossed.insert(p.face) {
            return Err(EmbeddingError::BadNoose(format!("face {} repeats", p.face)));
        }
        let face = faces
            .get(p.face)
            .ok_or_else(|| EmbeddingError::BadNoose(format!("face {} does not exist", p.face)))?;
        for c in [p.enter, p.exit] {
            if !face.corners().any(|x| x == c || x == c.reversed()) {
                return Err(EmbeddingError::BadNoose(format!(
                    "corner at {} is not on face {}",
                    c.at, p.face
                )));
            }
        }
        if p.exit.at != passages[(i + 1) % k].enter.at {
            return Err(EmbeddingError::BadNoose(format!("walk breaks after vertex {}", p.exit.at)));
        }
        if !seen.insert(p.enter.at) {
            return Err(EmbeddingError::BadNoose(format!("vertex {} repeats", p.enter.at)));
        }
    }
    if k == 1 && passages[0].enter == passages[0].exit {
        return Err(EmbeddingError::BadNoose("single passage uses one corner twice".into()));
    }
    Ok(())
}

/// Draws the walk as a cycle through fresh vertices, splits every vertex of
/// it into two sides and re-traces. Returns (separating, contractible).
fn cut_two_sided(e: &RotationEmbedding, passages: &[Passage]) -> (bool, bool) {
    let k = passages.len();
    let mut next = e.vertices().max().map_or(0, |v| v.0 + 1);
    let mut fresh = || {
        next += 1;
        Vertex(next - 1)
    };
    let mut drawn = e.clone();
    let mut cycle = Vec::with_capacity(3 * k);
    for p in passages {
        let (z, zz) = (fresh(), fresh());
        drawn.insert_in_corner(p.enter, z);
        drawn.insert_in_corner(p.exit, zz);
        drawn.rotation_mut().insert(z, vec![p.enter.at, zz]);
        drawn.rotation_mut().insert(zz, vec![z, p.exit.at]);
        drawn.signs_mut().insert(Edge::new(p.enter.at, z), p.enter.state);
        drawn.signs_mut().insert(Edge::new(z, zz), Sign::Plus);
        drawn.signs_mut().insert(Edge::new(zz, p.exit.at), p.exit.state);
        cycle.extend([p.enter.at, z, zz]);
    }
    let m = cycle.len();
    let on_cycle: BTreeMap<Vertex, usize> = cycle.iter().enumerate().map(|(j, &x)| (x, j)).collect();
    let twin: Vec<Vertex> = (0..m).map(|_| fresh()).collect();

    let mut frame = vec![Sign::Plus; m];
    for j in 1..m {
        frame[j] = frame[j - 1] * drawn.sign(cycle[j - 1], cycle[j]);
    }
    debug_assert!((frame[m - 1] * drawn.sign(cycle[m - 1], cycle[0])).is_plus());

    // Side of each dart leaving a cycle vertex: true for the kept copy.
    let mut kept_side: BTreeMap<(Vertex, Vertex), bool> = BTreeMap::new();
    let mut blocks: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::with_capacity(m);
    for j in 0..m {
        let x = cycle[j];
        let (p, q) = (cycle[(j + m - 1) % m], cycle[(j + 1) % m]);
        let rot = drawn.rotation_at(x);
        let d = rot.len();
        let ip = rot.iter().position(|&w| w == p).expect("cycle neighbour");
        let iq = rot.iter().position(|&w| w == q).expect("cycle neighbour");
        let span = |from: usize, to: usize| -> Vec<Vertex> {
            let mut out = Vec::new();
            let mut i = (from + 1) % d;
            while i != to {
                out.push(rot[i]);
                i = (i + 1) % d;
            }
            out
        };
        let block1 = span(ip, iq);
        let block2 = span(iq, ip);
        let a_is_first = frame[j].is_plus();
        for &w in &block1 {
            kept_side.insert((x, w), a_is_first);
        }
        for &w in &block2 {
            kept_side.insert((x, w), !a_is_first);
        }
        blocks.push((block1, block2));
    }
    let copy = |x: Vertex, kept: bool| -> Vertex {
        if kept {
            x
        } else {
            twin[on_cycle[&x]]
        }
    };
    let image = |at: Vertex, w: Vertex| -> Vertex {
        // The copy of neighbour `w` that the dart at `at` attaches to.
        match on_cycle.get(&w) {
            Some(_) => copy(w, kept_side[&(w, at)]),
            None => w,
        }
    };

    let mut rotation: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    let mut signs: BTreeMap<Edge, Sign> = BTreeMap::new();
    for (&v, rot) in drawn.rotation() {
        if on_cycle.contains_key(&v) {
            continue;
        }
        let mapped: Vec<Vertex> = rot
            .iter()
            .map(|&w| if on_cycle.contains_key(&w) { copy(w, kept_side[&(w, v)]) } else { w })
            .collect();
        for &w in &mapped {
            let orig = twin
                .iter()
                .position(|&t| t == w)
                .map_or(w, |j| cycle[j]);
            signs.insert(Edge::new(v, w), drawn.sign(v, orig));
        }
        rotation.insert(v, mapped);
    }
    for j in 0..m {
        let x = cycle[j];
        let (p, q) = (cycle[(j + m - 1) % m], cycle[(j + 1) % m]);
        let (block1, block2) = &blocks[j];
        let b1: Vec<Vertex> = block1.iter().map(|&w| image(x, w)).collect();
        let b2: Vec<Vertex> = block2.iter().map(|&w| image(x, w)).collect();
        let (kept_rot, twin_rot) = if frame[j].is_plus() {
            (
                [vec![p], b1, vec![q]].concat(),
                [vec![copy(q, false)], b2, vec![copy(p, false)]].concat(),
            )
        } else {
            (
                [vec![q], b2, vec![p]].concat(),
                [vec![copy(p, false)], b1, vec![copy(q, false)]].concat(),
            )
        };
        for (side, rot) in [(true, &kept_rot), (false, &twin_rot)] {
            let me = copy(x, side);
            for &w in rot.iter() {
                let orig = if let Some(t) = twin.iter().position(|&t| t == w) { cycle[t] } else { w };
                signs.insert(Edge::new(me, w), drawn.sign(x, orig));
            }
        }
        rotation.insert(x, kept_rot);
        rotation.insert(copy(x, false), twin_rot);
    }
    let cut = RotationEmbedding::new(rotation, signs).expect("cut surgery yields a valid rotation system");
    let g = cut.graph();
    let side_a = g.reach(cycle[0], |_| true);
    let separating = !side_a.contains(&twin[0]);
    if !separating {
        return (false, false);
    }
    let side_b = g.reach(twin[0], |_| true);
    let genus_a = cut.restrict(&side_a.into_iter().collect()).euler_genus();
    let genus_b = cut.restrict(&side_b.into_iter().collect()).euler_genus();
    (true, genus_a == 0 || genus_b == 0)
}

/// Data for the cohomology-filtered search on one embedding.
struct Search<'a> {
    darts: &'a Darts,
    traced: &'a Traced,
    /// Radial edges: (vertex node, face node, face, step index).
    redges: Vec<(usize, usize, usize, usize)>,
    adj: Vec<Vec<usize>>,
    words: usize,
    sig: Vec<u64>,
    twist: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(darts: &'a Darts, traced: &'a Traced) -> Self {
        let n = darts.len();
        let nf = traced.faces.len();
        let mut redges = Vec::new();
        let mut adj = vec![Vec::new(); n + nf];
        for (f, face) in traced.faces.iter().enumerate() {
            for (t, &(d, _)) in face.iter().enumerate() {
                let v = darts.ends(d).0;
                let id = redges.len();
                redges.push((v, n + f, f, t));
                adj[v].push(id);
                adj[n + f].push(id);
            }
        }
        let twist = redges
            .iter()
            .map(|&(_, _, f, t)| !traced.faces[f][t].1)
            .collect();
        let mut s = Search {
            darts,
            traced,
            redges,
            adj,
            words: 0,
            sig: Vec::new(),
            twist,
        };
        s.build_cocycles();
        s
    }

    fn edge_key(&self, d: usize) -> usize {
        d.min(self.darts.reverse(d))
    }

    /// Tree-cotree decomposition; each leftover radial edge yields one cocycle.
    fn build_cocycles(&mut self) {
        let nodes = self.adj.len();
        let re = self.redges.len();
        let mut in_tree = vec![false; re];
        let mut seen = vec![false; nodes];
        for s in 0..nodes {
            if seen[s] || self.adj[s].is_empty() {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &id in &self.adj[x] {
                    let (a, b, _, _) = self.redges[id];
                    let y = if a == x { b } else { a };
                    if !seen[y] {
                        seen[y] = true;
                        in_tree[id] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        // Dual arcs: a corner joins the graph edges before and after it.
        let arcs: Vec<(usize, usize)> = self
            .redges
            .iter()
            .map(|&(_, _, f, t)| {
                let face = &self.traced.faces[f];
                let prev = face[(t + face.len() - 1) % face.len()].0;
                (self.edge_key(prev), self.edge_key(face[t].0))
            })
            .collect();
        let total = self.darts.dart_count();
        let mut dsu: Vec<usize> = (0..total).collect();
        fn find(d: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while d[r] != r {
                r = d[r];
            }
            let mut c = x;
            while d[c] != r {
                let n = d[c];
                d[c] = r;
                c = n;
            }
            r
        }
        let mut cotree_adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        let mut leftover = Vec::new();
        for id in 0..re {
            if in_tree[id] {
                continue;
            }
            let (p, q) = arcs[id];
            let (rp, rq) = (find(&mut dsu, p), find(&mut dsu, q));
            if rp != rq {
                dsu[rp] = rq;
                cotree_adj.entry(p).or_default().push((q, id));
                cotree_adj.entry(q).or_default().push((p, id));
            } else {
                leftover.push(id);
            }
        }
        // Root every cotree component for path queries.
        let mut parent: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
        let keys: Vec<usize> = cotree_adj.keys().copied().collect();
        for root in keys {
            if depth.contains_key(&root) {
                continue;
            }
            depth.insert(root, 0);
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &(y, id) in &cotree_adj[&x] {
                    if !depth.contains_key(&y) {
                        depth.insert(y, depth[&x] + 1);
                        parent.insert(y, (x, id));
                        stack.push(y);
                    }
                }
            }
        }
        self.words = leftover.len().div_ceil(64).max(1);
        self.sig = vec![0; re * self.words];
        for (bit, &l) in leftover.iter().enumerate() {
            let mut mark = |id: usize| self.sig[id * self.words + bit / 64] ^= 1 << (bit % 64);
            mark(l);
            let (mut p, mut q) = arcs[l];
            let dep = |x: usize| depth.get(&x).copied().unwrap_or(0);
            while p != q {
                if dep(p) >= dep(q) {
                    let (up, id) = parent[&p];
                    mark(id);
                    p = up;
                } else {
                    let (up, id) = parent[&q];
                    mark(id);
                    q = up;
                }
            }
        }
    }

    fn corner(&self, id: usize) -> Corner {
        let (_, _, f, t) = self.redges[id];
        let face = &self.traced.faces[f];
        let (d, s) = face[t];
        let (pd, _) = face[(t + face.len() - 1) % face.len()];
        let (v, w) = self.darts.ends(d);
        let (u, _) = self.darts.ends(pd);
        Corner {
            at: self.darts.ids[v],
            from: self.darts.ids[u],
            to: self.darts.ids[w],
            state: Sign::from_bool(s),
        }
    }

    fn passages(&self, cycle: &[usize]) -> Vec<Passage> {
        cycle
            .chunks(2)
            .map(|pair| Passage {
                face: self.redges[pair[0]].2,
                enter: self.corner(pair[0]),
                exit: self.corner(pair[1]),
            })
            .collect()
    }
}

struct Bfs {
    dist: Vec<usize>,
    parent: Vec<usize>,
    class: Vec<u64>,
    twist: Vec<bool>,
}

impl Search<'_> {
    fn bfs(&self, root: usize, limit: usize, out: &mut Bfs) -> Vec<usize> {
        let w = self.words;
        let mut order = vec![root];
        out.dist[root] = 0;
        out.parent[root] = usize::MAX;
        out.class[root * w..root * w + w].fill(0);
        out.twist[root] = false;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            if out.dist[x] >= limit {
                continue;
            }
            for &id in &self.adj[x] {
                let (a, b, _, _) = self.redges[id];
                let y = if a == x { b } else { a };
                if out.dist[y] != usize::MAX {
                    continue;
                }
                out.dist[y] = out.dist[x] + 1;
                out.parent[y] = id;
                for i in 0..w {
                    out.class[y * w + i] = out.class[x * w + i] ^ self.sig[id * w + i];
                }
                out.twist[y] = out.twist[x] ^ self.twist[id];
                order.push(y);
            }
        }
        order
    }

    fn path_to_root(&self, bfs: &Bfs, mut x: usize) -> Vec<(usize, usize)> {
        let mut path = Vec::new();
        while bfs.parent[x] != usize::MAX {
            let id = bfs.parent[x];
            path.push((x, id));
            let (a, b, _, _) = self.redges[id];
            x = if a == x { b } else { a };
        }
        path
    }

    /// Simple radial cycle formed by the tree paths to `a`, `b` and edge `id`,
    /// as radial edge ids starting at a vertex node.
    fn reduced_cycle(&self, bfs: &Bfs, a: usize, b: usize, id: usize) -> Vec<usize> {
        let pa = self.path_to_root(bfs, a);
        let pb = self.path_to_root(bfs, b);
        let mut ia = pa.len();
        let mut ib = pb.len();
        while ia > 0 && ib > 0 && pa[ia - 1].1 == pb[ib - 1].1 {
            ia -= 1;
            ib -= 1;
        }
        // Walk: lca -> ... -> a, edge, b -> ... -> lca.
        let mut edges: Vec<usize> = pa[..ia].iter().rev().map(|&(_, e)| e).collect();
        edges.push(id);
        edges.extend(pb[..ib].iter().map(|&(_, e)| e));
        // The first shared edge hangs below the meeting node.
        let lca = if ia < pa.len() {
            pa[ia].0
        } else {
            self.path_root(bfs, a)
        };
        let starts_at_vertex = lca < self.darts.len();
        if !starts_at_vertex {
            edges.rotate_left(1);
        }
        edges
    }

    fn path_root(&self, bfs: &Bfs, x: usize) -> usize {
        match self.path_to_root(bfs, x).last() {
            Some(&(node, id)) => {
                let (a, b, _, _) = self.redges[id];
                if a == node { b } else { a }
            }
            None => x,
        }
    }
}

/// Shortest noncontractible noose of the requested kind, or `None` when
/// every noose of that kind is contractible or none exists.
pub fn shortest_noncontractible_noose(e: &RotationEmbedding, kind: NooseKind) -> Option<Noose> {
    if e.euler_genus() == 0 {
        return None;
    }
    let darts = Darts::new(e);
    let traced = darts.trace();
    let search = Search::new(&darts, &traced);
    let n = darts.len();
    let nodes = search.adj.len();
    let (comp, count) = darts.components();
    let mut needs_cut = vec![false; count];
    if kind == NooseKind::Any {
        for (c, slot) in needs_cut.iter_mut().enumerate() {
            let keep: BTreeSet<Vertex> = (0..n).filter(|&v| comp[v] == c).map(|v| darts.ids[v]).collect();
            let part = e.restrict(&keep);
            let eg = part.euler_genus();
            // Separating essential curves need Euler genus at least 2 on each side
            // of a torus-free split, i.e. total at least 2 and not the torus.
            *slot = eg >= 3 || (eg == 2 && !part.is_orientable());
        }
    }
    let mut bfs = Bfs {
        dist: vec![usize::MAX; nodes],
        parent: vec![usize::MAX; nodes],
        class: vec![0; nodes * search.words],
        twist: vec![false; nodes],
    };
    // Classifying separating candidates is costly; a shortest nonseparating
    // noose bounds the search so only strictly shorter ones are classified.
    let fallback = if needs_cut.iter().any(|&c| c) {
        shortest_noncontractible_noose(e, NooseKind::Nonseparating)
    } else {
        None
    };
    let cap = fallback.as_ref().map_or(usize::MAX, |f| f.length);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut tested: HashSet<Vec<usize>> = HashSet::new();
    for root in 0..n {
        if darts.rot[root].is_empty() {
            continue;
        }
        let limit = best.as_ref().map_or(cap, |(len, _)| *len).saturating_mul(2);
        let order = search.bfs(root, limit, &mut bfs);
        let w = search.words;
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for &x in &order {
            for &id in &search.adj[x] {
                let (a, b, _, _) = search.redges[id];
                if x != a || bfs.dist[b] == usize::MAX {
                    continue;
                }
                if bfs.parent[a] == id || bfs.parent[b] == id {
                    continue;
                }
                let walk = bfs.dist[a] + bfs.dist[b] + 1;
                let len = walk / 2;
                if len >= best.as_ref().map_or(cap, |(l, _)| *l) {
                    continue;
                }
                let nonzero = (0..w).any(|i| {
                    bfs.class[a * w + i] ^ bfs.class[b * w + i] ^ search.sig[id * w + i] != 0
                });
                let twisted = bfs.twist[a] ^ bfs.twist[b] ^ search.twist[id];
                let accept = match kind {
                    NooseKind::OrientationReversing => twisted,
                    NooseKind::Nonseparating => nonzero,
                    NooseKind::Any => nonzero,
                };
                if accept {
                    candidates.push((len, id));
                } else if kind == NooseKind::Any && !nonzero && needs_cut[comp[root]] {
                    candidates.push((len, id | 1 << 62));
                }
            }
        }
        candidates.sort();
        for (len, tagged) in candidates {
            if len >= best.as_ref().map_or(cap, |(l, _)| *l) {
                break;
            }
            let id = tagged & !(1 << 62);
            let (a, b, _, _) = search.redges[id];
            let cycle = search.reduced_cycle(&bfs, a, b, id);
            let reduced_len = cycle.len() / 2;
            if tagged != id {
                let mut key = cycle.clone();
                key.sort_unstable();
                if !tested.insert(key) {
                    continue;
                }
                let noose = classify_closed_walk(e, &search.passages(&cycle))
                    .expect("reduced radial cycles are valid nooses");
                if noose.contractible {
                    continue;
                }
            }
            if best.as_ref().map_or(true, |(l, _)| reduced_len < *l) {
                best = Some((reduced_len, cycle));
            }
        }
        for &x in &order {
            bfs.dist[x] = usize::MAX;
        }
    }
    let Some((_, cycle)) = best else {
        return fallback;
    };
    let noose = classify_closed_walk(e, &search.passages(&cycle)).expect("search yields valid nooses");
    debug_assert!(!noose.contractible, "search returned a contractible noose");
    Some(noose)
}

/// Length of a shortest noncontractible noose; `None` for planar embeddings.
pub fn representativity(e: &RotationEmbedding) -> Option<usize> {
    shortest_noncontractible_noose(e, NooseKind::Any).map(|n| n.length)
}

/// Deletes the noose's vertices and returns the induced embedding.
pub fn cut_vertices_of_noose_and_restrict(
    g: &Graph,
    e: &RotationEmbedding,
    noose: &Noose,
) -> Result<(Graph, RotationEmbedding), EmbeddingError> {
    validate_passages(e, &noose.passages)?;
    if !e.embeds(g) {
        return Err(EmbeddingError::BadNoose("embedding does not match the graph".into()));
    }
    let drop = noose.vertex_set();
    Ok((g.without_vertices(&drop), e.without_vertices(&drop)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{planar_embedding, torus_grid_embedding};
    use crate::graphcore::generators::*;

    #[test]
    fn planar_has_no_noose() {
        let e = planar_embedding(&grid(4, 4)).unwrap();
        assert!(shortest_noncontractible_noose(&e, NooseKind::Any).is_none());
    }

    #[test]
    fn torus_4x4_representativity() {
        let e = torus_grid_embedding(4, 4);
        let n = shortest_noncontractible_noose(&e, NooseKind::Any).unwrap();
        assert_eq!(n.length, 4);
        assert!(!n.contractible && !n.separating);
    }

    #[test]
    fn torus_has_no_orientation_reversing_noose() {
        let e = torus_grid_embedding(3, 3);
        assert!(shortest_noncontractible_noose(&e, NooseKind::OrientationReversing).is_none());
    }

    #[test]
    fn cutting_a_meridian_of_the_torus() {
        let e = torus_grid_embedding(4, 4);
        let g = e.graph();
        let n = shortest_noncontractible_noose(&e, NooseKind::Nonseparating).unwrap();
        let (rest, emb) = cut_vertices_of_noose_and_restrict(&g, &e, &n).unwrap();
        assert_eq!(rest.vertex_count(), 12);
        assert_eq!(emb.euler_genus(), 0);
    }

    #[test]
    fn contractible_noose_around_a_face() {
        let e = planar_embedding(&cycle(4)).unwrap();
        let faces = e.trace_faces();
        let corners: Vec<Corner> = faces[0].corners().collect();
        let passages = vec![
            Passage { face: 0, enter: corners[0], exit: corners[1] },
            Passage { face: 1, enter: faces[1].corners().find(|c| c.at == corners[1].at).unwrap(), exit: faces[1].corners().find(|c| c.at == corners[0].at).unwrap() },
        ];
        let n = classify_closed_walk(&e, &passages).unwrap();
        assert!(n.contractible && n.separating);
    }
}
