//! Helpers shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use genus_approx::embedding::{
    classify_closed_walk, representativity, shortest_noncontractible_noose, Corner, NooseKind, Passage, RotationEmbedding,
    Sign,
};
use genus_approx::graphcore::generators::*;
use genus_approx::graphcore::{Edge, Graph};
use genus_approx::patchwork::Patch;
use genus_approx::Vertex;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_connected(n: u64, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let mut g = path(n);
        for u in 0..n {
            for v in u + 2..n {
                if rng.gen_bool(p) {
                    g.add_edge(Vertex(u), Vertex(v)).unwrap();
                }
            }
        }
        if g.is_connected() {
            return g;
        }
    }
}

pub fn random_embedding(g: &Graph, twist: f64, rng: &mut ChaCha8Rng) -> RotationEmbedding {
    let rotation: BTreeMap<Vertex, Vec<Vertex>> = g
        .vertices()
        .map(|v| {
            let mut nbrs = g.neighbors(v).to_vec();
            nbrs.shuffle(rng);
            (v, nbrs)
        })
        .collect();
    let signs: BTreeMap<Edge, Sign> = g.edges().map(|e| (e, Sign::from_bool(!rng.gen_bool(twist)))).collect();
    RotationEmbedding::new(rotation, signs).unwrap()
}

/// Maximal runs of the cycle present in `h`, counted independently of the library.
pub fn runs(h: &Graph, cycle: &[Vertex]) -> Option<Vec<usize>> {
    let n = cycle.len();
    let link = |i: usize| h.contains(cycle[i]) && h.contains(cycle[(i + 1) % n]) && h.has_edge(cycle[i], cycle[(i + 1) % n]);
    if (0..n).all(link) {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 0;
    let start = (0..n).find(|&i| !link(i)).unwrap() + 1;
    while i < n {
        let at = (start + i) % n;
        if !h.contains(cycle[at]) {
            i += 1;
            continue;
        }
        let mut len = 1;
        while i + len < n + 1 && link((start + i + len - 1) % n) && len < n {
            len += 1;
        }
        out.push(len);
        i += len;
    }
    Some(out)
}

pub fn grid_cycle(side: u64, top: u64, left: u64, h: u64, w: u64) -> Vec<Vertex> {
    let mut c = Vec::new();
    c.extend((left..left + w).map(|j| grid_id(side, top, j)));
    c.extend((top..top + h).map(|i| grid_id(side, i, left + w)));
    c.extend((left + 1..=left + w).rev().map(|j| grid_id(side, top + h, j)));
    c.extend((top + 1..=top + h).rev().map(|i| grid_id(side, i, left)));
    c
}

pub fn damaged(g: &Graph, drop_v: &[u64], drop_e: &[usize]) -> Graph {
    let edges: Vec<Edge> = g.edges().collect();
    let gone: Vec<Edge> = drop_e.iter().map(|&i| edges[i % edges.len()]).collect();
    let h = g.without_edges(gone.iter());
    let n = g.vertex_count() as u64;
    h.without_vertices(&drop_v.iter().map(|&v| Vertex(v % n)).collect())
}

/// Shortest noose of the kind by exhaustive search over walks meeting each
/// vertex and each face at most once, or `None` when no noose of that kind exists.
pub fn exhaustive_shortest(e: &RotationEmbedding, accept: &dyn Fn(bool, bool, bool) -> bool) -> Option<usize> {
    let faces = e.trace_faces();
    let corners: Vec<Vec<_>> = faces.iter().map(|f| f.corners().collect()).collect();
    let vertices: Vec<Vertex> = e.vertices().filter(|&v| !e.rotation_at(v).is_empty()).collect();
    let max_len = vertices.len().min(faces.len());
    for len in 1..=max_len {
        for &start in &vertices {
            let mut walk = Vec::new();
            if search(e, &corners, start, start, len, &mut walk, accept) {
                return Some(len);
            }
        }
    }
    None
}

pub fn search(
    e: &RotationEmbedding,
    corners: &[Vec<Corner>],
    start: Vertex,
    at: Vertex,
    left: usize,
    walk: &mut Vec<Passage>,
    accept: &dyn Fn(bool, bool, bool) -> bool,
) -> bool {
    for (f, cs) in corners.iter().enumerate() {
        if walk.iter().any(|p| p.face == f) {
            continue;
        }
        for &enter in cs.iter().filter(|c| c.at == at) {
            for &exit in cs {
                let closing = left == 1;
                if closing != (exit.at == start) {
                    continue;
                }
                // Keep the start as the smallest vertex so each walk is seen from one end.
                if !closing && (exit.at < start || walk.iter().any(|p| p.enter.at == exit.at) || exit.at == at) {
                    continue;
                }
                if closing && walk.is_empty() && exit == enter {
                    continue;
                }
                walk.push(Passage { face: f, enter, exit });
                let hit = if closing {
                    classify_closed_walk(e, walk).is_ok_and(|n| accept(n.contractible, n.separating, n.orientation_reversing))
                } else {
                    search(e, corners, start, exit.at, left - 1, walk, accept)
                };
                walk.pop();
                if hit {
                    return true;
                }
            }
        }
    }
    false
}

/// Rectangle patch of a `side`×`side` grid with its top-left corner at `(top, left)`.
pub fn rectangle(side: u64, top: u64, left: u64, h: u64, w: u64) -> Patch {
    let g = grid(side, side);
    let inside: BTreeSet<Vertex> = (top + 1..top + h)
        .flat_map(|i| (left + 1..left + w).map(move |j| grid_id(side, i, j)))
        .collect();
    Patch::enclosed(&g, grid_cycle(side, top, left, h, w), &inside)
}

/// Compares the library's shortest nooses of each kind with the exhaustive
/// search; describes the first disagreement.
pub fn noose_mismatch(e: &RotationEmbedding) -> Option<String> {
    let kinds: [(NooseKind, &dyn Fn(bool, bool, bool) -> bool); 3] = [
        (NooseKind::Any, &|contractible, _, _| !contractible),
        (NooseKind::Nonseparating, &|contractible, separating, _| !contractible && !separating),
        (NooseKind::OrientationReversing, &|_, _, reversing| reversing),
    ];
    for (kind, accept) in kinds {
        let found = shortest_noncontractible_noose(e, kind);
        if let Some(n) = &found {
            let again = classify_closed_walk(e, &n.passages).ok()?;
            if !accept(again.contractible, again.separating, again.orientation_reversing) {
                return Some(format!("{kind:?}: returned noose is not of the kind"));
            }
        }
        // An orientable surface has no orientation-reversing curve.
        let expected = if kind == NooseKind::OrientationReversing && e.is_orientable() {
            None
        } else {
            exhaustive_shortest(e, accept)
        };
        let got = found.map(|n| n.length);
        if got != expected {
            return Some(format!("{kind:?}: library {got:?}, exhaustive {expected:?}"));
        }
    }
    None
}

/// A random drawing for the representativity-after-deletion check, cycling
/// through torus grids, orientable drawings and twisted cubic drawings.
pub fn deletion_pair(i: usize, rng: &mut ChaCha8Rng) -> (RotationEmbedding, BTreeSet<Vertex>) {
    let e = match i % 3 {
        0 => {
            let k = rng.gen_range(3..8);
            genus_approx::embedding::torus_grid_embedding(k, rng.gen_range(3..8))
        }
        1 => {
            let g = random_connected(rng.gen_range(5..10), rng.gen_range(0.2..0.7), rng);
            random_embedding(&g, 0.0, rng)
        }
        _ => {
            let g = random_cubic(2 * rng.gen_range(3..8), rng.gen());
            random_embedding(&g, 0.3, rng)
        }
    };
    let vs: Vec<Vertex> = e.vertices().collect();
    let size = rng.gen_range(1..=3.min(vs.len() - 1));
    let x = vs.choose_multiple(rng, size).copied().collect();
    (e, x)
}

/// `rho(e - x) >= rho(e) - |x|`, reading a planar drawing as infinitely representative.
pub fn representativity_drop_ok(e: &RotationEmbedding, x: &BTreeSet<Vertex>) -> bool {
    match (representativity(e), representativity(&e.without_vertices(x))) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(r), Some(r2)) => r2 + x.len() >= r,
    }
}
