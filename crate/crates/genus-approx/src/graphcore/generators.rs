//! Standard graph families used by tests, examples and the acceptance suite.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, Vertex};

fn add(g: &mut Graph, u: u64, v: u64) {
    g.add_edge(Vertex(u), Vertex(v))
        .expect("generators never produce loops");
}

pub fn path(n: u64) -> Graph {
    let mut g = Graph::new();
    g.add_vertex(Vertex(0));
    for i in 1..n {
        add(&mut g, i - 1, i);
    }
    g
}

pub fn cycle(n: u64) -> Graph {
    let mut g = path(n);
    if n >= 3 {
        add(&mut g, n - 1, 0);
    }
    g
}

pub fn complete(n: u64) -> Graph {
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(Vertex(v));
    }
    for u in 0..n {
        for v in u + 1..n {
            add(&mut g, u, v);
        }
    }
    g
}

/// K_{a,b} with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: u64, b: u64) -> Graph {
    let mut g = Graph::new();
    for u in 0..a {
        for v in a..a + b {
            add(&mut g, u, v);
        }
    }
    g
}

pub fn star(leaves: u64) -> Graph {
    complete_bipartite(1, leaves)
}

/// Id of cell `(row, col)` in a grid with `cols` columns.
pub fn grid_id(cols: u64, row: u64, col: u64) -> Vertex {
    Vertex(row * cols + col)
}

/// The `rows × cols` grid graph.
pub fn grid(rows: u64, cols: u64) -> Graph {
    let mut g = Graph::new();
    for r in 0..rows {
        for c in 0..cols {
            g.add_vertex(grid_id(cols, r, c));
            if c + 1 < cols {
                add(&mut g, r * cols + c, r * cols + c + 1);
            }
            if r + 1 < rows {
                add(&mut g, r * cols + c, (r + 1) * cols + c);
            }
        }
    }
    g
}

/// The toroidal grid C_rows × C_cols (requires both ≥ 3).
pub fn torus_grid(rows: u64, cols: u64) -> Graph {
    let mut g = grid(rows, cols);
    for r in 0..rows {
        add(&mut g, r * cols, r * cols + cols - 1);
    }
    for c in 0..cols {
        add(&mut g, c, (rows - 1) * cols + c);
    }
    g
}

pub fn petersen() -> Graph {
    let mut g = Graph::new();
    for i in 0..5 {
        add(&mut g, i, (i + 1) % 5);
        add(&mut g, i, i + 5);
        add(&mut g, 5 + i, 5 + (i + 2) % 5);
    }
    g
}

pub fn cube() -> Graph {
    let mut g = Graph::new();
    for v in 0u64..8 {
        for bit in [1, 2, 4] {
            if v & bit == 0 {
                add(&mut g, v, v | bit);
            }
        }
    }
    g
}

/// Wheel with hub `0` and rim `1..=rim`.
pub fn wheel(rim: u64) -> Graph {
    let mut g = Graph::new();
    for i in 1..=rim {
        add(&mut g, 0, i);
        add(&mut g, i, i % rim + 1);
    }
    g
}

/// Disjoint union, relabelling `b` by adding `a.fresh_id()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.fresh_id();
    let mut g = a.clone();
    for v in b.vertices() {
        g.add_vertex(Vertex(v.0 + shift));
    }
    for e in b.edges() {
        let (u, v) = e.ends();
        add(&mut g, u.0 + shift, v.0 + shift);
    }
    g
}

/// Uniform-ish random cubic simple graph on `n` vertices (even `n ≥ 4`) by the
/// configuration model with rejection.
pub fn random_cubic(n: u64, seed: u64) -> Graph {
    assert!(n >= 4 && n % 2 == 0, "cubic graphs need an even order of at least 4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut points: Vec<u64> = (0..n).flat_map(|v| [v, v, v]).collect();
        points.shuffle(&mut rng);
        let mut g = Graph::new();
        let ok = points.chunks(2).all(|p| {
            p[0] != p[1] && g.add_edge(Vertex(p[0]), Vertex(p[1])).unwrap_or(false)
        });
        if ok {
            return g;
        }
    }
}

/// Random planar graph: a triangulated grid with a random subset of diagonals.
pub fn random_planar(side: u64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = grid(side, side);
    for r in 0..side.saturating_sub(1) {
        for c in 0..side - 1 {
            let flip: bool = rand::Rng::gen(&mut rng);
            if flip {
                add(&mut g, r * side + c, (r + 1) * side + c + 1);
            } else {
                add(&mut g, r * side + c + 1, (r + 1) * side + c);
            }
        }
    }
    g
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// generated by vertex extension and deduplicated by a canonical form.
pub fn all_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 10, "exhaustive generation is limited to 10 vertices");
    let mut layer: Vec<Vec<u16>> = vec![vec![]];
    for k in 1..=n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for rows in &layer {
            for nbrs in 0u16..(1u16 << (k - 1)) {
                let mut cand = rows.clone();
                cand.push(nbrs);
                for (i, row) in cand.iter_mut().enumerate().take(k - 1) {
                    if nbrs >> i & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                let canon = canonical_rows(&cand);
                if seen.insert(canon.clone()) {
                    next.push(canon);
                }
            }
        }
        layer = next;
    }
    layer
        .into_iter()
        .map(|rows| {
            let mut g = Graph::new();
            for v in 0..n {
                g.add_vertex(Vertex(v as u64));
            }
            for (u, row) in rows.iter().enumerate() {
                for v in u + 1..n {
                    if row >> v & 1 == 1 {
                        add(&mut g, u as u64, v as u64);
                    }
                }
            }
            g
        })
        .collect()
}

/// Connected graphs with 1..=`max_n` vertices, one per isomorphism class.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(all_graphs_up_to_iso)
        .filter(Graph::is_connected)
        .collect()
}

// Canonical adjacency rows: refine colors, then take the lexicographically
// smallest relabelling among orderings that respect the color classes.
fn canonical_rows(rows: &[u16]) -> Vec<u16> {
    let n = rows.len();
    let mut color: Vec<u64> = rows.iter().map(|r| r.count_ones() as u64).collect();
    for _ in 0..n {
        let mut sig: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = (0..n).filter(|&w| rows[v] >> w & 1 == 1).map(|w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut distinct = sig.clone();
        distinct.sort();
        distinct.dedup();
        let refined: Vec<u64> = sig
            .drain(..)
            .map(|s| distinct.binary_search(&s).unwrap() as u64)
            .collect();
        let stable = refined.iter().collect::<std::collections::BTreeSet<_>>().len()
            == color.iter().collect::<std::collections::BTreeSet<_>>().len();
        color = refined;
        if stable {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| color[v]);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if color[c[0]] == color[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best: Option<Vec<u16>> = None;
    let mut perm = Vec::with_capacity(n);
    search_orderings(rows, &classes, 0, &mut perm, &mut best);
    best.unwrap_or_default()
}

fn search_orderings(
    rows: &[u16],
    classes: &[Vec<usize>],
    ci: usize,
    perm: &mut Vec<usize>,
    best: &mut Option<Vec<u16>>,
) {
    if ci == classes.len() {
        let n = rows.len();
        let mut pos = vec![0usize; n];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        let cand: Vec<u16> = perm
            .iter()
            .map(|&v| {
                (0..n)
                    .filter(|&w| rows[v] >> w & 1 == 1)
                    .fold(0u16, |acc, w| acc | 1 << pos[w])
            })
            .collect();
        if best.as_ref().map_or(true, |b| cand < *b) {
            *best = Some(cand);
        }
        return;
    }
    let class = &classes[ci];
    for p in permutations(class.len()) {
        let base = perm.len();
        perm.extend(p.iter().map(|&i| class[i]));
        search_orderings(rows, classes, ci + 1, perm, best);
        perm.truncate(base);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(petersen().edge_count(), 15);
        assert_eq!(petersen().max_degree(), 3);
        assert_eq!(cube().edge_count(), 12);
        assert_eq!(torus_grid(4, 5).edge_count(), 40);
        assert_eq!(grid(3, 4).edge_count(), 17);
        assert_eq!(wheel(5).edge_count(), 10);
    }

    #[test]
    fn random_cubic_is_cubic_and_seeded() {
        let g = random_cubic(40, 7);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(g, random_cubic(40, 7));
    }

    // Counts of unlabeled (connected) graphs, OEIS A000088 / A001349.
    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| all_graphs_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=7)
            .map(|n| all_graphs_up_to_iso(n).iter().filter(|g| g.is_connected()).count())
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112, 853]);
    }
}
