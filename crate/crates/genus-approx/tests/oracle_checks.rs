//! Exact oracles against closed formulas and an independent brute force.

use std::collections::BTreeMap;

use genus_approx::graphcore::generators::*;
use genus_approx::graphcore::Graph;
use genus_approx::oracle::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force census: minimum Euler genus over all rotation systems with
/// signs fixed to `+` on a depth-first tree, and how many reach it.
/// Faces are orbits of (dart, orientation) states, each face seen twice.
struct Census {
    min: usize,
    count: usize,
}

fn census(g: &Graph, orientable_only: bool) -> Census {
    let ids: Vec<_> = g.vertices().collect();
    let index: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = ids.len();
    let nbrs: Vec<Vec<usize>> = ids.iter().map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect()).collect();
    let m = g.edge_count();

    let mut tree = vec![vec![false; n]; n];
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &nbrs[v] {
            if !seen[w] {
                seen[w] = true;
                tree[v][w] = true;
                tree[w][v] = true;
                stack.push(w);
            }
        }
    }
    let cotree: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| nbrs[v].iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
        .filter(|&(v, w)| !tree[v][w])
        .collect();

    // Cyclic orders with the first neighbour fixed.
    fn orders(list: &[usize]) -> Vec<Vec<usize>> {
        if list.len() <= 2 {
            return vec![list.to_vec()];
        }
        let mut out = Vec::new();
        let mut rest = list[1..].to_vec();
        permute(&mut rest, 0, &mut |p| {
            let mut o = vec![list[0]];
            o.extend_from_slice(p);
            out.push(o);
        });
        out
    }
    fn permute(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == a.len() {
            return f(a);
        }
        for i in k..a.len() {
            a.swap(k, i);
            permute(a, k + 1, f);
            a.swap(k, i);
        }
    }
    let choices: Vec<Vec<Vec<usize>>> = nbrs.iter().map(|l| orders(l)).collect();

    let sign_patterns: u64 = if orientable_only { 1 } else { 1 << cotree.len() };
    let mut best = Census { min: usize::MAX, count: 0 };
    let mut pick = vec![0usize; n];
    loop {
        let rot: Vec<&Vec<usize>> = (0..n).map(|v| &choices[v][pick[v]]).collect();
        for pattern in 0..sign_patterns {
            let mut negative = vec![vec![false; n]; n];
            for (bit, &(v, w)) in cotree.iter().enumerate() {
                let neg = pattern >> bit & 1 == 1;
                negative[v][w] = neg;
                negative[w][v] = neg;
            }
            let mut visited: Vec<Vec<[bool; 2]>> = rot.iter().map(|r| vec![[false; 2]; r.len()]).collect();
            // An isolated vertex is a face on its own.
            let mut orbits = 2 * rot.iter().filter(|r| r.is_empty()).count();
            for v in 0..n {
                for i in 0..rot[v].len() {
                    for o in 0..2 {
                        if visited[v][i][o] {
                            continue;
                        }
                        orbits += 1;
                        let (mut x, mut j, mut s) = (v, i, o);
                        while !visited[x][j][s] {
                            visited[x][j][s] = true;
                            let y = rot[x][j];
                            let s2 = s ^ usize::from(negative[x][y]);
                            let d = rot[y].len();
                            let p = rot[y].iter().position(|&z| z == x).unwrap();
                            j = if s2 == 0 { (p + 1) % d } else { (p + d - 1) % d };
                            x = y;
                            s = s2;
                        }
                    }
                }
            }
            assert_eq!(orbits % 2, 0, "every face is traced once in each direction");
            let eg = 2 + m - n - orbits / 2;
            if eg < best.min {
                best = Census { min: eg, count: 0 };
            }
            if eg == best.min {
                best.count += 1;
            }
        }
        let mut v = 0;
        while v < n {
            pick[v] += 1;
            if pick[v] < choices[v].len() {
                break;
            }
            pick[v] = 0;
            v += 1;
        }
        if v == n {
            break;
        }
    }
    best
}

#[test]
fn k4_planar_embeddings_are_a_mirror_pair() {
    let g = complete(4);
    let all = enumerate_min_genus_embeddings(&g, &OracleBudget::default()).unwrap();
    let independent = census(&g, false);
    assert_eq!(independent.min, 0);
    assert_eq!(independent.count, 2);
    assert_eq!(all.len(), independent.count);
    assert!(all.iter().all(|e| e.euler_genus() == 0 && e.embeds(&g)));
}

#[test]
fn brute_force_agrees_on_every_connected_graph_up_to_five_vertices() {
    let budget = OracleBudget::default();
    for g in connected_graphs_up_to(5) {
        let any = census(&g, false);
        let orientable = census(&g, true);
        assert_eq!(exact_euler_genus(&g, &budget).unwrap(), any.min, "{g:?}");
        assert_eq!(exact_orientable_genus(&g, &budget).unwrap(), orientable.min / 2, "{g:?}");
        let all = enumerate_min_genus_embeddings(&g, &budget).unwrap();
        assert_eq!(all.len(), any.count, "{g:?}");
        assert!(all.iter().all(|e| e.euler_genus() == any.min && e.embeds(&g)));
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

#[test]
fn complete_graphs_match_the_genus_formulas() {
    let budget = OracleBudget::default();
    for n in 4..=7usize {
        let g = complete(n as u64);
        let genus = ceil_div((n - 3) * (n - 4), 12);
        // Nonorientable genus formula, with the single exception K7.
        let crosscaps = if n == 7 { 3 } else { ceil_div((n - 3) * (n - 4), 6) };
        assert_eq!(exact_orientable_genus(&g, &budget).unwrap(), genus, "K{n}");
        assert_eq!(exact_euler_genus(&g, &budget).unwrap(), crosscaps.min(2 * genus), "K{n}");
    }
}

#[test]
fn complete_bipartite_graphs_match_the_genus_formulas() {
    let budget = OracleBudget::default();
    for (a, b) in [(2, 5), (3, 3), (3, 4), (3, 5), (4, 4)] {
        let g = complete_bipartite(a as u64, b as u64);
        let genus = ceil_div((a - 2) * (b - 2), 4);
        let crosscaps = ceil_div((a - 2) * (b - 2), 2);
        assert_eq!(exact_orientable_genus(&g, &budget).unwrap(), genus, "K{a},{b}");
        assert_eq!(exact_euler_genus(&g, &budget).unwrap(), crosscaps.min(2 * genus), "K{a},{b}");
    }
}

#[test]
fn crossing_and_planarization_anchors() {
    let budget = OracleBudget::default();
    // Euler's bound m <= 3n - 6 (m <= 2n - 4 without triangles) gives the
    // lower bounds; the search supplies drawings that meet them.
    for (g, cr, vp, ep) in [
        (complete(5), 1, 1, 1),
        (complete_bipartite(3, 3), 1, 1, 1),
        (complete(6), 3, 2, 3),
        (petersen(), 2, 2, 2),
    ] {
        assert_eq!(exact_crossing_number(&g, &budget).unwrap(), cr, "{g:?}");
        assert_eq!(exact_vertex_planarization(&g, &budget).unwrap(), vp, "{g:?}");
        assert_eq!(exact_edge_planarization(&g, &budget).unwrap(), ep, "{g:?}");
    }
    let k5 = complete(5);
    assert!(!crossing_number_at_most(&k5, 0, &budget).unwrap());
    assert!(crossing_number_at_most(&k5, 1, &budget).unwrap());
}

#[test]
fn refusal_instead_of_running_unbounded() {
    let tiny = OracleBudget { max_states: 50, timeout: None };
    assert_eq!(exact_euler_genus(&complete(7), &tiny), Err(OracleError::OverBudget(50)));
    assert!(exact_crossing_number(&complete(6), &tiny).is_err());
    let instant = OracleBudget { max_states: u64::MAX, timeout: Some(std::time::Duration::ZERO) };
    assert!(matches!(exact_euler_genus(&complete(7), &instant), Err(OracleError::Timeout(_))));
}

fn random_connected(n: u64, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut g = path(n);
        for u in 0..n {
            for v in u + 2..n {
                if rng.gen_bool(p) {
                    g.add_edge(genus_approx::Vertex(u), genus_approx::Vertex(v)).unwrap();
                }
            }
        }
        if g.is_connected() {
            return g;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn oracles_are_monotone_under_edge_deletion(n in 4u64..8, p in 0.2f64..0.9, seed: u64, pick: prop::sample::Index) {
        let budget = OracleBudget::default();
        let g = random_connected(n, p, seed);
        let edges: Vec<_> = g.edges().collect();
        let (a, b) = edges[pick.index(edges.len())].ends();
        let mut h = g.clone();
        h.remove_edge(a, b);
        prop_assert!(exact_euler_genus(&h, &budget).unwrap() <= exact_euler_genus(&g, &budget).unwrap());
        prop_assert!(exact_orientable_genus(&h, &budget).unwrap() <= exact_orientable_genus(&g, &budget).unwrap());
        prop_assert!(exact_crossing_number(&h, &budget).unwrap() <= exact_crossing_number(&g, &budget).unwrap());
        prop_assert!(exact_vertex_planarization(&h, &budget).unwrap() <= exact_vertex_planarization(&g, &budget).unwrap());
        prop_assert!(exact_edge_planarization(&h, &budget).unwrap() <= exact_edge_planarization(&g, &budget).unwrap());
    }

    #[test]
    fn euler_genus_is_at_most_twice_the_orientable_genus(n in 4u64..8, p in 0.2f64..0.9, seed: u64) {
        let budget = OracleBudget::default();
        let g = random_connected(n, p, seed);
        let (eg, witness) = min_genus_embedding(&g, Surface::Any, &budget).unwrap();
        prop_assert_eq!(witness.euler_genus(), eg);
        prop_assert!(witness.embeds(&g));
        prop_assert!(eg <= 2 * exact_orientable_genus(&g, &budget).unwrap());
    }
}
