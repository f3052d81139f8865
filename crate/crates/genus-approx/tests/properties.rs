//! Invariant suites: framing, patch algebra, nooses, orientable outputs.

use std::collections::BTreeSet;

use genus_approx::embedding::{torus_grid_embedding, RotationEmbedding};
use genus_approx::genusdraw::{draw_orientable, PipelineConfig};
use genus_approx::graphcore::generators::*;
use genus_approx::patchwork::{frame, framing_id, framing_size, merge_patches, PatchSet};
use genus_approx::Vertex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

// ---------------------------------------------------------------- framing

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn framing_size_matches_the_formula(
        top in 0u64..4, left in 0u64..4, hh in 2u64..4, ww in 2u64..4,
        drop_v in prop::collection::vec(0u64..64, 0..4),
        drop_e in prop::collection::vec(0usize..200, 0..4),
    ) {
        let side = 8;
        let g = grid(side, side);
        let cycles = vec![grid_cycle(side, top, left, hh, ww), grid_cycle(side, 4, 4, 2, 3)];
        let h = damaged(&g, &drop_v, &drop_e);
        let framed = frame(&h, &cycles).unwrap();
        let (mut added_v, mut added_e) = (0, 0);
        for c in &cycles {
            match runs(&h, c) {
                None => {
                    added_v += 2 * c.len();
                    added_e += 4 * c.len();
                }
                Some(rs) => {
                    added_v += rs.iter().map(|l| 2 * l).sum::<usize>();
                    added_e += rs.iter().map(|l| 4 * l - 2).sum::<usize>();
                }
            }
        }
        prop_assert_eq!(framing_size(&h, &cycles), added_v);
        prop_assert_eq!(framed.vertex_count(), h.vertex_count() + added_v);
        prop_assert_eq!(framed.edge_count(), h.edge_count() + added_e);
        prop_assert_eq!(framed.induced(&h.vertex_set()), h);
    }

    #[test]
    fn framing_of_a_subgraph_is_a_subgraph_of_the_framing(
        drop_v in prop::collection::vec(0u64..64, 0..5),
        drop_e in prop::collection::vec(0usize..200, 0..5),
        more_v in prop::collection::vec(0u64..64, 0..3),
    ) {
        let side = 8;
        let g = grid(side, side);
        let cycles = vec![grid_cycle(side, 0, 0, 3, 3), grid_cycle(side, 3, 3, 3, 4)];
        let big = damaged(&g, &drop_v, &drop_e);
        let small = damaged(&big, &more_v, &[]);
        let (fb, fs) = (frame(&big, &cycles).unwrap(), frame(&small, &cycles).unwrap());
        prop_assert!(fs.vertices().all(|v| fb.contains(v)));
        let inside = fs.edges().all(|e| {
            let (a, b) = e.ends();
            fb.has_edge(a, b)
        });
        prop_assert!(inside);
    }
}

#[test]
fn framing_labels_are_canonical() {
    let side = 6;
    let g = grid(side, side);
    let c = grid_cycle(side, 1, 1, 2, 2);
    let f = frame(&g, &[c.clone()]).unwrap();
    for (col, &v) in c.iter().enumerate() {
        let (r2, r3) = (framing_id(0, 2, col as u32), framing_id(0, 3, col as u32));
        assert!(f.has_edge(v, r2) && f.has_edge(r2, r3));
    }
}

// ---------------------------------------------------------------- patch algebra

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn merging_keeps_patch_sets_non_overlapping(
        rects in prop::collection::vec((0u64..8, 0u64..8, 2u64..5, 2u64..5), 1..8),
    ) {
        let side = 12;
        let g = grid(side, side);
        let mut ps = PatchSet::default();
        for (top, left, h, w) in rects {
            let p = rectangle(side, top, left, h, w);
            prop_assert!(p.is_well_formed(&g));
            let before_cover: BTreeSet<Vertex> = ps.patches.iter().flat_map(|q| q.vertices.iter().copied()).collect();
            let before = ps.clone();
            ps = merge_patches(&ps, p.clone());
            prop_assert!(ps.is_non_overlapping());
            let cover: BTreeSet<Vertex> = ps.patches.iter().flat_map(|q| q.vertices.iter().copied()).collect();
            prop_assert!(before_cover.is_subset(&cover) && p.vertices.is_subset(&cover));
            prop_assert_eq!(&ps.patches.last().unwrap().cycle, &p.cycle);
            // Members untouched by the new patch survive unchanged.
            for q in &before.patches {
                let touched = q.interior().iter().any(|v| p.vertices.contains(v))
                    || p.interior().iter().any(|v| q.vertices.contains(v));
                if !touched {
                    prop_assert!(ps.patches.contains(q) || ps.patches.last().unwrap().vertices.is_superset(&q.vertices));
                }
            }
            prop_assert!(ps.len() <= before.len() + 1);
        }
    }
}

// ---------------------------------------------------------------- nooses

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn shortest_nooses_are_minimal_on_small_radial_graphs(n in 3u64..8, p in 0.1f64..0.8, twist in 0.0f64..0.5, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected(n, p, &mut rng);
        let e = random_embedding(&g, twist, &mut rng);
        prop_assume!(e.vertex_count() + e.face_count() <= 14);
        prop_assert_eq!(noose_mismatch(&e), None);
    }
}

#[test]
fn shortest_nooses_are_minimal_on_standard_drawings() {
    let named = [
        torus_grid_embedding(3, 3),
        torus_grid_embedding(3, 4),
        RotationEmbedding::arbitrary(&complete(5)),
        RotationEmbedding::arbitrary(&complete_bipartite(3, 3)),
    ];
    for e in named {
        assert_eq!(noose_mismatch(&e), None);
    }
}

// ---------------------------------------------------------------- representativity after deletion

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn representativity_drops_by_at_most_the_deleted_count(shape in 0usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e, x) = deletion_pair(shape, &mut rng);
        prop_assert!(representativity_drop_ok(&e, &x), "deleting {:?} from {:?}", x, e);
    }
}

// ---------------------------------------------------------------- orientable outputs

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn orientable_outputs_have_even_genus(n in 4u64..11, p in 0.2f64..0.8, budget in 0usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected(n, p, &mut rng);
        let cert = draw_orientable(&g, budget, &PipelineConfig::default()).unwrap();
        prop_assert!(cert.verify(&g));
        if let Some(d) = &cert.drawing {
            prop_assert!(d.is_orientable());
            prop_assert_eq!(d.euler_genus() % 2, 0);
            prop_assert_eq!(cert.orientable, Some(true));
        }
    }

    #[test]
    fn orientable_outputs_on_cubic_graphs(half in 2u64..30, seed: u64) {
        let g = random_cubic(2 * half, seed);
        let cert = draw_orientable(&g, 3, &PipelineConfig::default()).unwrap();
        prop_assert!(cert.verify(&g));
        if let Some(d) = &cert.drawing {
            prop_assert!(d.is_orientable() && d.euler_genus() % 2 == 0);
        }
    }
}
