// Grid minors and the universal patch of a torus grid.

use genus_approx::embedding::torus_grid_embedding;
use genus_approx::graphcore::generators::{grid, torus_grid};
use genus_approx::gridminor::planar_grid_minor;
use genus_approx::patchwork::{compute_universal_patch, PatchConfig};

/// Returns the side of the grid minor found in a 7x7 grid and the patch interior size.
pub fn run_example() -> (usize, usize) {
    let plane = grid(7, 7);
    let minor = planar_grid_minor(&plane);
    assert!(minor.validate(&plane));
    println!("7x7 grid: grid minor of side {}", minor.side());

    let g = torus_grid(20, 20);
    let patch = compute_universal_patch(&g, 1, &PatchConfig::default()).expect("torus grid is wide enough");
    assert!(patch.is_patch_of(&torus_grid_embedding(20, 20)));
    println!("C20xC20: patch with boundary {} and {} interior vertices", patch.cycle.len(), patch.interior().len());
    (minor.side(), patch.interior().len())
}

#[allow(dead_code)]
fn main() {
    run_example();
}
