// Delete a few edges so that the rest is planar.

use genus_approx::genusdraw::PipelineConfig;
use genus_approx::graphcore::generators::complete_bipartite;
use genus_approx::reductions::edge_planarization;

/// Returns how many edges were deleted.
pub fn run_example() -> usize {
    let g = complete_bipartite(3, 3);
    let result = edge_planarization(&g, 1, &PipelineConfig::default())
        .expect("pipeline runs")
        .feasible()
        .expect("one edge suffices");
    assert!(result.verify(&g));
    println!("deleted {:?}", result.deletion);
    result.deletion.len()
}

#[allow(dead_code)]
fn main() {
    run_example();
}
