// Delete a few vertices so that the rest is planar.

use genus_approx::genusdraw::PipelineConfig;
use genus_approx::graphcore::generators::{complete, disjoint_union, petersen};
use genus_approx::reductions::vertex_planarization;

/// Returns how many vertices were deleted.
pub fn run_example() -> usize {
    let g = disjoint_union(&complete(5), &petersen());
    let result = vertex_planarization(&g, 2, &PipelineConfig::default())
        .expect("pipeline runs")
        .feasible()
        .expect("two vertices suffice");
    assert!(result.verify(&g));
    println!("deleted {:?}", result.deletion);
    result.deletion.len()
}

#[allow(dead_code)]
fn main() {
    run_example();
}
