// Plane drawings with crossings, stored as a planarized graph plus provenance.

use genus_approx::genusdraw::PipelineConfig;
use genus_approx::graphcore::generators::complete;
use genus_approx::reductions::{crossing_number_drawing, Decision};

/// Returns the number of crossings in the drawing of K6.
pub fn run_example() -> usize {
    let g = complete(6);
    let decision = crossing_number_drawing(&g, 3, &PipelineConfig::default()).expect("pipeline runs");
    let drawing = match decision {
        Decision::Feasible(d) => d,
        Decision::Rejected(r) => panic!("K6 has a drawing with three crossings: {r:?}"),
    };
    assert!(drawing.verify(&g));
    for (x, (e, f)) in &drawing.provenance {
        println!("crossing {x:?}: {e:?} over {f:?}");
    }
    let smoothed = drawing.smoothed().expect("crossings smooth back");
    assert_eq!(smoothed, g);
    drawing.crossings
}

#[allow(dead_code)]
fn main() {
    println!("{} crossings", run_example());
}
