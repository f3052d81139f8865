// Draw a graph on a surface of bounded Euler genus, or get a checkable refusal.

use genus_approx::genusdraw::{draw_euler, PipelineConfig};
use genus_approx::graphcore::generators::{complete, torus_grid};

/// Returns `(graph, budget, drawn genus)` for each run.
pub fn run_example() -> Vec<(&'static str, usize, Option<usize>)> {
    let cfg = PipelineConfig::default();
    let runs = [("K7", complete(7), 2), ("K7", complete(7), 0), ("C12xC12", torus_grid(12, 12), 2)];
    runs.into_iter()
        .map(|(name, g, budget)| {
            let cert = draw_euler(&g, budget, &cfg).expect("pipeline runs");
            assert!(cert.verify(&g), "certificate re-checks against the input");
            match cert.genus {
                Some(eg) => println!("{name} budget {budget}: drawn with Euler genus {eg}"),
                None => println!("{name} budget {budget}: rejected, {:?}", cert.rejection_evidence),
            }
            (name, budget, cert.genus)
        })
        .collect()
}

#[allow(dead_code)]
fn main() {
    run_example();
}
