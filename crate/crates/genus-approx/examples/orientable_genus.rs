// Orientable drawings: the output always traces to an even Euler genus.

use genus_approx::genusdraw::{draw_orientable, PipelineConfig};
use genus_approx::graphcore::generators::{complete, complete_bipartite, petersen};

/// Returns the orientable genus of each drawing (half its Euler genus).
pub fn run_example() -> Vec<(&'static str, usize)> {
    let cfg = PipelineConfig::default();
    [("K3,3", complete_bipartite(3, 3)), ("K6", complete(6)), ("Petersen", petersen())]
        .into_iter()
        .map(|(name, g)| {
            let cert = draw_orientable(&g, 2, &cfg).expect("pipeline runs");
            assert!(cert.verify(&g));
            let drawing = cert.drawing.as_ref().expect("genus 2 suffices for these graphs");
            assert!(drawing.is_orientable());
            let eg = drawing.euler_genus();
            println!("{name}: orientable genus {}", eg / 2);
            (name, eg / 2)
        })
        .collect()
}

#[allow(dead_code)]
fn main() {
    run_example();
}
