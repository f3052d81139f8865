// Shortest noncontractible nooses and cutting along them.

use genus_approx::embedding::{cut_vertices_of_noose_and_restrict, shortest_noncontractible_noose, torus_grid_embedding, NooseKind};
use genus_approx::graphcore::generators::torus_grid;

/// Returns the representativity of the 6x6 torus grid and the Euler genus after one cut.
pub fn run_example() -> (usize, usize) {
    let g = torus_grid(6, 6);
    let e = torus_grid_embedding(6, 6);
    let noose = shortest_noncontractible_noose(&e, NooseKind::Any).expect("torus drawing is not planar");
    println!("noose of length {} through {:?}", noose.length, noose.vertices());
    let (_, cut) = cut_vertices_of_noose_and_restrict(&g, &e, &noose).expect("noose is valid");
    println!("after the cut: Euler genus {}", cut.euler_genus());
    (noose.length, cut.euler_genus())
}

#[allow(dead_code)]
fn main() {
    run_example();
}
