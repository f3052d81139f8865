// Exhaustive ground truth for small graphs.

use genus_approx::graphcore::generators::complete;
use genus_approx::oracle::{
    enumerate_min_genus_embeddings, exact_crossing_number, exact_edge_planarization, exact_euler_genus,
    exact_orientable_genus, exact_vertex_planarization, OracleBudget, OracleError,
};

/// Returns `[eg, genus, cr, vp, ep, #min-genus embeddings]` of K5.
pub fn run_example() -> [usize; 6] {
    let g = complete(5);
    let budget = OracleBudget::default();
    let values = [
        exact_euler_genus(&g, &budget).unwrap(),
        exact_orientable_genus(&g, &budget).unwrap(),
        exact_crossing_number(&g, &budget).unwrap(),
        exact_vertex_planarization(&g, &budget).unwrap(),
        exact_edge_planarization(&g, &budget).unwrap(),
        enumerate_min_genus_embeddings(&g, &budget).unwrap().len(),
    ];
    println!("K5: eg {} genus {} cr {} vp {} ep {}, {} optimal embeddings", values[0], values[1], values[2], values[3], values[4], values[5]);

    let tiny = OracleBudget { max_states: 1_000, timeout: None };
    match exact_euler_genus(&complete(8), &tiny) {
        Err(OracleError::OverBudget(n)) => println!("K8 refused after {n} states"),
        other => panic!("expected a refusal, got {other:?}"),
    }
    values
}

#[allow(dead_code)]
fn main() {
    run_example();
}
