//! Shared inputs for the benchmarks.

use confsel_core::testkit::{random_dag, RandomDagSpec};
use confsel_core::Dag;

/// A reproducible random graph with every covariate before the treatment.
pub fn pretreatment_graph(vertices: usize, edge_probability: f64, seed: u64) -> Dag {
    random_dag(&RandomDagSpec {
        vertices,
        edge_probability,
        seed,
        pretreatment_only: true,
        ..Default::default()
    })
    .expect("valid spec")
}
