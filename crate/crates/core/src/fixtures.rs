//! The three reference graphs used throughout the tests and documentation.

use crate::format::parse;
use crate::graph::Dag;
use crate::sem::LinearSem;

/// M-bias: `U1 -> A`, `U1 -> L`, `U2 -> L`, `U2 -> Y`, `A -> Y` with `U1`, `U2` latent.
pub const GA_CG: &str = include_str!("../fixtures/ga.cg");
/// `X1 -> A`, `X1 -> X2`, `X2 -> Y`, `A -> Y`.
pub const GB_CG: &str = include_str!("../fixtures/gb.cg");
/// Eight-vertex ground DAG used for causal-closure examples.
pub const GC_CG: &str = include_str!("../fixtures/gc.cg");

pub fn ga() -> Dag {
    parse(GA_CG).expect("bundled fixture parses").dag
}

pub fn gb() -> Dag {
    parse(GB_CG).expect("bundled fixture parses").dag
}

pub fn gc() -> Dag {
    parse(GC_CG).expect("bundled fixture parses").dag
}

/// M-bias SEM: all coefficients 1, unit noise variances, continuous treatment.
pub fn ga_sem() -> LinearSem {
    LinearSem::from_graph_file(&parse(GA_CG).expect("bundled fixture parses"))
        .expect("bundled fixture has complete SEM parameters")
}

/// SEM with `X1->A` 0.8, `X1->X2` 0.7, `X2->Y` 0.6, `A->Y` 1.5, unit noise variances.
pub fn gb_sem() -> LinearSem {
    LinearSem::from_graph_file(&parse(GB_CG).expect("bundled fixture parses"))
        .expect("bundled fixture has complete SEM parameters")
}
