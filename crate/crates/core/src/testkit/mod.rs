//! Reference implementations and property harnesses.
//!
//! Everything here favours obviousness over speed: brute-force oracles work
//! from path-level definitions and enforce size caps instead of truncating.
//! The suites pit them against the fast routines in the rest of the crate.

mod brute;
mod generate;
mod suites;

pub use brute::{
    closure_bruteforce, dsep_bruteforce, dsep_bruteforce_capped, enumerate_blanket_family, for_each_simple_path,
    inducing_path_bruteforce, inseparable_bruteforce, is_closed_bruteforce, minimal_sufficient_bruteforce,
    nontrivial_common_ancestors_bruteforce, sufficient_bruteforce, BlanketFamily, DsepTable, DEFAULT_CAP,
};
pub use generate::{
    all_labeled_dags, generic_sem, min_dependent_partial_correlation, random_dag, random_sem,
    upper_triangular_dags, RandomDagSpec,
};
pub use suites::{
    blanket_suite, closure_equivalence, collider_inverted_dsep, conjunctive_soundness, disjunctive_soundness,
    dsep_equivalence, gaussian_faithfulness, graphoid, production_dsep, property_suites, random_graphs,
    selection_guarantees, strengthened_weak_transitivity, verma_equivalence, DsepFn, Failure, OracleChoice, Report,
    SuiteConfig, MAX_RECORDED_FAILURES,
};
