//! Confounder selection on causal DAGs.
//!
//! The crate answers d-separation and back-door queries on a [`Dag`],
//! selects adjustment sets by the pre-treatment, conjunctive-cause and
//! disjunctive-cause rules or by Markov-blanket reduction against any
//! [`CiOracle`], and simulates linear-Gaussian models for end-to-end checks.
//!
//! ```
//! use confsel_core::{fixtures, blanket::*};
//!
//! let g = fixtures::gb();
//! let s = g.set(["X1", "X2"]).unwrap();
//! let oracle = DSepOracle::new(&g);
//! let b = Blankets::new(&oracle, g.treatment(), g.outcome());
//! let c = b.reduce_alternating(ReductionStart::TreatmentFirst, &s).unwrap();
//! assert_eq!(g.names_of(&c), ["X1"]);
//! ```

pub mod adjustment;
pub mod blanket;
pub mod dsep;
mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod sem;
mod set;
pub mod testkit;

pub use adjustment::{SelectionReport, Sufficiency};
pub use blanket::{BlanketCriterion, CiOracle};
pub use error::{Error, Result};
pub use graph::{Dag, DagBuilder, Role, Swig};
pub use sem::{Dataset, LinearSem};
pub use set::{subsets, VertexId, VertexSet};
