//! Back-door sufficiency, the structural selection criteria, and minimal
//! sufficient adjustment sets.

use rayon::prelude::*;
use serde::Serialize;

use crate::dsep::{backdoor_blocked, inducing_path_exists};
use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::set::{VertexId, VertexSet};

/// Largest candidate set [`enumerate_minimal_sufficient_sets`] accepts by default.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Whether a selected set controls for confounding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Sufficiency {
    /// Recomputed from the graph.
    Checked(bool),
    /// No graph available; holds only under the stated assumption.
    Assumed(String),
}

impl Sufficiency {
    pub fn is_sufficient(&self) -> Option<bool> {
        match self {
            Sufficiency::Checked(b) => Some(*b),
            Sufficiency::Assumed(_) => None,
        }
    }
}

/// Outcome of one selection criterion.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport {
    pub criterion: String,
    /// Candidate set, canonical order.
    pub input: Vec<String>,
    /// Selected subset of the candidates, canonical order.
    pub selected: Vec<String>,
    pub sufficient: Sufficiency,
    /// Condition under which the criterion is guaranteed to return a sufficient set.
    pub assumption: String,
    /// Oracle or d-separation queries consumed.
    pub queries_used: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Whether both Markov boundaries of the selection equal the selection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
    #[serde(skip)]
    pub input_set: VertexSet,
    #[serde(skip)]
    pub selected_set: VertexSet,
}

impl SelectionReport {
    pub fn is_sufficient(&self) -> Option<bool> {
        self.sufficient.is_sufficient()
    }
}

pub mod assumptions {
    pub const ALL_MEASURED: &str = "all relevant pre-treatment covariates are measured";
    pub const CANDIDATES_SUFFICIENT: &str = "the candidate set is a sufficient adjustment set";
    pub const SOME_SUBSET_SUFFICIENT: &str =
        "some subset of the candidates is sufficient, plus faithfulness";
    pub const CANDIDATES_SUFFICIENT_POSITIVE: &str =
        "the candidate set is sufficient and the joint density is positive";
}

/// True iff `c` blocks every back-door path from the treatment to the outcome.
pub fn blocks_all_backdoor(g: &Dag, c: &VertexSet) -> Result<bool> {
    crate::dsep::ignorability_oracle(g, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuralCriterion {
    /// Keep every candidate.
    Pretreatment,
    /// Candidates that are ancestors of both the treatment and the outcome.
    Conjunctive,
    /// Candidates that are ancestors of the treatment or the outcome.
    Disjunctive,
}

impl StructuralCriterion {
    pub fn name(self) -> &'static str {
        match self {
            StructuralCriterion::Pretreatment => "pretreatment",
            StructuralCriterion::Conjunctive => "conjunctive",
            StructuralCriterion::Disjunctive => "disjunctive",
        }
    }

    fn assumption(self) -> &'static str {
        match self {
            StructuralCriterion::Pretreatment => assumptions::CANDIDATES_SUFFICIENT,
            StructuralCriterion::Conjunctive => assumptions::ALL_MEASURED,
            StructuralCriterion::Disjunctive => assumptions::SOME_SUBSET_SUFFICIENT,
        }
    }

    pub fn select(self, g: &Dag, s: &VertexSet) -> Result<SelectionReport> {
        g.require_pretreatment(s)?;
        let an_a = g.ancestors(&VertexSet::singleton(g.treatment()));
        let an_y = g.ancestors(&VertexSet::singleton(g.outcome()));
        let selected = match self {
            StructuralCriterion::Pretreatment => s.clone(),
            StructuralCriterion::Conjunctive => s.intersection(&an_a).intersection(&an_y),
            StructuralCriterion::Disjunctive => s.intersection(&an_a.union(&an_y)),
        };
        let sufficient = backdoor_blocked(&g.mutilate_backdoor(), g, &selected);
        let mut warnings = Vec::new();
        let latent = s.intersection(g.latent());
        if !latent.is_empty() {
            warnings.push(format!(
                "candidate set contains latent vertices {:?}",
                g.names_of(&latent)
            ));
        }
        Ok(SelectionReport {
            criterion: self.name().to_string(),
            input: g.names_of(s),
            selected: g.names_of(&selected),
            sufficient: Sufficiency::Checked(sufficient),
            assumption: self.assumption().to_string(),
            queries_used: 1,
            warnings,
            stable: None,
            input_set: s.clone(),
            selected_set: selected,
        })
    }
}

pub fn criterion_pretreatment(g: &Dag, s: &VertexSet) -> Result<SelectionReport> {
    StructuralCriterion::Pretreatment.select(g, s)
}

pub fn criterion_conjunctive(g: &Dag, s: &VertexSet) -> Result<SelectionReport> {
    StructuralCriterion::Conjunctive.select(g, s)
}

pub fn criterion_disjunctive(g: &Dag, s: &VertexSet) -> Result<SelectionReport> {
    StructuralCriterion::Disjunctive.select(g, s)
}

/// Whether some subset of `s` blocks every back-door path, decided by the
/// absence of an inducing path between treatment and outcome relative to
/// the non-candidates in the back-door graph.
pub fn exists_sufficient_subset(g: &Dag, s: &VertexSet) -> Result<bool> {
    g.require_pretreatment(s)?;
    let mut others = g.all().difference(s);
    others.remove(g.treatment());
    others.remove(g.outcome());
    let inducing = inducing_path_exists(&g.mutilate_backdoor(), g.treatment(), g.outcome(), &others)?;
    Ok(!inducing)
}

/// Every inclusion-minimal subset of `s` that blocks all back-door paths,
/// in lexicographic order of member indices.
pub fn enumerate_minimal_sufficient_sets(g: &Dag, s: &VertexSet, cap: usize) -> Result<Vec<VertexSet>> {
    g.require_pretreatment(s)?;
    if s.len() > cap {
        return Err(Error::CapExceeded {
            what: "candidate set",
            size: s.len(),
            cap,
        });
    }
    let mutilated = g.mutilate_backdoor();
    let members = s.to_vec();
    let mut minimal: Vec<VertexSet> = Vec::new();
    for k in 0..=members.len() {
        let level: Vec<VertexSet> = combinations(&members, k)
            .into_iter()
            .filter(|c| !minimal.iter().any(|m| m.is_subset(c)))
            .collect();
        let found: Vec<VertexSet> = level
            .into_par_iter()
            .filter(|c| backdoor_blocked(&mutilated, g, c))
            .collect();
        minimal.extend(found);
    }
    minimal.sort_by_key(|c| c.to_vec());
    Ok(minimal)
}

fn combinations(items: &[VertexId], k: usize) -> Vec<VertexSet> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance to the next k-combination in lexicographic order
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
