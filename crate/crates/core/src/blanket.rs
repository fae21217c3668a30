//! Markov blankets and boundaries of the treatment and the outcome, driven
//! by an abstract conditional-independence oracle.
//!
//! A treatment blanket of `V` is a subset `V'` with `A ⊥ V \ V' | V'`; an
//! outcome blanket satisfies `Y ⊥ V \ V' | A, V'`. The boundary is the
//! smallest blanket, which under a positive joint density is the set of
//! members that stay dependent on the target given everything else.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

use crate::adjustment::{assumptions, SelectionReport, Sufficiency};
use crate::dsep::d_separated;
use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::set::{VertexId, VertexSet};

/// Answers conditional-independence queries; `true` means independent.
///
/// Implementations must be deterministic and symmetric in `x` and `y`, and
/// must report independence whenever `x` or `y` is empty.
pub trait CiOracle: Sync {
    fn independent(&self, x: &VertexSet, y: &VertexSet, given: &VertexSet) -> Result<bool>;
}

impl<O: CiOracle + ?Sized> CiOracle for &O {
    fn independent(&self, x: &VertexSet, y: &VertexSet, given: &VertexSet) -> Result<bool> {
        (**self).independent(x, y, given)
    }
}

/// d-separation in a known graph.
#[derive(Debug, Clone, Copy)]
pub struct DSepOracle<'g> {
    graph: &'g Dag,
}

impl<'g> DSepOracle<'g> {
    pub fn new(graph: &'g Dag) -> Self {
        Self { graph }
    }
}

impl CiOracle for DSepOracle<'_> {
    fn independent(&self, x: &VertexSet, y: &VertexSet, given: &VertexSet) -> Result<bool> {
        d_separated(self.graph, x, y, given)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Treatment,
    Outcome,
}

impl BoundaryKind {
    pub fn other(self) -> Self {
        match self {
            BoundaryKind::Treatment => BoundaryKind::Outcome,
            BoundaryKind::Outcome => BoundaryKind::Treatment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundaryTest {
    pub vertex: VertexId,
    pub independent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTrace {
    pub kind: BoundaryKind,
    /// Input order of the candidates.
    pub order: Vec<VertexId>,
    /// One entry per candidate, in test order.
    pub tests: Vec<BoundaryTest>,
    pub boundary: VertexSet,
    pub oracle_calls: usize,
}

/// Ways of combining the two boundaries of a candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineRule {
    /// `R_A(S) ∩ R_Y|A(S)`; not guaranteed sufficient.
    Conjunctive,
    /// `R_A(S) ∪ R_Y|A(S)`.
    Disjunctive,
    /// `R_Y|A(R_A(S))`.
    TreatmentThenOutcome,
    /// `R_A(R_Y|A(S))`.
    OutcomeThenTreatment,
}

impl CombineRule {
    /// Whether the rule is guaranteed to return a sufficient set when `S` is.
    pub fn is_sound(self) -> bool {
        self != CombineRule::Conjunctive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStart {
    TreatmentFirst,
    OutcomeFirst,
}

impl ReductionStart {
    fn kind(self) -> BoundaryKind {
        match self {
            ReductionStart::TreatmentFirst => BoundaryKind::Treatment,
            ReductionStart::OutcomeFirst => BoundaryKind::Outcome,
        }
    }
}

/// The blanket-based criteria exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlanketCriterion {
    Combine(CombineRule),
    Reduce(ReductionStart),
}

impl BlanketCriterion {
    pub const ALL: [BlanketCriterion; 6] = [
        BlanketCriterion::Combine(CombineRule::Conjunctive),
        BlanketCriterion::Combine(CombineRule::Disjunctive),
        BlanketCriterion::Combine(CombineRule::TreatmentThenOutcome),
        BlanketCriterion::Combine(CombineRule::OutcomeThenTreatment),
        BlanketCriterion::Reduce(ReductionStart::TreatmentFirst),
        BlanketCriterion::Reduce(ReductionStart::OutcomeFirst),
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlanketCriterion::Combine(CombineRule::Conjunctive) => "cap",
            BlanketCriterion::Combine(CombineRule::Disjunctive) => "cup",
            BlanketCriterion::Combine(CombineRule::TreatmentThenOutcome) => "ay",
            BlanketCriterion::Combine(CombineRule::OutcomeThenTreatment) => "ya",
            BlanketCriterion::Reduce(ReductionStart::TreatmentFirst) => "ay-star",
            BlanketCriterion::Reduce(ReductionStart::OutcomeFirst) => "ya-star",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Blanket computations for one treatment/outcome pair over one oracle.
/// Counts every oracle query it issues.
pub struct Blankets<'o, O: CiOracle + ?Sized> {
    oracle: &'o O,
    treatment: VertexId,
    outcome: VertexId,
    calls: AtomicUsize,
}

impl<'o, O: CiOracle + ?Sized> Blankets<'o, O> {
    pub fn new(oracle: &'o O, treatment: VertexId, outcome: VertexId) -> Self {
        Self {
            oracle,
            treatment,
            outcome,
            calls: AtomicUsize::new(0),
        }
    }

    /// Oracle queries issued so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn check_candidates(&self, v: &VertexSet) -> Result<()> {
        if v.contains(self.treatment) || v.contains(self.outcome) {
            return Err(Error::InvalidArgument(
                "candidate set may not contain the treatment or the outcome".into(),
            ));
        }
        Ok(())
    }

    /// `target ⊥ rest | given [∪ {treatment}]`, where target and the extra
    /// conditioning depend on the boundary kind.
    fn target_independent(&self, kind: BoundaryKind, rest: &VertexSet, given: &VertexSet) -> Result<bool> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        match kind {
            BoundaryKind::Treatment => {
                self.oracle
                    .independent(&VertexSet::singleton(self.treatment), rest, given)
            }
            BoundaryKind::Outcome => {
                let mut given = given.clone();
                given.insert(self.treatment);
                self.oracle
                    .independent(&VertexSet::singleton(self.outcome), rest, &given)
            }
        }
    }

    pub fn is_blanket(&self, kind: BoundaryKind, v: &VertexSet, sub: &VertexSet) -> Result<bool> {
        self.check_candidates(v)?;
        if !sub.is_subset(v) {
            return Err(Error::InvalidArgument("blanket candidate is not a subset of V".into()));
        }
        let rest = v.difference(sub);
        if rest.is_empty() {
            return Ok(true);
        }
        self.target_independent(kind, &rest, sub)
    }

    pub fn is_treatment_blanket(&self, v: &VertexSet, sub: &VertexSet) -> Result<bool> {
        self.is_blanket(BoundaryKind::Treatment, v, sub)
    }

    pub fn is_outcome_blanket(&self, v: &VertexSet, sub: &VertexSet) -> Result<bool> {
        self.is_blanket(BoundaryKind::Outcome, v, sub)
    }

    /// Members of `v` that stay dependent on the target given the rest of `v`.
    pub fn boundary_pointwise(&self, kind: BoundaryKind, v: &VertexSet) -> Result<BoundaryTrace> {
        self.check_candidates(v)?;
        let before = self.calls();
        let mut tests = Vec::with_capacity(v.len());
        let mut boundary = VertexSet::new();
        for w in v {
            let mut others = v.clone();
            others.remove(w);
            let independent = self.target_independent(kind, &VertexSet::singleton(w), &others)?;
            if !independent {
                boundary.insert(w);
            }
            tests.push(BoundaryTest { vertex: w, independent });
        }
        Ok(BoundaryTrace {
            kind,
            order: v.to_vec(),
            tests,
            boundary,
            oracle_calls: self.calls() - before,
        })
    }

    /// Backward stepwise elimination: pop each candidate in turn and keep it
    /// only if it is dependent on the target given the candidates not yet
    /// examined together with those already kept.
    pub fn boundary_stepwise(&self, kind: BoundaryKind, order: &[VertexId]) -> Result<BoundaryTrace> {
        let mut remaining: VertexSet = order.iter().copied().collect();
        if remaining.len() != order.len() {
            return Err(Error::InvalidArgument("duplicate entries in candidate list".into()));
        }
        self.check_candidates(&remaining)?;
        let before = self.calls();
        let mut kept = VertexSet::new();
        let mut tests = Vec::with_capacity(order.len());
        for &w in order {
            remaining.remove(w);
            let independent =
                self.target_independent(kind, &VertexSet::singleton(w), &remaining.union(&kept))?;
            if !independent {
                kept.insert(w);
            }
            tests.push(BoundaryTest { vertex: w, independent });
        }
        Ok(BoundaryTrace {
            kind,
            order: order.to_vec(),
            tests,
            boundary: kept,
            oracle_calls: self.calls() - before,
        })
    }

    pub fn boundary(&self, kind: BoundaryKind, v: &VertexSet) -> Result<VertexSet> {
        Ok(self.boundary_pointwise(kind, v)?.boundary)
    }

    pub fn combine(&self, rule: CombineRule, s: &VertexSet) -> Result<VertexSet> {
        use BoundaryKind::{Outcome, Treatment};
        Ok(match rule {
            CombineRule::Conjunctive => self
                .boundary(Treatment, s)?
                .intersection(&self.boundary(Outcome, s)?),
            CombineRule::Disjunctive => self.boundary(Treatment, s)?.union(&self.boundary(Outcome, s)?),
            CombineRule::TreatmentThenOutcome => self.boundary(Outcome, &self.boundary(Treatment, s)?)?,
            CombineRule::OutcomeThenTreatment => self.boundary(Treatment, &self.boundary(Outcome, s)?)?,
        })
    }

    /// Alternates the two boundaries until neither changes the set.
    pub fn reduce_alternating(&self, start: ReductionStart, s: &VertexSet) -> Result<VertexSet> {
        let mut current = s.clone();
        let mut kind = start.kind();
        let mut unchanged = 0;
        // Each step returns a subset of its input, so this terminates.
        while unchanged < 2 {
            let next = self.boundary(kind, &current)?;
            if next == current {
                unchanged += 1;
            } else {
                unchanged = 1;
                current = next;
            }
            kind = kind.other();
        }
        Ok(current)
    }

    /// Whether both boundaries of `c` equal `c`.
    pub fn verify_stability(&self, c: &VertexSet) -> Result<bool> {
        Ok(self.boundary(BoundaryKind::Treatment, c)? == *c
            && self.boundary(BoundaryKind::Outcome, c)? == *c)
    }

    pub fn select_set(&self, criterion: BlanketCriterion, s: &VertexSet) -> Result<VertexSet> {
        match criterion {
            BlanketCriterion::Combine(rule) => self.combine(rule, s),
            BlanketCriterion::Reduce(start) => self.reduce_alternating(start, s),
        }
    }

    /// Runs a criterion and packages the result. With a graph the sufficiency
    /// verdict is recomputed by d-separation; otherwise it is assumed.
    pub fn select(
        &self,
        criterion: BlanketCriterion,
        s: &VertexSet,
        names: &[String],
        graph: Option<&Dag>,
    ) -> Result<SelectionReport> {
        let before = self.calls();
        let selected = self.select_set(criterion, s)?;
        let queries_used = self.calls() - before;
        let stable = self.verify_stability(&selected)?;

        let mut warnings = Vec::new();
        if criterion == BlanketCriterion::Combine(CombineRule::Conjunctive) {
            warnings.push("the conjunctive rule can return an insufficient set".to_string());
        }
        if matches!(criterion, BlanketCriterion::Reduce(_)) && !stable {
            warnings.push(
                "result is not stable under both boundaries; CI answers violate the intersection property"
                    .to_string(),
            );
        }
        let sufficient = match graph {
            Some(g) => Sufficiency::Checked(crate::dsep::ignorability_oracle(g, &selected)?),
            None => Sufficiency::Assumed(assumptions::CANDIDATES_SUFFICIENT_POSITIVE.to_string()),
        };
        let to_names = |set: &VertexSet| set.iter().map(|v| names[v.0].clone()).collect::<Vec<_>>();
        Ok(SelectionReport {
            criterion: criterion.name().to_string(),
            input: to_names(s),
            selected: to_names(&selected),
            sufficient,
            assumption: assumptions::CANDIDATES_SUFFICIENT_POSITIVE.to_string(),
            queries_used,
            warnings,
            stable: Some(stable),
            input_set: s.clone(),
            selected_set: selected,
        })
    }
}
