//! Property suites. Each suite runs one family of checks over a list of
//! graphs and returns a [`Report`]; failing cases carry the offending graph
//! in `.cg` form so they can be replayed.

use std::collections::{BTreeMap, VecDeque};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::brute::{
    bits, closure_bruteforce, enumerate_blanket_family, inducing_path_bruteforce, inseparable_bruteforce,
    is_closed_bruteforce, minimal_sufficient_bruteforce, nontrivial_common_ancestors_bruteforce, DsepTable,
    DEFAULT_CAP,
};
use super::generate::{all_labeled_dags, generic_sem, random_dag, RandomDagSpec};
use crate::adjustment::{
    criterion_conjunctive, criterion_disjunctive, criterion_pretreatment, enumerate_minimal_sufficient_sets,
    exists_sufficient_subset, DEFAULT_SUBSET_CAP,
};
use crate::blanket::{
    BlanketCriterion, Blankets, BoundaryKind, CiOracle, CombineRule, DSepOracle, ReductionStart,
};
use crate::dsep::{d_connected_set, d_separated, ignorability_oracle, inducing_path_exists};
use crate::error::Result;
use crate::format::to_cg;
use crate::graph::Dag;
use crate::set::{subsets, VertexId, VertexSet};

/// Failures kept per report; the total count is always exact.
pub const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
    /// The graph in `.cg` form.
    pub graph: String,
}

impl Failure {
    fn new(g: &Dag, case: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure {
            case: case.into(),
            detail: detail.into(),
            graph: to_cg(g),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    /// Individual checks performed.
    pub cases: usize,
    pub failure_count: usize,
    /// At most [`MAX_RECORDED_FAILURES`] entries.
    pub failures: Vec<Failure>,
    /// Named tallies of interesting but non-failing events.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexample_files: Vec<PathBuf>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
            observations: BTreeMap::new(),
            counterexample_files: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn fail(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(failure);
        }
    }

    pub fn observe(&mut self, name: &str, count: usize) {
        *self.observations.entry(name.to_string()).or_default() += count;
    }

    pub fn observation(&self, name: &str) -> usize {
        self.observations.get(name).copied().unwrap_or(0)
    }

    fn merge(mut self, other: Partial) -> Self {
        self.cases += other.cases;
        for f in other.failures {
            self.fail(f);
        }
        for (k, v) in other.observations {
            self.observe(&k, v);
        }
        self
    }

    fn collect(suite: &str, parts: impl IntoIterator<Item = Partial>) -> Self {
        parts.into_iter().fold(Report::new(suite), Report::merge)
    }

    /// Writes each recorded failing graph to `dir` as `<suite>-<i>.cg`.
    pub fn persist_counterexamples(&mut self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (i, f) in self.failures.iter().enumerate() {
            let path = dir.join(format!("{}-{i}.cg", self.suite));
            let text = format!("# {}: {}\n{}", f.case, f.detail, f.graph);
            std::fs::write(&path, text)?;
            self.counterexample_files.push(path);
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Results of one graph, merged in input order.
#[derive(Default)]
struct Partial {
    cases: usize,
    failures: Vec<Failure>,
    observations: Vec<(String, usize)>,
}

impl Partial {
    fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.cases += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    fn observe(&mut self, name: &str) {
        self.observations.push((name.to_string(), 1));
    }
}

fn run(suite: &str, graphs: &[Dag], f: impl Fn(usize, &Dag) -> Partial + Sync) -> Report {
    let parts: Vec<Partial> = graphs.par_iter().enumerate().map(|(i, g)| f(i, g)).collect();
    Report::collect(suite, parts)
}

fn render(g: &Dag, mask: u64) -> String {
    let names: Vec<&str> = bits(mask).map(|i| g.name(VertexId(i))).collect();
    format!("{{{}}}", names.join(","))
}

/// A d-separation routine under test.
pub type DsepFn = fn(&Dag, &VertexSet, &VertexSet, &VertexSet) -> bool;

/// The production routine as a [`DsepFn`].
pub fn production_dsep(g: &Dag, xs: &VertexSet, ys: &VertexSet, given: &VertexSet) -> bool {
    d_separated(g, xs, ys, given).expect("suite queries use disjoint sets")
}

/// Reachability d-separation with the collider rule inverted: a collider
/// passes exactly when it is not an ancestor of the conditioning set. Used
/// to show the suites catch a broken implementation.
pub fn collider_inverted_dsep(g: &Dag, xs: &VertexSet, ys: &VertexSet, given: &VertexSet) -> bool {
    let an_given = g.ancestors(given);
    let mut seen = VertexSet::new();
    let mut queue: VecDeque<(VertexId, bool)> = xs.iter().map(|x| (x, true)).collect();
    let mut seen_down = VertexSet::new();
    while let Some((v, up)) = queue.pop_front() {
        let fresh = if up { seen.insert(v) } else { seen_down.insert(v) };
        if !fresh {
            continue;
        }
        let conditioned = given.contains(v);
        if !conditioned && ys.contains(v) {
            return false;
        }
        if up && !conditioned {
            queue.extend(g.parents(v).iter().map(|&p| (p, true)));
            queue.extend(g.children(v).iter().map(|&c| (c, false)));
        } else if !up {
            if !conditioned {
                queue.extend(g.children(v).iter().map(|&c| (c, false)));
            }
            if !an_given.contains(v) {
                queue.extend(g.parents(v).iter().map(|&p| (p, true)));
            }
        }
    }
    true
}

/// Splits `code` into per-vertex base-`k` digits.
fn digits(mut code: usize, n: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).map(move |v| {
        let d = code % k;
        code /= k;
        (v, d)
    })
}

/// `dsep` against path enumeration on every query `(X, Y | Z)` with `X` and
/// `Y` non-empty and the three sets pairwise disjoint.
pub fn dsep_equivalence(suite: &str, graphs: &[Dag], dsep: DsepFn) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        let table = match DsepTable::new(g, DEFAULT_CAP) {
            Ok(t) => t,
            Err(e) => {
                p.check(false, || Failure::new(g, "table", e.to_string()));
                return p;
            }
        };
        let n = g.len();
        for code in 0..4usize.pow(n as u32) {
            let (mut x, mut y, mut z) = (0u64, 0u64, 0u64);
            for (v, d) in digits(code, n, 4) {
                match d {
                    1 => x |= 1 << v,
                    2 => y |= 1 << v,
                    3 => z |= 1 << v,
                    _ => {}
                }
            }
            if x == 0 || y == 0 {
                continue;
            }
            let (xs, ys, zs) = (VertexSet::from_mask(x), VertexSet::from_mask(y), VertexSet::from_mask(z));
            let fast = dsep(g, &xs, &ys, &zs);
            let reference = table.separated(x, y, z);
            p.check(fast == reference, || {
                Failure::new(
                    g,
                    format!("{} vs {} given {}", render(g, x), render(g, y), render(g, z)),
                    format!("implementation says separated={fast}, path enumeration says {reference}"),
                )
            });
            if !p.failures.is_empty() {
                break;
            }
        }
        p
    })
}

/// Production d-separation memoized per `(given, x)`; queries are then bit
/// operations.
struct ReachTable {
    n: usize,
    reach: Vec<u64>,
}

impl ReachTable {
    fn new(g: &Dag) -> Self {
        let n = g.len();
        let mut reach = vec![0u64; n << n];
        for z in 0..1u64 << n {
            let given = VertexSet::from_mask(z);
            for x in (0..n).filter(|x| z >> x & 1 == 0) {
                reach[(z as usize) * n + x] = d_connected_set(g, &VertexSet::singleton(VertexId(x)), &given).to_mask();
            }
        }
        ReachTable { n, reach }
    }

    fn sep(&self, xs: u64, ys: u64, given: u64) -> bool {
        let row = given as usize * self.n;
        bits(xs).all(|x| self.reach[row + x] & ys == 0)
    }
}

/// Symmetry, decomposition, weak union, contraction, intersection and
/// composition of d-separation over every disjoint `(X, Y, Z, W)` with `X`
/// and `Y` non-empty.
pub fn graphoid(suite: &str, graphs: &[Dag]) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        let t = ReachTable::new(g);
        let n = g.len();
        let mut bad: Option<(&str, u64, u64, u64, u64)> = None;
        let mut cases = 0;
        'all: for code in 0..5usize.pow(n as u32) {
            let mut m = [0u64; 5];
            for (v, d) in digits(code, n, 5) {
                m[d] |= 1 << v;
            }
            let [_, x, y, z, w] = m;
            if x == 0 || y == 0 {
                continue;
            }
            let props: [(&str, bool); 6] = [
                ("symmetry", t.sep(x, y, z) == t.sep(y, x, z)),
                ("decomposition", !t.sep(x, y | w, z) || (t.sep(x, y, z) && t.sep(x, w, z))),
                ("weak union", !t.sep(x, y | w, z) || t.sep(x, y, z | w)),
                ("contraction", !(t.sep(x, y, z) && t.sep(x, w, y | z)) || t.sep(x, y | w, z)),
                ("intersection", !(t.sep(x, y, w | z) && t.sep(x, w, y | z)) || t.sep(x, y | w, z)),
                ("composition", !(t.sep(x, y, z) && t.sep(x, w, z)) || t.sep(x, y | w, z)),
            ];
            cases += props.len();
            if let Some((name, _)) = props.iter().find(|(_, ok)| !ok) {
                bad = Some((name, x, y, z, w));
                break 'all;
            }
        }
        p.cases = cases;
        if let Some((name, x, y, z, w)) = bad {
            p.failures.push(Failure::new(
                g,
                name,
                format!("X={} Y={} Z={} W={}", render(g, x), render(g, y), render(g, z), render(g, w)),
            ));
        }
        p
    })
}

/// For vertices `x, y` and disjoint `W, Z` (`Z` non-empty) avoiding both:
/// `x ⊥ y | W` and `x ⊥ y | W ∪ Z` imply some `z ∈ Z` has `z ⊥ x | W` or
/// `z ⊥ y | W`.
pub fn strengthened_weak_transitivity(suite: &str, graphs: &[Dag]) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        let t = ReachTable::new(g);
        let n = g.len();
        for x in 0..n {
            for y in x + 1..n {
                let others: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
                for code in 0..3usize.pow(others.len() as u32) {
                    let (mut w, mut z) = (0u64, 0u64);
                    for (i, d) in digits(code, others.len(), 3) {
                        match d {
                            1 => w |= 1 << others[i],
                            2 => z |= 1 << others[i],
                            _ => {}
                        }
                    }
                    if z == 0 {
                        continue;
                    }
                    let (xm, ym) = (1u64 << x, 1u64 << y);
                    if !(t.sep(xm, ym, w) && t.sep(xm, ym, w | z)) {
                        continue;
                    }
                    let witness = bits(z).any(|v| t.sep(1 << v, xm, w) || t.sep(1 << v, ym, w));
                    p.check(witness, || {
                        Failure::new(
                            g,
                            "strengthened weak transitivity",
                            format!(
                                "x={} y={} W={} Z={}",
                                g.name(VertexId(x)),
                                g.name(VertexId(y)),
                                render(g, w),
                                render(g, z)
                            ),
                        )
                    });
                }
            }
        }
        p
    })
}

/// `inducing_path_exists` against the inducing-path definition and against
/// the absence of any separator, for every vertex pair and every `L`.
pub fn verma_equivalence(suite: &str, graphs: &[Dag]) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        let table = DsepTable::new(g, DEFAULT_CAP).expect("suite graphs are within the cap");
        for u in g.vertices() {
            for v in g.vertices().filter(|&v| v > u) {
                let mut pool = g.all();
                pool.remove(u);
                pool.remove(v);
                for l in subsets(&pool) {
                    let fast = inducing_path_exists(g, u, v, &l).expect("valid endpoints");
                    let by_path = inducing_path_bruteforce(g, u, v, &l).expect("within cap");
                    let by_sep = inseparable_bruteforce(&table, g, u, v, &l);
                    p.check(fast == by_path && by_path == by_sep, || {
                        Failure::new(
                            g,
                            format!("{} ~ {} relative to {}", g.name(u), g.name(v), render(g, l.to_mask())),
                            format!("fast={fast} definition={by_path} no-separator={by_sep}"),
                        )
                    });
                }
            }
        }
        p
    })
}

/// Fixpoint closure against the brute-force intersection, plus the
/// non-trivial common ancestor sets they are built from. `sets_per_graph`
/// random seeds per graph, always including `{A, Y}` and `{A, Y} ∪ S` for
/// the pre-treatment covariates `S`.
pub fn closure_equivalence(suite: &str, graphs: &[Dag], sets_per_graph: usize, seed: u64) -> Report {
    use rand::{Rng, SeedableRng};
    run(suite, graphs, |i, g| {
        let mut p = Partial::default();
        for a in g.vertices() {
            for b in g.vertices().filter(|&b| b > a) {
                let fast = g.nontrivial_common_ancestors(a, b).expect("distinct");
                let slow = nontrivial_common_ancestors_bruteforce(g, a, b).expect("within cap");
                p.check(fast == slow, || {
                    Failure::new(
                        g,
                        format!("An*({}, {})", g.name(a), g.name(b)),
                        format!("fast={:?} reference={:?}", g.names_of(&fast), g.names_of(&slow)),
                    )
                });
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9));
        let ay: VertexSet = [g.treatment(), g.outcome()].into_iter().collect();
        let mut seeds = vec![ay.clone(), ay.union(&g.pretreatment_covariates())];
        let full = (1u64 << g.len()) - 1;
        seeds.extend((0..sets_per_graph).map(|_| VertexSet::from_mask(rng.random::<u64>() & full)));
        for h in seeds {
            let fast = g.causal_closure(&h);
            let slow = closure_bruteforce(g, &h).expect("within cap");
            let closed = is_closed_bruteforce(g, &fast) && g.is_causally_closed(&fast);
            p.check(fast == slow && closed && h.is_subset(&fast), || {
                Failure::new(
                    g,
                    format!("closure of {}", render(g, h.to_mask())),
                    format!(
                        "fixpoint={:?} intersection={:?} closed={closed}",
                        g.names_of(&fast),
                        g.names_of(&slow)
                    ),
                )
            });
        }
        p
    })
}

/// Blanket checks on one graph and candidate set with the given oracle:
/// boundary is the family minimum and a member, the family is closed under
/// intersection, every member has the same boundary, stepwise elimination
/// agrees with the pointwise rule for several orders, and (when `s` is
/// sufficient) every member is sufficient.
fn blanket_checks<O: CiOracle + ?Sized>(p: &mut Partial, g: &Dag, oracle: &O, s: &VertexSet) -> Result<()> {
    let b = Blankets::new(oracle, g.treatment(), g.outcome());
    let s_sufficient = ignorability_oracle(g, s)?;
    for kind in [BoundaryKind::Treatment, BoundaryKind::Outcome] {
        let family = enumerate_blanket_family(oracle, g.treatment(), g.outcome(), kind, s)?;
        let boundary = b.boundary(kind, s)?;
        let label = |what: &str| format!("{kind:?} {what} of {}", render(g, s.to_mask()));
        p.check(family.minimum() == boundary && family.contains(&boundary), || {
            Failure::new(
                g,
                label("boundary"),
                format!("pointwise={:?} family minimum={:?}", g.names_of(&boundary), g.names_of(&family.minimum())),
            )
        });
        p.check(family.is_intersection_closed(), || {
            Failure::new(g, label("family"), "not closed under intersection")
        });
        for member in &family.members {
            let inner = b.boundary(kind, member)?;
            p.check(inner == boundary, || {
                Failure::new(
                    g,
                    label("reduction"),
                    format!("boundary of member {:?} is {:?}", g.names_of(member), g.names_of(&inner)),
                )
            });
            if s_sufficient {
                let ok = ignorability_oracle(g, member)?;
                p.check(ok, || {
                    Failure::new(g, label("soundness"), format!("member {:?} is not sufficient", g.names_of(member)))
                });
            }
        }
        let order = s.to_vec();
        let mut orders = vec![order.clone(), order.iter().rev().copied().collect()];
        for r in 1..order.len() {
            let mut o = order.clone();
            o.rotate_left(r);
            orders.push(o);
        }
        for o in orders {
            let step = b.boundary_stepwise(kind, &o)?.boundary;
            p.check(step == boundary, || {
                Failure::new(
                    g,
                    label("stepwise"),
                    format!("order {:?} gave {:?}", o.iter().map(|v| g.name(*v)).collect::<Vec<_>>(), g.names_of(&step)),
                )
            });
        }
    }
    Ok(())
}

/// Which oracle [`blanket_suite`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleChoice {
    DSeparation,
    /// Exact partial correlations of a generic random SEM on the graph.
    ExactGaussian,
}

/// Blanket-family checks with `S` = observed pre-treatment covariates.
pub fn blanket_suite(suite: &str, graphs: &[Dag], choice: OracleChoice, seed: u64) -> Report {
    run(suite, graphs, |i, g| {
        let mut p = Partial::default();
        let s = g.pretreatment_covariates().difference(g.latent());
        let outcome = match choice {
            OracleChoice::DSeparation => blanket_checks(&mut p, g, &DSepOracle::new(g), &s),
            OracleChoice::ExactGaussian => generic_sem(g, seed.wrapping_add(i as u64), 1e-8, 50)
                .and_then(|m| blanket_checks(&mut p, g, &m.exact_oracle(1e-9), &s)),
        };
        if let Err(e) = outcome {
            p.check(false, || Failure::new(g, "error", e.to_string()));
        }
        p
    })
}

/// With `S` all pre-treatment covariates: the sound combination rules return
/// sufficient sets, both alternating reductions return members of the
/// brute-force minimal list and are stable, and the fast minimal-set
/// enumeration matches the brute-force one.
pub fn selection_guarantees(suite: &str, graphs: &[Dag]) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        if let Err(e) = selection_checks(&mut p, g) {
            p.check(false, || Failure::new(g, "error", e.to_string()));
        }
        p
    })
}

fn selection_checks(p: &mut Partial, g: &Dag) -> Result<()> {
    let s = g.pretreatment_covariates().difference(g.latent());
    let oracle = DSepOracle::new(g);
    let b = Blankets::new(&oracle, g.treatment(), g.outcome());
    let minimal = minimal_sufficient_bruteforce(g, &s)?;
    let fast_minimal = enumerate_minimal_sufficient_sets(g, &s, DEFAULT_SUBSET_CAP)?;
    p.check(minimal == fast_minimal, || {
        Failure::new(g, "minimal sets", "fast enumeration disagrees with brute force")
    });
    p.check(ignorability_oracle(g, &s)?, || {
        Failure::new(g, "premise", "all pre-treatment covariates are not sufficient")
    });
    for rule in [CombineRule::Disjunctive, CombineRule::TreatmentThenOutcome, CombineRule::OutcomeThenTreatment] {
        let c = b.combine(rule, &s)?;
        let ok = ignorability_oracle(g, &c)?;
        p.check(ok, || {
            Failure::new(g, format!("{rule:?}"), format!("selected {:?} is not sufficient", g.names_of(&c)))
        });
    }
    if !ignorability_oracle(g, &b.combine(CombineRule::Conjunctive, &s)?)? {
        p.observe("conjunctive_insufficient");
    }
    for start in [ReductionStart::TreatmentFirst, ReductionStart::OutcomeFirst] {
        let c = b.reduce_alternating(start, &s)?;
        let name = BlanketCriterion::Reduce(start).name();
        p.check(minimal.contains(&c), || {
            Failure::new(g, name, format!("{:?} is not a minimal sufficient set", g.names_of(&c)))
        });
        let stable = b.verify_stability(&c)?;
        p.check(stable, || Failure::new(g, name, format!("{:?} is not stable", g.names_of(&c))));
    }
    Ok(())
}

/// With every covariate pre-treatment and `S` all of them, the conjunctive
/// criterion returns a sufficient set.
pub fn conjunctive_soundness(suite: &str, graphs: &[Dag]) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        match criterion_conjunctive(g, &g.covariates()) {
            Ok(r) => p.check(r.is_sufficient() == Some(true), || {
                Failure::new(g, "conjunctive", format!("selected {:?} is not sufficient", r.selected))
            }),
            Err(e) => p.check(false, || Failure::new(g, "error", e.to_string())),
        }
        p
    })
}

/// Wherever some subset of the observed pre-treatment covariates is
/// sufficient, the disjunctive criterion's output is sufficient. Also checks
/// `exists_sufficient_subset` against brute force on every graph and tallies
/// graphs where keeping every candidate fails but the disjunctive set works.
pub fn disjunctive_soundness(suite: &str, graphs: &[Dag]) -> Report {
    run(suite, graphs, |_, g| {
        let mut p = Partial::default();
        let outcome = (|| -> Result<()> {
            let s = g.pretreatment_covariates().difference(g.latent());
            let exists = exists_sufficient_subset(g, &s)?;
            let brute = !minimal_sufficient_bruteforce(g, &s)?.is_empty();
            p.check(exists == brute, || {
                Failure::new(g, "exists_sufficient_subset", format!("fast={exists} brute force={brute}"))
            });
            if exists {
                p.observe("qualifying");
                let disj = criterion_disjunctive(g, &s)?;
                p.check(disj.is_sufficient() == Some(true), || {
                    Failure::new(g, "disjunctive", format!("selected {:?} is not sufficient", disj.selected))
                });
                if criterion_pretreatment(g, &s)?.is_sufficient() == Some(false) && disj.is_sufficient() == Some(true) {
                    p.observe("pretreatment_fails_disjunctive_succeeds");
                }
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            p.check(false, || Failure::new(g, "error", e.to_string()));
        }
        p
    })
}

/// The exact Gaussian oracle of a generic SEM agrees with d-separation on
/// every single-vertex query `(x, y | given)`. Set-valued queries reduce to
/// these for both oracles.
pub fn gaussian_faithfulness(suite: &str, graphs: &[Dag], seed: u64, tol: f64) -> Report {
    run(suite, graphs, |i, g| {
        let mut p = Partial::default();
        let m = match generic_sem(g, seed.wrapping_add(i as u64), 10.0 * tol, 100) {
            Ok(m) => m,
            Err(e) => {
                p.check(false, || Failure::new(g, "parameters", e.to_string()));
                return p;
            }
        };
        let oracle = m.exact_oracle(tol);
        for x in g.vertices() {
            for y in g.vertices().filter(|&y| y > x) {
                let mut pool = g.all();
                pool.remove(x);
                pool.remove(y);
                for given in subsets(&pool) {
                    let (xs, ys) = (VertexSet::singleton(x), VertexSet::singleton(y));
                    let gauss = oracle.independent(&xs, &ys, &given).expect("positive definite");
                    let graph = production_dsep(g, &xs, &ys, &given);
                    p.check(gauss == graph, || {
                        Failure::new(
                            g,
                            format!("{} vs {} given {}", g.name(x), g.name(y), render(g, given.to_mask())),
                            format!("gaussian={gauss} d-separation={graph}"),
                        )
                    });
                }
            }
        }
        p
    })
}

/// Settings for [`property_suites`].
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random graphs per randomized suite.
    pub random_graphs: usize,
    /// Largest random graph.
    pub max_vertices: usize,
    /// Where failing graphs are written, if anywhere.
    pub counterexample_dir: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            random_graphs: 50,
            max_vertices: 8,
            counterexample_dir: None,
        }
    }
}

/// `count` random graphs with sizes cycling through `min..=max`.
pub fn random_graphs(count: usize, min: usize, max: usize, seed: u64, template: &RandomDagSpec) -> Vec<Dag> {
    (0..count)
        .map(|i| {
            let spec = RandomDagSpec {
                vertices: min + i % (max - min + 1),
                seed: seed.wrapping_mul(0x1000_0000_01b3).wrapping_add(i as u64),
                ..template.clone()
            };
            random_dag(&spec).expect("valid spec")
        })
        .collect()
}

/// Runs every suite at the configured scale, persisting counterexamples if
/// a directory is set.
pub fn property_suites(config: &SuiteConfig) -> Vec<Report> {
    let fixtures = vec![crate::fixtures::ga(), crate::fixtures::gb(), crate::fixtures::gc()];
    let max = config.max_vertices.clamp(3, DEFAULT_CAP);
    let mixed = random_graphs(config.random_graphs, 3, max, config.seed, &RandomDagSpec {
        latent_fraction: 0.3,
        ..Default::default()
    });
    let pre = random_graphs(config.random_graphs, 3, max, config.seed, &RandomDagSpec {
        pretreatment_only: true,
        ..Default::default()
    });
    let small: Vec<Dag> = mixed.iter().filter(|g| g.len() <= 7).cloned().collect();
    let five = all_labeled_dags(5).expect("supported size");

    let mut dsep_graphs = fixtures.clone();
    dsep_graphs.extend(mixed.iter().cloned());
    let mut reports = vec![
        dsep_equivalence("dsep-equivalence", &dsep_graphs, production_dsep),
        graphoid("graphoid", &fixtures),
        strengthened_weak_transitivity("strengthened-weak-transitivity", &five),
        verma_equivalence("verma", &small),
        closure_equivalence("closure", &mixed, 4, config.seed),
        blanket_suite("blanket-dsep", &pre, OracleChoice::DSeparation, config.seed),
        selection_guarantees("selection-guarantees", &pre),
        conjunctive_soundness("conjunctive-soundness", &pre),
        disjunctive_soundness("disjunctive-soundness", &mixed),
    ];
    if let Some(dir) = &config.counterexample_dir {
        for r in &mut reports {
            // A report that cannot be persisted still carries its failures.
            let _ = r.persist_counterexamples(dir);
        }
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn graphoid_on_fixtures() {
        let graphs = [fixtures::ga(), fixtures::gb(), fixtures::gc()];
        let r = graphoid("graphoid", &graphs);
        assert!(r.passed(), "{}", r.to_json());
        assert!(r.cases > 0);
    }

    #[test]
    fn canary_is_caught_with_a_counterexample() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = dsep_equivalence("canary", &[fixtures::ga()], collider_inverted_dsep);
        assert!(!r.passed());
        r.persist_counterexamples(dir.path()).unwrap();
        let text = std::fs::read_to_string(&r.counterexample_files[0]).unwrap();
        assert_eq!(crate::format::parse(&text).unwrap().dag, fixtures::ga());
        assert!(r.to_json().contains("\"suite\": \"canary\""));
    }

    #[test]
    fn production_passes_where_canary_fails() {
        let r = dsep_equivalence("dsep", &[fixtures::ga(), fixtures::gb()], production_dsep);
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn small_property_run() {
        let config = SuiteConfig { random_graphs: 6, max_vertices: 6, ..Default::default() };
        for r in property_suites(&config) {
            assert!(r.passed(), "{}", r.to_json());
        }
    }
}
