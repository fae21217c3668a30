//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use confsel_core::adjustment::enumerate_minimal_sufficient_sets;
use confsel_core::adjustment::{criterion_disjunctive, criterion_pretreatment, DEFAULT_SUBSET_CAP};
use confsel_core::blanket::{BoundaryKind, Blankets, CombineRule, DSepOracle, ReductionStart};
use confsel_core::dsep::ignorability_oracle;
use confsel_core::sem::{ate_standardization, partial_correlation, Dataset, FisherZOracle};
use confsel_core::testkit::{
    all_labeled_dags, closure_bruteforce, disjunctive_soundness, dsep_equivalence, enumerate_blanket_family,
    gaussian_faithfulness, graphoid, production_dsep, random_graphs, selection_guarantees,
    strengthened_weak_transitivity, upper_triangular_dags, RandomDagSpec, Report,
};
use confsel_core::{fixtures, Dag, VertexSet};

const SEED: u64 = 20_240_611;
const TOTAL_BUDGET: Duration = Duration::from_secs(600);

/// Criterion 9 and 10 tolerances.
const ALPHA: f64 = 0.01;
const RECOVERY_N: usize = 20_000;
const RECOVERY_RUNS: u64 = 100;
const RECOVERY_MIN_HITS: usize = 95;
const RECOVERY_BUDGET: Duration = Duration::from_secs(60);
const ATE_TOL: f64 = 0.05;

/// Criterion 8 tolerance on exact partial correlations.
const EXACT_TOL: f64 = 1e-9;

/// Criterion 11.
const CF_N: usize = 100_000;
const CF_TOL: f64 = 0.02;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq_names(g: &Dag, what: &str, got: &VertexSet, want: &[&str]) -> Result<(), String> {
    let want_set = g.set(want).map_err(|e| e.to_string())?;
    ensure(*got == want_set, || format!("{what}: got {:?}, expected {want:?}", g.names_of(got)))
}

fn family_names(g: &Dag, sets: &[VertexSet]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = sets.iter().map(|s| g.names_of(s)).collect();
    out.sort();
    out
}

fn suite(reports: &[Report]) -> Outcome {
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    for r in reports {
        if !r.passed() {
            return Err(format!("{} failures in {}: {}", r.failure_count, r.suite, r.to_json()));
        }
    }
    Ok(format!("{cases} checks"))
}

fn ga_suite() -> Outcome {
    let g = fixtures::ga();
    let s = g.set(["U1", "U2", "L"]).unwrap();
    let oracle = DSepOracle::new(&g);
    let b = Blankets::new(&oracle, g.treatment(), g.outcome());
    let e = |r: confsel_core::Result<VertexSet>| r.map_err(|e| e.to_string());
    eq_names(&g, "R_A", &e(b.boundary(BoundaryKind::Treatment, &s))?, &["U1"])?;
    eq_names(&g, "R_Y|A", &e(b.boundary(BoundaryKind::Outcome, &s))?, &["U2"])?;
    eq_names(&g, "cap", &e(b.combine(CombineRule::Conjunctive, &s))?, &[])?;
    eq_names(&g, "cup", &e(b.combine(CombineRule::Disjunctive, &s))?, &["U1", "U2"])?;
    eq_names(&g, "ay", &e(b.combine(CombineRule::TreatmentThenOutcome, &s))?, &[])?;
    eq_names(&g, "ya", &e(b.combine(CombineRule::OutcomeThenTreatment, &s))?, &[])?;
    eq_names(&g, "ay-star", &e(b.reduce_alternating(ReductionStart::TreatmentFirst, &s))?, &[])?;
    eq_names(&g, "ya-star", &e(b.reduce_alternating(ReductionStart::OutcomeFirst, &s))?, &[])?;
    ensure(ignorability_oracle(&g, &VertexSet::new()).unwrap(), || "empty set should be sufficient".into())?;
    ensure(!ignorability_oracle(&g, &g.set(["L"]).unwrap()).unwrap(), || "{L} should be insufficient".into())?;
    Ok("exact set equality".into())
}

fn gb_suite() -> Outcome {
    let g = fixtures::gb();
    let s = g.set(["X1", "X2"]).unwrap();
    let oracle = DSepOracle::new(&g);
    let b = Blankets::new(&oracle, g.treatment(), g.outcome());
    let e = |r: confsel_core::Result<VertexSet>| r.map_err(|e| e.to_string());

    for (kind, want) in [
        (BoundaryKind::Treatment, vec![vec!["X1"], vec!["X1", "X2"]]),
        (BoundaryKind::Outcome, vec![vec!["X1", "X2"], vec!["X2"]]),
    ] {
        let family = enumerate_blanket_family(&oracle, g.treatment(), g.outcome(), kind, &s).unwrap();
        let got = family_names(&g, &family.members);
        ensure(got == want, || format!("{kind:?} blankets: got {got:?}, expected {want:?}"))?;
    }
    eq_names(&g, "R_A", &e(b.boundary(BoundaryKind::Treatment, &s))?, &["X1"])?;
    eq_names(&g, "R_Y|A", &e(b.boundary(BoundaryKind::Outcome, &s))?, &["X2"])?;

    let cap = e(b.combine(CombineRule::Conjunctive, &s))?;
    eq_names(&g, "cap", &cap, &[])?;
    ensure(!ignorability_oracle(&g, &cap).unwrap(), || "cap should be insufficient".into())?;
    for rule in [CombineRule::Disjunctive, CombineRule::TreatmentThenOutcome, CombineRule::OutcomeThenTreatment] {
        let c = e(b.combine(rule, &s))?;
        ensure(ignorability_oracle(&g, &c).unwrap(), || format!("{rule:?} gave insufficient {:?}", g.names_of(&c)))?;
    }
    eq_names(&g, "ay-star", &e(b.reduce_alternating(ReductionStart::TreatmentFirst, &s))?, &["X1"])?;
    eq_names(&g, "ya-star", &e(b.reduce_alternating(ReductionStart::OutcomeFirst, &s))?, &["X2"])?;

    let minimal = enumerate_minimal_sufficient_sets(&g, &s, DEFAULT_SUBSET_CAP).map_err(|e| e.to_string())?;
    let got = family_names(&g, &minimal);
    ensure(got == [vec!["X1"], vec!["X2"]], || format!("minimal sets {got:?}"))?;
    Ok("exact set equality".into())
}

fn gc_closure() -> Outcome {
    let g = fixtures::gc();
    let h = g.set(["S1", "S2", "A", "Y"]).unwrap();
    let fast = g.causal_closure(&h);
    eq_names(&g, "closure", &fast, &["Z1", "Z3", "S1", "S2", "A", "Y"])?;
    let slow = closure_bruteforce(&g, &h).map_err(|e| e.to_string())?;
    ensure(fast == slow, || format!("brute-force intersection gave {:?}", g.names_of(&slow)))?;
    Ok("fixpoint = intersection = {A,S1,S2,Y,Z1,Z3}".into())
}

fn dsep_dual() -> Outcome {
    let mut exhaustive = Vec::new();
    for n in 2..=5 {
        exhaustive.extend(all_labeled_dags(n).unwrap());
    }
    let random = random_graphs(200, 5, 9, SEED, &RandomDagSpec::default());
    let count = exhaustive.len();
    suite(&[
        dsep_equivalence("dsep-exhaustive", &exhaustive, production_dsep),
        dsep_equivalence("dsep-random", &random, production_dsep),
    ])
    .map(|d| format!("{count} labeled + 200 random graphs, {d}"))
}

fn graphoid_properties() -> Outcome {
    let five = all_labeled_dags(5).unwrap();
    let random = random_graphs(48, 7, 8, SEED + 5, &RandomDagSpec::default());
    suite(&[
        graphoid("graphoid-5", &five),
        strengthened_weak_transitivity("swt-5", &five),
        graphoid("graphoid-random", &random),
        strengthened_weak_transitivity("swt-random", &random),
    ])
    .map(|d| format!("{} five-vertex + {} random graphs, {d}", five.len(), random.len()))
}

fn selection_guarantees_run() -> Outcome {
    let graphs = random_graphs(100, 4, 10, SEED + 6, &RandomDagSpec {
        pretreatment_only: true,
        ..Default::default()
    });
    let r = selection_guarantees("selection-guarantees", &graphs);
    suite(std::slice::from_ref(&r)).map(|d| {
        format!("100 graphs, {d}; conjunctive insufficient on {}", r.observation("conjunctive_insufficient"))
    })
}

fn disjunctive() -> Outcome {
    let template = RandomDagSpec {
        latent_fraction: 0.3,
        ..Default::default()
    };
    let mut qualifying = 0;
    let mut reports = Vec::new();
    let mut batch = 0;
    while qualifying < 100 {
        ensure(batch < 20, || format!("only {qualifying} qualifying graphs found"))?;
        let graphs = random_graphs(50, 4, 10, SEED + 700 + batch, &template);
        let r = disjunctive_soundness("disjunctive", &graphs);
        qualifying += r.observation("qualifying");
        reports.push(r);
        batch += 1;
    }
    let witness = disjunctive_soundness("disjunctive-witness", &[fixtures::ga()]);
    let witnessed = witness.observation("pretreatment_fails_disjunctive_succeeds");
    let random_witnesses: usize =
        reports.iter().map(|r| r.observation("pretreatment_fails_disjunctive_succeeds")).sum();
    reports.push(witness);
    let detail = suite(&reports)?;

    let g = fixtures::ga();
    let s = g.set(["L"]).unwrap();
    let pre = criterion_pretreatment(&g, &s).map_err(|e| e.to_string())?;
    let disj = criterion_disjunctive(&g, &s).map_err(|e| e.to_string())?;
    ensure(witnessed == 1 && pre.is_sufficient() == Some(false) && disj.is_sufficient() == Some(true), || {
        "M-bias graph is not a pretreatment-fails/disjunctive-succeeds witness".into()
    })?;
    Ok(format!("{qualifying} qualifying graphs, {detail}; witnesses: M-bias + {random_witnesses} random"))
}

fn faithfulness() -> Outcome {
    let mut graphs = Vec::new();
    for n in 2..=6 {
        graphs.extend(upper_triangular_dags(n).unwrap());
    }
    let count = graphs.len();
    suite(&[gaussian_faithfulness("gaussian-faithfulness", &graphs, SEED, EXACT_TOL)])
        .map(|d| format!("{count} graphs with 2 to 6 vertices, {d}"))
}

fn recovery() -> Outcome {
    let start = Instant::now();
    let sem = fixtures::gb_sem();
    let mut ay_hits = 0;
    let mut ya_hits = 0;
    for seed in 0..RECOVERY_RUNS {
        let d = sem.sample(RECOVERY_N, SEED + seed).map_err(|e| e.to_string())?;
        let col = |n: &str| confsel_core::VertexId(d.column_index(n).unwrap());
        let s: VertexSet = [col("X1"), col("X2")].into_iter().collect();
        let oracle = FisherZOracle::new(&d, ALPHA).map_err(|e| e.to_string())?;
        let b = Blankets::new(&oracle, col("A"), col("Y"));
        let ay = b.reduce_alternating(ReductionStart::TreatmentFirst, &s).map_err(|e| e.to_string())?;
        let ya = b.reduce_alternating(ReductionStart::OutcomeFirst, &s).map_err(|e| e.to_string())?;
        ay_hits += usize::from(ay == VertexSet::singleton(col("X1")));
        ya_hits += usize::from(ya == VertexSet::singleton(col("X2")));
    }
    let elapsed = start.elapsed();
    let detail = format!("ay-star={{X1}} in {ay_hits}, ya-star={{X2}} in {ya_hits} of {RECOVERY_RUNS}, {elapsed:.1?}");
    ensure(ay_hits >= RECOVERY_MIN_HITS && ya_hits >= RECOVERY_MIN_HITS && elapsed < RECOVERY_BUDGET, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn estimation() -> Outcome {
    let n = RECOVERY_N as f64;
    // OLS standard errors from the population design: residual variance over
    // n·Var(A | adjustment).
    // Adjusting X1 leaves 0.6·e_X2 + e_Y in the residual and Var(A | X1) = 1.
    let se_x1 = (1.36 / n).sqrt();
    // Adjusting X2: residual e_Y; Var(A | X2) = 1.64 − 0.56²/1.49.
    let se_x2 = (1.0 / (n * (1.64 - 0.56f64.powi(2) / 1.49))).sqrt();
    ensure(ATE_TOL >= 4.0 * se_x1.max(se_x2), || format!("tolerance below 4 SE ({se_x1:.4}, {se_x2:.4})"))?;

    let d = fixtures::gb_sem().sample(RECOVERY_N, SEED).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for adj in ["X1", "X2"] {
        let est = ate_standardization(&d, "A", "Y", &[adj]).map_err(|e| e.to_string())?;
        ensure((est - 1.5).abs() <= ATE_TOL, || format!("gb adjusting {adj}: {est:.4}"))?;
        notes.push(format!("{adj}: {est:.3}"));
    }
    let d = fixtures::ga_sem().sample(RECOVERY_N, SEED).map_err(|e| e.to_string())?;
    let biased = ate_standardization(&d, "A", "Y", &["L"]).map_err(|e| e.to_string())?;
    let plain = ate_standardization(&d, "A", "Y", &[]).map_err(|e| e.to_string())?;
    ensure((biased - 1.0).abs() > ATE_TOL, || format!("M-bias adjusting L: {biased:.4} not biased"))?;
    ensure((plain - 1.0).abs() <= ATE_TOL, || format!("M-bias unadjusted: {plain:.4}"))?;
    notes.push(format!("M-bias L: {biased:.3}, none: {plain:.3}"));
    Ok(notes.join(", "))
}

fn counterfactual() -> Outcome {
    let sem = fixtures::ga_sem().with_binary_treatment();
    let cf = sem.sample_counterfactual(CF_N, SEED).map_err(|e| e.to_string())?;
    let l = cf.covariate("L").map_err(|e| e.to_string())?.to_vec();
    let d = Dataset::new(
        vec!["A".into(), "Y0".into(), "L".into()],
        vec![cf.treatment.clone(), cf.outcome_0.clone(), l],
    )
    .map_err(|e| e.to_string())?;
    let sigma = d.covariance(&[0, 1, 2]);
    let marginal = partial_correlation(&sigma, 0, 1, &[]).map_err(|e| e.to_string())?;
    let conditional = partial_correlation(&sigma, 0, 1, &[2]).map_err(|e| e.to_string())?;

    // A = 1{U1 + e > 0}: Cov(A, U1) = 1/(2√π), Var(A) = 1/4. L = U1 + U2 + e_L,
    // Y0 = U2 + e_Y, so Cov(A, Y0) = 0 and only L links them.
    let cov_au1 = 1.0 / (2.0 * std::f64::consts::PI.sqrt());
    let r_al = cov_au1 / (0.25f64.sqrt() * 3f64.sqrt());
    let r_yl = 1.0 / (2f64.sqrt() * 3f64.sqrt());
    let closed = (-r_al * r_yl) / ((1.0 - r_al * r_al) * (1.0 - r_yl * r_yl)).sqrt();

    ensure(cf.consistency_violations() == 0, || "observed outcome differs from its counterfactual".into())?;
    ensure(marginal.abs() <= CF_TOL, || format!("|corr(A, Y0)| = {:.4}", marginal.abs()))?;
    ensure(conditional.abs() > closed.abs() - CF_TOL, || {
        format!("|pcorr(A, Y0 | L)| = {:.4} vs closed form {:.4}", conditional.abs(), closed.abs())
    })?;
    Ok(format!(
        "corr(A,Y0)={marginal:.4}, pcorr(A,Y0|L)={conditional:.4} (closed form {closed:.4})"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("M-bias worked example (ga)", ga_suite),
        ("two-path confounding example (gb)", gb_suite),
        ("causal closure on gc", gc_closure),
        ("d-separation dual implementation", dsep_dual),
        ("graphoid, composition, strengthened weak transitivity", graphoid_properties),
        ("sound combinations and minimal reductions", selection_guarantees_run),
        ("disjunctive cause soundness", disjunctive),
        ("exact Gaussian faithfulness", faithfulness),
        ("data-driven recovery on gb", recovery),
        ("effect estimation", estimation),
        ("counterfactual ignorability", counterfactual),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    let total = start.elapsed();
    if total > TOTAL_BUDGET {
        failed += 1;
        println!("FAIL    total runtime {total:.1?} exceeds {TOTAL_BUDGET:?}");
    } else {
        println!("PASS    total runtime {total:.1?} within {TOTAL_BUDGET:?}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
