use proptest::prelude::*;

use confsel_core::adjustment::{enumerate_minimal_sufficient_sets, exists_sufficient_subset, DEFAULT_SUBSET_CAP};
use confsel_core::blanket::{BoundaryKind, Blankets, CombineRule, DSepOracle, ReductionStart};
use confsel_core::dsep::{d_separated, ignorability_oracle, inducing_path_exists};
use confsel_core::format::{parse, to_cg};
use confsel_core::testkit::{
    closure_bruteforce, dsep_bruteforce, inducing_path_bruteforce, is_closed_bruteforce,
    minimal_sufficient_bruteforce, property_suites, random_dag, sufficient_bruteforce, RandomDagSpec, SuiteConfig,
};
use confsel_core::{Dag, VertexSet};

fn arb_dag(max: usize, latent: bool) -> impl Strategy<Value = Dag> {
    (2..=max, 0.1f64..0.7, any::<u64>(), any::<bool>()).prop_map(move |(n, p, seed, pre)| {
        random_dag(&RandomDagSpec {
            vertices: n,
            edge_probability: p,
            latent_fraction: if latent { 0.3 } else { 0.0 },
            seed,
            pretreatment_only: pre,
            treatment_causes_outcome: true,
        })
        .unwrap()
    })
}

/// A graph plus three disjoint masks drawn by assigning each vertex to
/// nothing, X, Y or Z.
fn arb_query() -> impl Strategy<Value = (Dag, VertexSet, VertexSet, VertexSet)> {
    arb_dag(9, false).prop_flat_map(|g| {
        let n = g.len();
        (Just(g), proptest::collection::vec(0u8..4, n)).prop_map(|(g, labels)| {
            let pick = |k: u8| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l == k)
                    .map(|(i, _)| confsel_core::VertexId(i))
                    .collect::<VertexSet>()
            };
            let (x, y, z) = (pick(1), pick(2), pick(3));
            (g, x, y, z)
        })
    })
}

fn mask_subset(g: &Dag, mask: u64) -> VertexSet {
    VertexSet::from_mask(mask & ((1u64 << g.len()) - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reachability_matches_path_enumeration((g, x, y, z) in arb_query()) {
        prop_assume!(!x.is_empty() && !y.is_empty());
        prop_assert_eq!(d_separated(&g, &x, &y, &z).unwrap(), dsep_bruteforce(&g, &x, &y, &z).unwrap());
    }

    #[test]
    fn separation_is_symmetric((g, x, y, z) in arb_query()) {
        prop_assume!(!x.is_empty() && !y.is_empty());
        prop_assert_eq!(d_separated(&g, &x, &y, &z).unwrap(), d_separated(&g, &y, &x, &z).unwrap());
    }

    #[test]
    fn cg_round_trip(g in arb_dag(12, true)) {
        let text = to_cg(&g);
        let back = parse(&text).unwrap().dag;
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(to_cg(&back), text);
    }

    #[test]
    fn closure_is_smallest_closed_superset(g in arb_dag(9, false), mask in any::<u64>()) {
        let h = mask_subset(&g, mask);
        let c = g.causal_closure(&h);
        prop_assert!(h.is_subset(&c));
        prop_assert!(g.is_causally_closed(&c));
        prop_assert!(is_closed_bruteforce(&g, &c));
        prop_assert_eq!(&c, &closure_bruteforce(&g, &h).unwrap());
        prop_assert_eq!(g.causal_closure(&c), c);
    }

    #[test]
    fn inducing_paths_certify_inseparability(g in arb_dag(7, false), mask in any::<u64>(), a in 0usize..7, b in 0usize..7) {
        let n = g.len();
        let (u, v) = (confsel_core::VertexId(a % n), confsel_core::VertexId(b % n));
        prop_assume!(u != v);
        let mut l = mask_subset(&g, mask);
        l.remove(u);
        l.remove(v);
        prop_assert_eq!(inducing_path_exists(&g, u, v, &l).unwrap(), inducing_path_bruteforce(&g, u, v, &l).unwrap());
    }

    #[test]
    fn ignorability_matches_bruteforce(g in arb_dag(9, false), mask in any::<u64>()) {
        let c = mask_subset(&g, mask).intersection(&g.pretreatment_covariates());
        prop_assert_eq!(ignorability_oracle(&g, &c).unwrap(), sufficient_bruteforce(&g, &c).unwrap());
    }

    #[test]
    fn minimal_sets_match_bruteforce(g in arb_dag(9, true)) {
        let s = g.pretreatment_covariates().difference(g.latent());
        let fast = enumerate_minimal_sufficient_sets(&g, &s, DEFAULT_SUBSET_CAP).unwrap();
        prop_assert_eq!(&fast, &minimal_sufficient_bruteforce(&g, &s).unwrap());
        prop_assert_eq!(exists_sufficient_subset(&g, &s).unwrap(), !fast.is_empty());
        for m in &fast {
            prop_assert!(ignorability_oracle(&g, m).unwrap());
        }
    }

    #[test]
    fn boundaries_are_idempotent_blankets(g in arb_dag(9, true)) {
        let s = g.pretreatment_covariates().difference(g.latent());
        let oracle = DSepOracle::new(&g);
        let b = Blankets::new(&oracle, g.treatment(), g.outcome());
        for kind in [BoundaryKind::Treatment, BoundaryKind::Outcome] {
            let r = b.boundary(kind, &s).unwrap();
            prop_assert!(r.is_subset(&s));
            prop_assert!(b.is_blanket(kind, &s, &r).unwrap());
            prop_assert_eq!(b.boundary(kind, &r).unwrap(), r);
        }
    }

    #[test]
    fn pretreatment_candidates_give_sound_selections(g in arb_dag(10, false)) {
        prop_assume!(g.pretreatment_covariates() == g.covariates());
        let s = g.covariates();
        let oracle = DSepOracle::new(&g);
        let b = Blankets::new(&oracle, g.treatment(), g.outcome());
        for rule in [CombineRule::Disjunctive, CombineRule::TreatmentThenOutcome, CombineRule::OutcomeThenTreatment] {
            prop_assert!(ignorability_oracle(&g, &b.combine(rule, &s).unwrap()).unwrap());
        }
        let minimal = enumerate_minimal_sufficient_sets(&g, &s, DEFAULT_SUBSET_CAP).unwrap();
        for start in [ReductionStart::TreatmentFirst, ReductionStart::OutcomeFirst] {
            let c = b.reduce_alternating(start, &s).unwrap();
            prop_assert!(minimal.contains(&c));
            prop_assert!(b.verify_stability(&c).unwrap());
        }
    }
}

#[test]
fn default_property_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let config = SuiteConfig {
        counterexample_dir: Some(dir.path().to_path_buf()),
        ..SuiteConfig::default()
    };
    for r in property_suites(&config) {
        assert!(r.passed(), "{}", r.to_json());
        assert!(r.counterexample_files.is_empty());
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
