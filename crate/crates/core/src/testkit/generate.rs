//! Graph generators: seeded random DAGs, exhaustive enumeration, and
//! generic Gaussian parameterizations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsep::d_separated;
use crate::error::{Error, Result};
use crate::graph::{Dag, Role};
use crate::sem::{partial_correlation, LinearSem};
use crate::set::{subsets, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomDagSpec {
    /// Total vertex count including treatment and outcome; at least 2.
    pub vertices: usize,
    /// Probability of each edge consistent with the hidden ordering.
    pub edge_probability: f64,
    /// Fraction of covariates marked latent, rounded to the nearest count.
    pub latent_fraction: f64,
    pub seed: u64,
    /// Place every covariate before the treatment, so all are pre-treatment.
    pub pretreatment_only: bool,
    /// Always include the edge `A -> Y`.
    pub treatment_causes_outcome: bool,
}

impl Default for RandomDagSpec {
    fn default() -> Self {
        Self {
            vertices: 6,
            edge_probability: 0.3,
            latent_fraction: 0.0,
            seed: 0,
            pretreatment_only: false,
            treatment_causes_outcome: true,
        }
    }
}

/// A random DAG with treatment `A`, outcome `Y` and covariates `X1..Xk`.
///
/// Vertices are placed in a random order (the treatment always before the
/// outcome) and each forward pair becomes an edge with the given probability.
/// Covariate names are shuffled against that order so that name order says
/// nothing about causal order.
pub fn random_dag(spec: &RandomDagSpec) -> Result<Dag> {
    if spec.vertices < 2 {
        return Err(Error::InvalidArgument("a random DAG needs at least 2 vertices".into()));
    }
    if !(0.0..=1.0).contains(&spec.edge_probability) || !(0.0..=1.0).contains(&spec.latent_fraction) {
        return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.vertices - 2;
    let mut covariates: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
    covariates.shuffle(&mut rng);

    let (a_pos, y_pos) = if spec.pretreatment_only {
        (k, k + 1)
    } else {
        let a = rng.random_range(0..spec.vertices - 1);
        (a, rng.random_range(a + 1..spec.vertices))
    };
    let mut order = Vec::with_capacity(spec.vertices);
    let mut cov = covariates.iter();
    for pos in 0..spec.vertices {
        order.push(if pos == a_pos {
            "A".to_string()
        } else if pos == y_pos {
            "Y".to_string()
        } else {
            cov.next().expect("k covariates fill the other slots").clone()
        });
    }

    let latent_count = (spec.latent_fraction * k as f64).round() as usize;
    let mut shuffled = covariates.clone();
    shuffled.shuffle(&mut rng);
    let latent: Vec<&String> = shuffled.iter().take(latent_count).collect();

    let mut b = Dag::builder().treatment("A").outcome("Y");
    for c in &covariates {
        b = b.node(c.clone(), Role::Covariate, latent.contains(&c));
    }
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let forced = spec.treatment_causes_outcome && i == a_pos && j == y_pos;
            if forced || rng.random_bool(spec.edge_probability) {
                b = b.edge(order[i].clone(), order[j].clone());
            }
        }
    }
    b.build()
}

fn vertex_name(i: usize) -> String {
    format!("V{i}")
}

/// Builds a DAG on `V0..V{n-1}` from `(src, dst)` index pairs, making the
/// first vertex of a smallest-index-first topological order the treatment
/// and the last one the outcome. Returns `None` on a cycle.
fn dag_from_edges(n: usize, edges: &[(usize, usize)]) -> Option<Dag> {
    let mut indegree = vec![0usize; n];
    for &(_, d) in edges {
        indegree[d] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    while let Some(pos) = (0..ready.len()).min_by_key(|&i| ready[i]) {
        let v = ready.swap_remove(pos);
        order.push(v);
        for &(s, d) in edges {
            if s == v {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    ready.push(d);
                }
            }
        }
    }
    if order.len() != n {
        return None;
    }
    let (first, last) = (order[0], order[n - 1]);
    let mut b = Dag::builder();
    for v in 0..n {
        let role = if v == first {
            Role::Treatment
        } else if v == last {
            Role::Outcome
        } else {
            Role::Covariate
        };
        b = b.node(vertex_name(v), role, false);
    }
    let b = b.edges(edges.iter().map(|&(s, d)| (vertex_name(s), vertex_name(d))));
    Some(b.build().expect("acyclic edge list with valid roles"))
}

/// Every labeled DAG on `n` vertices (`n` in `2..=5`): each unordered pair
/// is absent, forward, or backward, and cyclic combinations are dropped.
/// There are 3, 25, 543 and 29281 of them for `n = 2..=5`.
pub fn all_labeled_dags(n: usize) -> Result<Vec<Dag>> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "labeled DAG enumeration supports 2 to 5 vertices, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    let mut edges = Vec::with_capacity(pairs.len());
    for mut code in 0..total {
        edges.clear();
        for &(i, j) in &pairs {
            match code % 3 {
                1 => edges.push((i, j)),
                2 => edges.push((j, i)),
                _ => {}
            }
            code /= 3;
        }
        if let Some(g) = dag_from_edges(n, &edges) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Every DAG on `n` vertices whose edges all point from a lower to a higher
/// index: `2^(n(n-1)/2)` graphs covering every unlabeled DAG at least once.
pub fn upper_triangular_dags(n: usize) -> Result<Vec<Dag>> {
    if !(2..=7).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "upper-triangular enumeration supports 2 to 7 vertices, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Ok((0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            dag_from_edges(n, &edges).expect("forward edges are acyclic")
        })
        .collect())
}

/// Linear SEM with coefficients drawn from `±[0.5, 1.5]` and noise variances
/// from `[0.5, 1.5]`.
pub fn random_sem(dag: &Dag, seed: u64) -> LinearSem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefs: Vec<(VertexId, VertexId, f64)> = dag
        .edges()
        .map(|(s, d)| {
            let magnitude = rng.random_range(0.5..1.5);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            (s, d, sign * magnitude)
        })
        .collect();
    let noise = dag.vertices().map(|_| rng.random_range(0.5..1.5)).collect();
    LinearSem::new(dag.clone(), coefs, noise).expect("generated parameters are valid")
}

/// Smallest absolute partial correlation over all d-connected single-vertex
/// queries `(x, y | given)` of `m`'s graph. `None` if every pair is separated
/// by every conditioning set.
pub fn min_dependent_partial_correlation(m: &LinearSem) -> Option<f64> {
    let g = m.dag();
    let sigma = m.exact_covariance();
    let mut min: Option<f64> = None;
    for x in g.vertices() {
        for y in g.vertices().filter(|&y| y > x) {
            let mut rest = g.all();
            rest.remove(x);
            rest.remove(y);
            for given in subsets(&rest) {
                let separated = d_separated(g, &VertexSet::singleton(x), &VertexSet::singleton(y), &given)
                    .expect("disjoint by construction");
                if separated {
                    continue;
                }
                let idx: Vec<usize> = given.iter().map(VertexId::index).collect();
                let r = partial_correlation(&sigma, x.0, y.0, &idx)
                    .expect("covariance of a valid SEM is positive definite")
                    .abs();
                min = Some(min.map_or(r, |m: f64| m.min(r)));
            }
        }
    }
    min
}

/// Draws SEMs from [`random_sem`] with successive seeds until every
/// d-connected query has `|ρ| ≥ threshold`.
pub fn generic_sem(dag: &Dag, seed: u64, threshold: f64, max_tries: usize) -> Result<LinearSem> {
    for attempt in 0..max_tries as u64 {
        let m = random_sem(dag, seed.wrapping_mul(1_000_003).wrapping_add(attempt));
        if min_dependent_partial_correlation(&m).map_or(true, |r| r >= threshold) {
            return Ok(m);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no SEM with all dependent partial correlations above {threshold} in {max_tries} tries"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertices_full_probability() {
        let g = random_dag(&RandomDagSpec {
            vertices: 2,
            edge_probability: 1.0,
            seed: 9,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(crate::format::to_cg(&g), crate::format::to_cg(
            &Dag::builder().treatment("A").outcome("Y").edge("A", "Y").build().unwrap()
        ));
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = RandomDagSpec { vertices: 8, seed: 17, latent_fraction: 0.4, ..Default::default() };
        assert_eq!(random_dag(&spec).unwrap(), random_dag(&spec).unwrap());
    }

    #[test]
    fn generated_graphs_are_valid() {
        for seed in 1..=200 {
            let g = random_dag(&RandomDagSpec { vertices: 8, edge_probability: 0.3, seed, ..Default::default() })
                .unwrap();
            assert_eq!(g.len(), 8);
            assert!(g.has_edge(g.treatment(), g.outcome()));
            let pre = random_dag(&RandomDagSpec { vertices: 8, seed, pretreatment_only: true, ..Default::default() })
                .unwrap();
            assert_eq!(pre.pretreatment_covariates(), pre.covariates());
        }
        assert!(random_dag(&RandomDagSpec { vertices: 1, ..Default::default() }).is_err());
    }

    #[test]
    fn latent_fraction_is_respected() {
        let g = random_dag(&RandomDagSpec { vertices: 12, latent_fraction: 0.5, seed: 3, ..Default::default() })
            .unwrap();
        assert_eq!(g.latent().len(), 5);
        assert!(!g.is_latent(g.treatment()) && !g.is_latent(g.outcome()));
    }

    #[test]
    fn labeled_dag_counts() {
        let counts: Vec<usize> = (2..=5).map(|n| all_labeled_dags(n).unwrap().len()).collect();
        assert_eq!(counts, [3, 25, 543, 29281]);
        assert!(all_labeled_dags(6).is_err());
        assert_eq!(upper_triangular_dags(4).unwrap().len(), 64);
    }

    #[test]
    fn generic_sems_keep_dependencies_visible() {
        let g = crate::fixtures::gc();
        let m = generic_sem(&g, 1, 1e-8, 20).unwrap();
        assert!(min_dependent_partial_correlation(&m).unwrap() >= 1e-8);
    }
}
