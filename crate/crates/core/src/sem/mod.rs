//! Linear-Gaussian structural equation models over a [`Dag`].
//!
//! Every vertex `v` follows `v = Σ coef(p→v)·p + ε_v` over its parents with
//! independent `ε_v ~ N(0, noise_var(v))`. Optionally the treatment is
//! binarized as `A = 1{Σ coef(p→A)·p + ε_A > 0}`, which keeps a known
//! counterfactual ground truth while every downstream equation stays linear.

mod data;
mod stats;

pub use data::{CounterfactualSample, Dataset, Provenance};
pub use stats::{ate_standardization, fisher_z, fisher_z_test, FisherZOracle, FisherZResult, DEFAULT_ALPHA};

use nalgebra::DMatrix;

use crate::blanket::CiOracle;
use crate::error::{Error, Result};
use crate::format::GraphFile;
use crate::graph::Dag;
use crate::set::{VertexId, VertexSet};

/// Default tolerance of [`GaussianOracle`].
pub const DEFAULT_EXACT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TreatmentMechanism {
    /// Linear in its parents like every other vertex.
    #[default]
    Linear,
    /// Thresholded linear index: `A = 1{index + noise > 0}`.
    Threshold,
}

#[derive(Debug, Clone)]
pub struct LinearSem {
    dag: Dag,
    /// `weights[v]` lists `(parent, coefficient)` aligned with `dag.parents(v)`.
    weights: Vec<Vec<(VertexId, f64)>>,
    noise_var: Vec<f64>,
    mechanism: TreatmentMechanism,
    name: String,
}

impl LinearSem {
    /// `coefs` must cover every edge of `dag` exactly once; `noise_var` is
    /// indexed by vertex and must be strictly positive.
    pub fn new(
        dag: Dag,
        coefs: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
        noise_var: Vec<f64>,
    ) -> Result<Self> {
        if noise_var.len() != dag.len() {
            return Err(Error::InvalidSem(format!(
                "expected {} noise variances, got {}",
                dag.len(),
                noise_var.len()
            )));
        }
        if let Some(v) = dag.vertices().find(|v| !(noise_var[v.0] > 0.0 && noise_var[v.0].is_finite())) {
            return Err(Error::InvalidSem(format!(
                "noise variance of `{}` must be positive",
                dag.name(v)
            )));
        }
        let mut slots: Vec<Vec<Option<f64>>> =
            dag.vertices().map(|v| vec![None; dag.parents(v).len()]).collect();
        for (src, dst, c) in coefs {
            let pos = dag.parents(dst).binary_search(&src).map_err(|_| {
                Error::InvalidSem(format!(
                    "coefficient for missing edge {} -> {}",
                    dag.name(src),
                    dag.name(dst)
                ))
            })?;
            if slots[dst.0][pos].replace(c).is_some() {
                return Err(Error::InvalidSem(format!(
                    "duplicate coefficient for {} -> {}",
                    dag.name(src),
                    dag.name(dst)
                )));
            }
        }
        let mut weights = Vec::with_capacity(dag.len());
        for v in dag.vertices() {
            let mut row = Vec::with_capacity(dag.parents(v).len());
            for (&p, c) in dag.parents(v).iter().zip(&slots[v.0]) {
                let c = c.ok_or_else(|| {
                    Error::InvalidSem(format!(
                        "no coefficient for edge {} -> {}",
                        dag.name(p),
                        dag.name(v)
                    ))
                })?;
                row.push((p, c));
            }
            weights.push(row);
        }
        Ok(Self {
            dag,
            weights,
            noise_var,
            mechanism: TreatmentMechanism::Linear,
            name: String::new(),
        })
    }

    /// Requires a `coef` line for every edge and a `noise` line for every vertex.
    pub fn from_graph_file(file: &GraphFile) -> Result<Self> {
        let dag = &file.dag;
        let coefs = file
            .coefs
            .iter()
            .map(|(s, d, c)| Ok((dag.id(s)?, dag.id(d)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        let mut noise = vec![None; dag.len()];
        for (name, var) in &file.noise {
            noise[dag.id(name)?.0] = Some(*var);
        }
        let noise = dag
            .vertices()
            .map(|v| {
                noise[v.0].ok_or_else(|| {
                    Error::InvalidSem(format!("no noise variance for `{}`", dag.name(v)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dag.clone(), coefs, noise)
    }

    pub fn with_binary_treatment(mut self) -> Self {
        self.mechanism = TreatmentMechanism::Threshold;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn mechanism(&self) -> TreatmentMechanism {
        self.mechanism
    }

    pub fn coef(&self, src: VertexId, dst: VertexId) -> Option<f64> {
        self.weights[dst.0]
            .iter()
            .find(|(p, _)| *p == src)
            .map(|&(_, c)| c)
    }

    pub fn noise_var(&self, v: VertexId) -> f64 {
        self.noise_var[v.0]
    }

    pub(crate) fn weights(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.weights[v.0]
    }

    /// Covariance of the linear model, `(I − B)⁻ᵀ Ω (I − B)⁻¹`, indexed by vertex.
    /// A binarized treatment is treated as linear here.
    pub fn exact_covariance(&self) -> DMatrix<f64> {
        let n = self.dag.len();
        // Row-vector convention: B[src, dst] = coefficient of src in dst's equation.
        let mut b = DMatrix::<f64>::zeros(n, n);
        for v in self.dag.vertices() {
            for &(p, c) in &self.weights[v.0] {
                b[(p.0, v.0)] = c;
            }
        }
        // I − B is unipotent after a topological permutation, so always invertible.
        let inv = (DMatrix::<f64>::identity(n, n) - b)
            .try_inverse()
            .expect("I - B is invertible for an acyclic coefficient matrix");
        let omega = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.noise_var.clone()));
        let sigma = inv.transpose() * omega * inv;
        (&sigma + sigma.transpose()) * 0.5
    }

    /// Exact conditional-independence oracle from the model covariance.
    pub fn exact_oracle(&self, tol: f64) -> GaussianOracle {
        GaussianOracle::new(self.exact_covariance(), tol)
    }
}

/// Partial correlation of `x` and `y` given `given` from a covariance matrix,
/// through the inverse of the submatrix over `{x, y} ∪ given`.
pub fn partial_correlation(sigma: &DMatrix<f64>, x: usize, y: usize, given: &[usize]) -> Result<f64> {
    if x == y || given.contains(&x) || given.contains(&y) {
        return Err(Error::InvalidArgument(
            "partial correlation needs distinct variables outside the conditioning set".into(),
        ));
    }
    let mut idx = Vec::with_capacity(given.len() + 2);
    idx.push(x);
    idx.push(y);
    idx.extend_from_slice(given);
    let sub = sigma.select_rows(&idx).select_columns(&idx);
    let precision = sub.cholesky().ok_or(Error::Singular)?.inverse();
    let denom = (precision[(0, 0)] * precision[(1, 1)]).sqrt();
    if !(denom.is_finite() && denom > 0.0) {
        return Err(Error::Singular);
    }
    Ok((-precision[(0, 1)] / denom).clamp(-1.0, 1.0))
}

/// Declares independence when every pairwise partial correlation is below a tolerance.
#[derive(Debug, Clone)]
pub struct GaussianOracle {
    sigma: DMatrix<f64>,
    tol: f64,
}

impl GaussianOracle {
    pub fn new(sigma: DMatrix<f64>, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        Self { sigma, tol }
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Largest absolute pairwise partial correlation across `x × y`.
    pub fn max_abs_partial_correlation(&self, x: &VertexSet, y: &VertexSet, given: &VertexSet) -> Result<f64> {
        let given: Vec<usize> = given.iter().map(VertexId::index).collect();
        let mut max = 0.0f64;
        for a in x {
            for b in y {
                max = max.max(partial_correlation(&self.sigma, a.0, b.0, &given)?.abs());
            }
        }
        Ok(max)
    }
}

impl CiOracle for GaussianOracle {
    fn independent(&self, x: &VertexSet, y: &VertexSet, given: &VertexSet) -> Result<bool> {
        Ok(self.max_abs_partial_correlation(x, y, given)? < self.tol)
    }
}
