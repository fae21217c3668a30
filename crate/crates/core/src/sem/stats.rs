//! Fisher-z conditional-independence testing and regression-based effect
//! estimation on [`Dataset`]s.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{partial_correlation, Dataset};
use crate::blanket::CiOracle;
use crate::error::{Error, Result};
use crate::set::{VertexId, VertexSet};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherZResult {
    /// Sample partial correlation.
    pub r: f64,
    /// `|atanh(r)|·√(n − |given| − 3)`.
    pub statistic: f64,
    /// `Φ⁻¹(1 − alpha/2)`.
    pub critical: f64,
    pub independent: bool,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn critical_value(alpha: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - alpha / 2.0)
}

/// Fisher-z test of `x ⊥ y | given` from a sample covariance over `n` rows.
/// Indices refer to rows/columns of `sigma`.
pub fn fisher_z(
    sigma: &DMatrix<f64>,
    n: usize,
    x: usize,
    y: usize,
    given: &[usize],
    alpha: f64,
) -> Result<FisherZResult> {
    check_alpha(alpha)?;
    let needed = given.len() + 3;
    if n <= needed {
        return Err(Error::InsufficientSamples { n, needed });
    }
    let r = partial_correlation(sigma, x, y, given)?;
    let statistic = r.atanh().abs() * ((n - needed) as f64).sqrt();
    let critical = critical_value(alpha);
    Ok(FisherZResult {
        r,
        statistic,
        critical,
        independent: statistic <= critical,
    })
}

fn column_indices(d: &Dataset, names: &[&str]) -> Result<Vec<usize>> {
    names.iter().map(|n| d.column_index(n)).collect()
}

fn check_variation(d: &Dataset, sigma: &DMatrix<f64>, cols: &[usize]) -> Result<()> {
    match (0..cols.len()).find(|&i| sigma[(i, i)].is_nan() || sigma[(i, i)] <= 0.0) {
        Some(i) => Err(Error::ConstantColumn(d.columns()[cols[i]].clone())),
        None => Ok(()),
    }
}

/// Fisher-z test on named dataset columns.
pub fn fisher_z_test(d: &Dataset, x: &str, y: &str, given: &[&str], alpha: f64) -> Result<FisherZResult> {
    let mut cols = column_indices(d, &[x, y])?;
    cols.extend(column_indices(d, given)?);
    let sigma = d.covariance(&cols);
    check_variation(d, &sigma, &cols)?;
    let local: Vec<usize> = (2..cols.len()).collect();
    fisher_z(&sigma, d.n_rows(), 0, 1, &local, alpha)
}

/// [`CiOracle`] over a dataset whose vertex ids are column indices.
///
/// Set-valued queries run one test per pair in `x × y` at a Bonferroni-corrected
/// level `alpha / pairs` and report independence only if every pair passes.
#[derive(Debug, Clone)]
pub struct FisherZOracle {
    sigma: DMatrix<f64>,
    n: usize,
    alpha: f64,
}

impl FisherZOracle {
    pub fn new(d: &Dataset, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let cols: Vec<usize> = (0..d.columns().len()).collect();
        let sigma = d.covariance(&cols);
        check_variation(d, &sigma, &cols)?;
        Ok(Self {
            sigma,
            n: d.n_rows(),
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl CiOracle for FisherZOracle {
    fn independent(&self, x: &VertexSet, y: &VertexSet, given: &VertexSet) -> Result<bool> {
        let pairs = x.len() * y.len();
        if pairs == 0 {
            return Ok(true);
        }
        let alpha = self.alpha / pairs as f64;
        let given: Vec<usize> = given.iter().map(VertexId::index).collect();
        for a in x {
            for b in y {
                if !fisher_z(&self.sigma, self.n, a.0, b.0, &given, alpha)?.independent {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Coefficient of `treatment` in the least-squares fit of `outcome` on
/// `treatment` and `adjust` with an intercept.
pub fn ate_standardization(d: &Dataset, treatment: &str, outcome: &str, adjust: &[&str]) -> Result<f64> {
    let y = d.column(outcome)?;
    let mut cols = vec![d.column_index(treatment)?];
    cols.extend(column_indices(d, adjust)?);
    let n = d.n_rows();
    let k = cols.len();
    if n <= k + 1 {
        return Err(Error::InsufficientSamples { n, needed: k + 1 });
    }
    fn center(c: &[f64]) -> impl Iterator<Item = f64> + '_ {
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        c.iter().map(move |v| v - mean)
    }
    let x = DMatrix::from_iterator(n, k, cols.iter().flat_map(|&c| center(d.column_at(c))));
    let y = DVector::from_iterator(n, center(y));
    let xtx = x.tr_mul(&x);
    let scale = xtx.diagonal().max();
    // Cholesky succeeds on nearly singular matrices, so also bound the pivots.
    let chol = xtx.clone().cholesky().ok_or(Error::Collinear)?;
    let min_pivot = chol.l_dirty().diagonal().iter().fold(f64::INFINITY, |m, v| m.min(v * v));
    if scale.is_nan() || scale <= 0.0 || min_pivot <= scale * 1e-12 {
        return Err(Error::Collinear);
    }
    let beta = chol.solve(&x.tr_mul(&y));
    Ok(beta[0])
}
