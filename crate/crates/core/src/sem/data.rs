//! Datasets, sampling, and counterfactual sampling.
//!
//! Sampling uses `ChaCha8Rng::seed_from_u64(seed)` and standard normal draws
//! from `rand_distr::StandardNormal`. Rows are generated one at a time; within
//! a row one noise value is drawn per vertex in topological order (smallest
//! name first among ready vertices), so a dataset is a pure function of the
//! model, `n` and `seed`.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{LinearSem, TreatmentMechanism};
use crate::error::{Error, Result};
use crate::set::VertexId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub sem: String,
}

/// Named real-valued columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    data: Vec<Vec<f64>>,
    provenance: Option<Provenance>,
}

impl Dataset {
    pub fn new(columns: Vec<String>, data: Vec<Vec<f64>>) -> Result<Self> {
        if columns.len() != data.len() {
            return Err(Error::InvalidArgument("column names and data disagree in length".into()));
        }
        let rows = data.first().map_or(0, Vec::len);
        if data.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidArgument("columns have different lengths".into()));
        }
        for (i, name) in columns.iter().enumerate() {
            if columns[..i].contains(name) {
                return Err(Error::InvalidArgument(format!("duplicate column `{name}`")));
            }
        }
        if let Some((name, _)) = columns
            .iter()
            .zip(&data)
            .find(|(_, c)| c.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::InvalidArgument(format!("column `{name}` has non-finite values")));
        }
        Ok(Self {
            columns,
            data,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_rows(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        Ok(&self.data[self.column_index(name)?])
    }

    pub fn column_at(&self, index: usize) -> &[f64] {
        &self.data[index]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.data.iter().map(|c| c[i]).collect()
    }

    /// Sample covariance (denominator `n − 1`) over the given column indices.
    pub fn covariance(&self, cols: &[usize]) -> DMatrix<f64> {
        let n = self.n_rows();
        let centered: Vec<Vec<f64>> = cols
            .iter()
            .map(|&c| {
                let col = &self.data[c];
                let mean = col.iter().sum::<f64>() / n as f64;
                col.iter().map(|x| x - mean).collect()
            })
            .collect();
        let k = cols.len();
        let mut s = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = centered[i]
                    .iter()
                    .zip(&centered[j])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / (n as f64 - 1.0);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        s
    }

    /// Reads a comma-separated file with a header row of column names.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let columns: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let mut data = vec![Vec::new(); columns.len()];
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            for (j, field) in record.iter().enumerate() {
                let x: f64 = field.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "row {}: column `{}` has non-numeric value `{field}`",
                        i + 2,
                        columns[j]
                    ))
                })?;
                data[j].push(x);
            }
        }
        Self::new(columns, data)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.to_writer(std::fs::File::create(path)?)
    }

    pub fn to_writer(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        let mut record = Vec::with_capacity(self.columns.len());
        for i in 0..self.n_rows() {
            record.clear();
            record.extend(self.data.iter().map(|c| c[i].to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Paired potential outcomes sharing one noise draw per row.
#[derive(Debug, Clone)]
pub struct CounterfactualSample {
    pub treatment: Vec<f64>,
    /// Observed outcome.
    pub outcome: Vec<f64>,
    /// Outcome with the treatment forced to 0.
    pub outcome_0: Vec<f64>,
    /// Outcome with the treatment forced to 1.
    pub outcome_1: Vec<f64>,
    /// Observed covariate names, canonical order.
    pub covariates: Vec<String>,
    /// Factual covariate values, aligned with `covariates`.
    pub covariate_values: Vec<Vec<f64>>,
}

impl CounterfactualSample {
    pub fn len(&self) -> usize {
        self.treatment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.treatment.is_empty()
    }

    pub fn covariate(&self, name: &str) -> Result<&[f64]> {
        let i = self
            .covariates
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        Ok(&self.covariate_values[i])
    }

    /// Rows where the observed outcome differs from the potential outcome
    /// under the observed treatment.
    pub fn consistency_violations(&self) -> usize {
        (0..self.len())
            .filter(|&i| {
                let expected = if self.treatment[i] == 1.0 {
                    self.outcome_1[i]
                } else {
                    self.outcome_0[i]
                };
                self.outcome[i] != expected
            })
            .count()
    }
}

impl LinearSem {
    fn draw_noise(&self, rng: &mut ChaCha8Rng, noise: &mut [f64]) {
        for &v in self.dag.topological_order() {
            let z: f64 = rng.sample(StandardNormal);
            noise[v.0] = self.noise_var[v.0].sqrt() * z;
        }
    }

    /// Evaluates every structural equation for one noise draw, optionally
    /// forcing the treatment to a fixed value.
    fn evaluate(&self, noise: &[f64], forced_treatment: Option<f64>, out: &mut [f64]) {
        let treatment = self.dag.treatment();
        for &v in self.dag.topological_order() {
            let index: f64 = self.weights(v).iter().map(|&(p, c)| c * out[p.0]).sum::<f64>();
            out[v.0] = if v == treatment {
                match (forced_treatment, self.mechanism) {
                    (Some(a), _) => a,
                    (None, TreatmentMechanism::Linear) => index + noise[v.0],
                    (None, TreatmentMechanism::Threshold) => f64::from(u8::from(index + noise[v.0] > 0.0)),
                }
            } else {
                index + noise[v.0]
            };
        }
    }

    /// `n` i.i.d. rows over the observed vertices, in canonical column order.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        self.sample_columns(n, seed, false)
    }

    /// Like [`LinearSem::sample`] but also emits latent columns.
    pub fn sample_with_latent(&self, n: usize, seed: u64) -> Result<Dataset> {
        self.sample_columns(n, seed, true)
    }

    fn sample_columns(&self, n: usize, seed: u64, include_latent: bool) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be at least 1".into()));
        }
        let keep: Vec<VertexId> = self
            .dag
            .vertices()
            .filter(|&v| include_latent || !self.dag.is_latent(v))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut noise = vec![0.0; self.dag.len()];
        let mut values = vec![0.0; self.dag.len()];
        let mut data = vec![Vec::with_capacity(n); keep.len()];
        for _ in 0..n {
            self.draw_noise(&mut rng, &mut noise);
            self.evaluate(&noise, None, &mut values);
            for (col, &v) in data.iter_mut().zip(&keep) {
                col.push(values[v.0]);
            }
        }
        let columns = keep.iter().map(|&v| self.dag.name(v).to_string()).collect();
        Ok(Dataset::new(columns, data)?.with_provenance(Provenance {
            seed,
            sem: self.name.clone(),
        }))
    }

    /// Factual data plus both potential outcomes per row. Requires a
    /// binarized treatment.
    pub fn sample_counterfactual(&self, n: usize, seed: u64) -> Result<CounterfactualSample> {
        if self.mechanism != TreatmentMechanism::Threshold {
            return Err(Error::NotBinaryTreatment(
                self.dag.name(self.dag.treatment()).to_string(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be at least 1".into()));
        }
        let (a, y) = (self.dag.treatment(), self.dag.outcome());
        let covs = self.dag.observed_covariates().to_vec();
        let mut out = CounterfactualSample {
            treatment: Vec::with_capacity(n),
            outcome: Vec::with_capacity(n),
            outcome_0: Vec::with_capacity(n),
            outcome_1: Vec::with_capacity(n),
            covariates: covs.iter().map(|&v| self.dag.name(v).to_string()).collect(),
            covariate_values: vec![Vec::with_capacity(n); covs.len()],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.dag.len();
        let (mut noise, mut factual, mut world) = (vec![0.0; k], vec![0.0; k], vec![0.0; k]);
        for _ in 0..n {
            self.draw_noise(&mut rng, &mut noise);
            self.evaluate(&noise, None, &mut factual);
            out.treatment.push(factual[a.0]);
            out.outcome.push(factual[y.0]);
            for (col, &v) in out.covariate_values.iter_mut().zip(&covs) {
                col.push(factual[v.0]);
            }
            self.evaluate(&noise, Some(0.0), &mut world);
            out.outcome_0.push(world[y.0]);
            self.evaluate(&noise, Some(1.0), &mut world);
            out.outcome_1.push(world[y.0]);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Dag;

    fn chain() -> LinearSem {
        let dag = Dag::builder()
            .covariate("X")
            .treatment("A")
            .outcome("Y")
            .edges([("X", "A"), ("A", "Y")])
            .build()
            .unwrap();
        let (x, a, y) = (dag.id("X").unwrap(), dag.id("A").unwrap(), dag.id("Y").unwrap());
        LinearSem::new(dag, [(x, a, 1.0), (a, y, 1.0)], vec![1.0; 3]).unwrap()
    }

    #[test]
    fn sample_covariance_approaches_exact() {
        let m = chain();
        let d = m.sample(100_000, 7).unwrap();
        assert_eq!(d.columns(), ["A", "X", "Y"]);
        let sample = d.covariance(&[0, 1, 2]);
        let exact = m.exact_covariance();
        for i in 0..3 {
            for j in 0..3 {
                assert!((sample[(i, j)] - exact[(i, j)]).abs() < 0.05, "({i},{j})");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = fixtures::gb_sem();
        assert_eq!(m.sample(1, 42).unwrap(), m.sample(1, 42).unwrap());
        assert_ne!(m.sample(1, 42).unwrap(), m.sample(1, 43).unwrap());
        assert!(m.sample(0, 1).is_err());
    }

    #[test]
    fn edgeless_columns_are_uncorrelated() {
        let dag = Dag::builder().treatment("A").outcome("Y").covariate("W").build().unwrap();
        let m = LinearSem::new(dag, [], vec![1.0; 3]).unwrap();
        let d = m.sample(100_000, 3).unwrap();
        let s = d.covariance(&[0, 1, 2]);
        for i in 0..3 {
            for j in 0..i {
                let r = s[(i, j)] / (s[(i, i)] * s[(j, j)]).sqrt();
                assert!(r.abs() < 0.02);
            }
        }
    }

    #[test]
    fn latent_columns_are_hidden_by_default() {
        let m = fixtures::ga_sem();
        assert_eq!(m.sample(5, 1).unwrap().columns(), ["A", "L", "Y"]);
        assert_eq!(m.sample_with_latent(5, 1).unwrap().columns(), ["A", "L", "U1", "U2", "Y"]);
        // same draws either way
        let (a, b) = (m.sample(5, 1).unwrap(), m.sample_with_latent(5, 1).unwrap());
        assert_eq!(a.column("L").unwrap(), b.column("L").unwrap());
    }

    #[test]
    fn counterfactuals_need_binary_treatment() {
        let m = fixtures::ga_sem();
        assert!(matches!(m.sample_counterfactual(10, 1), Err(Error::NotBinaryTreatment(_))));
        let cf = m.with_binary_treatment().sample_counterfactual(1000, 1).unwrap();
        assert_eq!(cf.len(), 1000);
        assert_eq!(cf.consistency_violations(), 0);
        assert!(cf.treatment.iter().all(|&a| a == 0.0 || a == 1.0));
        // the unit effect of A on Y shows up row by row
        assert!(cf.outcome_1.iter().zip(&cf.outcome_0).all(|(y1, y0)| (y1 - y0 - 1.0).abs() < 1e-12));
        assert_eq!(cf.covariates, ["L"]);
    }

    #[test]
    fn csv_round_trip() {
        let d = fixtures::gb_sem().sample(20, 5).unwrap();
        let mut buf = Vec::new();
        d.to_writer(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("A,X1,X2,Y\n"));
        let back = Dataset::from_reader(buf.as_slice()).unwrap();
        assert_eq!(back.columns(), d.columns());
        for c in d.columns() {
            assert_eq!(back.column(c).unwrap(), d.column(c).unwrap());
        }
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(Dataset::from_reader("A,Y\n1,x\n".as_bytes()).is_err());
        assert!(Dataset::from_reader("A,A\n1,2\n".as_bytes()).is_err());
        assert!(Dataset::from_reader("A,Y\n1\n".as_bytes()).is_err());
        assert!(matches!(
            Dataset::from_reader("A,Y\n1,2\n".as_bytes()).unwrap().column("Q"),
            Err(Error::MissingColumn(_))
        ));
    }
}
