//! Grid search over solver hyper-parameters, scored by PSNR against a
//! reference image.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::psnr;
use crate::solvers::{Solver, SolverConfig};
use crate::volume::{DynamicImage, KSpaceData};

/// A base configuration plus a list of axes; the grid is their cartesian
/// product, enumerated with the last axis varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchSpace {
    pub base: SolverConfig,
    pub axes: Vec<(String, Vec<String>)>,
}

impl SearchSpace {
    pub fn new(base: SolverConfig) -> Self {
        SearchSpace { base, axes: Vec::new() }
    }

    /// Adds an axis. Every value is checked against the base config.
    pub fn axis<V: ToString>(mut self, key: &str, values: impl IntoIterator<Item = V>) -> Result<Self> {
        let values: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
        let mut probe = self.base.clone();
        for v in &values {
            probe.set(key, v)?;
        }
        self.axes.push((key.to_string(), values));
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points in enumeration order.
    pub fn configs(&self) -> Result<Vec<SolverConfig>> {
        let mut out = vec![self.base.clone()];
        for (key, values) in &self.axes {
            let mut next = Vec::with_capacity(out.len() * values.len());
            for cfg in &out {
                for v in values {
                    let mut c = cfg.clone();
                    c.set(key, v)?;
                    next.push(c);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// Parses `key=v1,v2,...;key=...` into axes on top of `base`.
pub fn parse_grid(spec: &str, base: SolverConfig) -> Result<SearchSpace> {
    let mut space = SearchSpace::new(base);
    for token in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, values) = token
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("grid token `{token}` is not key=v1,v2,...")))?;
        let values: Vec<&str> = values.split(',').map(str::trim).collect();
        if values.iter().any(|v| v.is_empty()) {
            return Err(Error::InvalidConfig(format!("grid token `{token}` has an empty value")));
        }
        space = space
            .axis(key.trim(), values)
            .map_err(|e| Error::InvalidConfig(format!("grid token `{token}`: {e}")))?;
    }
    Ok(space)
}

/// Score of one grid point. Failed runs score `-inf`.
#[derive(Clone, Debug)]
pub struct TuneEvaluation {
    pub config: SolverConfig,
    pub psnr: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct TuneOutcome {
    pub best: SolverConfig,
    pub best_psnr: f64,
    pub evaluations: Vec<TuneEvaluation>,
}

/// Runs `solver` at every grid point and returns the configuration with the
/// highest PSNR. Ties go to the earliest grid point, so the selection does
/// not depend on evaluation order.
pub fn tune_hyperparams(
    y: &KSpaceData,
    reference: &DynamicImage,
    space: &SearchSpace,
    solver: Solver,
) -> Result<TuneOutcome> {
    reference.expect_shape(y.shape())?;
    let configs = space.configs()?;
    if configs.is_empty() {
        return Err(Error::InvalidConfig("empty search space".into()));
    }
    let evaluations: Vec<TuneEvaluation> = configs
        .into_par_iter()
        .map(|config| match solver.run(y, &config).and_then(|r| psnr(reference, &r.image)) {
            Ok(p) if !p.is_nan() => TuneEvaluation { config, psnr: p, error: None },
            Ok(_) => TuneEvaluation { config, psnr: f64::NEG_INFINITY, error: Some("NaN PSNR".into()) },
            Err(e) => TuneEvaluation { config, psnr: f64::NEG_INFINITY, error: Some(e.to_string()) },
        })
        .collect();

    let mut best = 0;
    for (i, e) in evaluations.iter().enumerate() {
        if e.psnr > evaluations[best].psnr {
            best = i;
        }
    }
    Ok(TuneOutcome {
        best: evaluations[best].config.clone(),
        best_psnr: evaluations[best].psnr,
        evaluations,
    })
}
