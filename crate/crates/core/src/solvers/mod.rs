//! Reconstruction algorithms.
//!
//! * [`solve_ista_sparse`]: gradient step, temporal soft-thresholding, data
//!   consistency.
//! * [`solve_slr`]: the four-step sparse + low-rank iteration (reconstruction,
//!   sparse prior, low-rank prior, multiplier update).
//! * [`solve_ista_lr`]: ISTA with a plug-in hard-rank module at placement
//!   L1, L2 or L3.
//!
//! All solvers start from the zero-filled image and record one
//! [`IterationRecord`] per iteration.

mod config;
mod ista;
mod ista_lr;
mod objective;
mod slr;
mod tune;

use std::time::Instant;

use serde::Serialize;

pub use config::{LrMode, Placement, SolverConfig, SvtInput};
pub use ista::{solve_ista_sparse, solve_ista_sparse_with};
pub use ista_lr::{solve_ista_lr, solve_ista_lr_with};
pub use objective::{objective_slr, ObjectiveBreakdown};
pub use slr::{solve_slr, solve_slr_with};
pub use tune::{parse_grid, tune_hyperparams, SearchSpace, TuneEvaluation, TuneOutcome};

use crate::error::{Error, Result};
use crate::metrics::QualityMetrics;
use crate::volume::{DynamicImage, KSpaceData};

/// Diagnostics of one completed iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
    pub fidelity: f64,
    pub sparse: f64,
    pub nuclear: f64,
    /// `-rho <beta, t - x> + rho/2 ||t - x||^2`; zero outside the SLR solver.
    pub coupling: f64,
    /// `||x^n - x^(n-1)|| / ||x^(n-1)||`.
    pub rel_change: f64,
    /// `||x^n - t^n||`, SLR only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primal_residual: Option<f64>,
}

pub type IterationTrace = Vec<IterationRecord>;

/// Read-only view of the solver state handed to observers after every
/// iteration.
#[derive(Debug)]
pub struct IterateView<'a> {
    pub iteration: usize,
    pub x: &'a DynamicImage,
    /// Low-rank variable `t^n` (SLR) or the low-rank module output (ISTA-LR).
    pub t: Option<&'a DynamicImage>,
    pub beta: Option<&'a DynamicImage>,
}

/// Result of one solver run.
#[derive(Clone, Debug)]
pub struct ReconReport {
    pub image: DynamicImage,
    pub trace: IterationTrace,
    pub seconds: f64,
    pub config: SolverConfig,
    pub metrics: Option<QualityMetrics>,
}

impl ReconReport {
    /// Attaches quality metrics against `reference`.
    pub fn with_reference(mut self, reference: &DynamicImage) -> Result<Self> {
        self.metrics = Some(QualityMetrics::compute(reference, &self.image)?);
        Ok(self)
    }
}

/// Reconstruction algorithm selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Solver {
    IstaSparse,
    Slr,
    IstaLr,
}

impl Solver {
    pub fn run(&self, y: &KSpaceData, cfg: &SolverConfig) -> Result<ReconReport> {
        match self {
            Solver::IstaSparse => solve_ista_sparse(y, cfg),
            Solver::Slr => solve_slr(y, cfg),
            Solver::IstaLr => solve_ista_lr(y, cfg),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Solver::IstaSparse => "ista",
            Solver::Slr => "slr",
            Solver::IstaLr => "ista-lr",
        }
    }
}

impl std::fmt::Display for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ista" => Ok(Solver::IstaSparse),
            "slr" => Ok(Solver::Slr),
            "ista-lr" | "ista_lr" => Ok(Solver::IstaLr),
            _ => Err(Error::InvalidConfig(format!("unknown solver `{s}` (expected ista, slr, ista-lr)"))),
        }
    }
}

pub(crate) fn guard(x: &DynamicImage, step: &'static str, iteration: usize) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { step, iteration })
    }
}

pub(crate) fn rel_change(prev: &DynamicImage, next: &DynamicImage) -> f64 {
    let diff = next.sub(prev).expect("iterates share a shape").norm();
    if diff == 0.0 {
        return 0.0;
    }
    let denom = prev.norm();
    if denom > 0.0 {
        diff / denom
    } else {
        diff / next.norm()
    }
}

pub(crate) struct Clock(Instant);

impl Clock {
    pub(crate) fn start() -> Self {
        Clock(Instant::now())
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
