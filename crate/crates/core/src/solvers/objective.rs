use serde::Serialize;

use crate::error::Result;
use crate::operators::data_fidelity;
use crate::prox::{nuclear_norm, sparse_norm};
use crate::solvers::SolverConfig;
use crate::volume::{DynamicImage, KSpaceData};

/// Terms of the augmented Lagrangian in scaled-multiplier form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObjectiveBreakdown {
    /// `1/2 ||A x - y||^2`
    pub fidelity: f64,
    /// `lambda1 ||D x||_1`
    pub sparse: f64,
    /// `lambda2 ||t||_*`
    pub nuclear: f64,
    /// `-rho Re<beta, t - x>`
    pub multiplier: f64,
    /// `rho/2 ||t - x||^2`
    pub penalty: f64,
    pub total: f64,
}

/// Evaluates
/// `1/2||Ax - y||^2 + lambda1||Dx||_1 + lambda2||t||_* - rho<beta, t - x> + rho/2||t - x||^2`
/// where `beta` is the multiplier scaled by `1/rho`.
pub fn objective_slr(
    x: &DynamicImage,
    t: &DynamicImage,
    beta: &DynamicImage,
    y: &KSpaceData,
    cfg: &SolverConfig,
) -> Result<ObjectiveBreakdown> {
    x.expect_shape(y.shape())?;
    let diff = t.sub(x)?;
    let fidelity = data_fidelity(x, y)?;
    let sparse = if cfg.lambda1 == 0.0 {
        0.0
    } else {
        cfg.lambda1 * sparse_norm(x, cfg.transform)?
    };
    let nuclear = if cfg.lambda2 == 0.0 { 0.0 } else { cfg.lambda2 * nuclear_norm(t) };
    let multiplier = -cfg.rho * beta.inner(&diff)?.re;
    let penalty = 0.5 * cfg.rho * diff.norm_sqr();
    Ok(ObjectiveBreakdown {
        fidelity,
        sparse,
        nuclear,
        multiplier,
        penalty,
        total: fidelity + sparse + nuclear + multiplier + penalty,
    })
}
