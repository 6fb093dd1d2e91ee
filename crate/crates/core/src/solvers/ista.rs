use crate::error::Result;
use crate::operators::{data_consistency, encode_adjoint, fidelity_gradient};
use crate::prox::sparse_prox;
use crate::solvers::{guard, objective_slr, rel_change, Clock, IterateView, IterationRecord, ReconReport, SolverConfig};
use crate::volume::{DynamicImage, KSpaceData};

/// Sparse-only ISTA with a data-consistency step after every shrinkage.
/// `lambda2`, `rho`, `eta1` and the low-rank settings are ignored.
pub fn solve_ista_sparse(y: &KSpaceData, cfg: &SolverConfig) -> Result<ReconReport> {
    solve_ista_sparse_with(y, cfg, |_| {})
}

pub fn solve_ista_sparse_with(
    y: &KSpaceData,
    cfg: &SolverConfig,
    mut observe: impl FnMut(&IterateView<'_>),
) -> Result<ReconReport> {
    cfg.validate(y.shape())?;
    let clock = Clock::start();
    let objective_cfg = SolverConfig { lambda2: 0.0, rho: 0.0, ..cfg.clone() };
    let zero = DynamicImage::zeros(y.shape())?;

    let mut x = encode_adjoint(y);
    let mut trace = Vec::with_capacity(cfg.iterations);
    for n in 1..=cfg.iterations {
        let mut r = x.clone();
        r.axpy(-cfg.eta2, &fidelity_gradient(&x, y)?)?;
        guard(&r, "R^n", n)?;
        let sparse = sparse_prox(&r, cfg.transform, cfg.lambda1 * cfg.eta2)?;
        guard(&sparse, "X^n", n)?;
        let next = data_consistency(&sparse, y, cfg.dc_mode)?;
        guard(&next, "DC", n)?;

        let obj = objective_slr(&next, &next, &zero, y, &objective_cfg)?;
        trace.push(IterationRecord {
            iteration: n,
            objective: obj.total,
            fidelity: obj.fidelity,
            sparse: obj.sparse,
            nuclear: 0.0,
            coupling: 0.0,
            rel_change: rel_change(&x, &next),
            primal_residual: None,
        });
        x = next;
        observe(&IterateView { iteration: n, x: &x, t: None, beta: None });
    }
    Ok(ReconReport {
        image: x,
        trace,
        seconds: clock.seconds(),
        config: cfg.clone(),
        metrics: None,
    })
}
