use crate::error::Result;
use crate::operators::{data_consistency, encode_adjoint, fidelity_gradient};
use crate::prox::{learned_svt, sparse_prox};
use crate::solvers::{
    guard, objective_slr, rel_change, Clock, IterateView, IterationRecord, Placement, ReconReport, SolverConfig,
};
use crate::volume::{DynamicImage, KSpaceData};

/// ISTA with a plug-in hard-rank module. One iteration is
///
/// ```text
/// L1:  r -> SVT -> soft -> DC
/// L2:  r -> soft -> SVT -> DC
/// L3:  r -> soft -> DC -> SVT
/// ```
///
/// with `r = x - eta2 A^H(A x - y)` and the soft-threshold at
/// `lambda1 * eta2`. The module output feeds the next iteration.
pub fn solve_ista_lr(y: &KSpaceData, cfg: &SolverConfig) -> Result<ReconReport> {
    solve_ista_lr_with(y, cfg, |_| {})
}

pub fn solve_ista_lr_with(
    y: &KSpaceData,
    cfg: &SolverConfig,
    mut observe: impl FnMut(&IterateView<'_>),
) -> Result<ReconReport> {
    cfg.validate(y.shape())?;
    let clock = Clock::start();
    let tau = cfg.lambda1 * cfg.eta2;
    let objective_cfg = SolverConfig { rho: 0.0, ..cfg.clone() };
    let zero = DynamicImage::zeros(y.shape())?;

    let mut x = encode_adjoint(y);
    let mut trace = Vec::with_capacity(cfg.iterations);
    for n in 1..=cfg.iterations {
        let mut r = x.clone();
        r.axpy(-cfg.eta2, &fidelity_gradient(&x, y)?)?;
        guard(&r, "R^n", n)?;

        let (lr_out, next) = match cfg.placement {
            Placement::L1 => {
                let t = learned_svt(&r, cfg.rank_k)?;
                guard(&t, "T^n", n)?;
                let s = sparse_prox(&t, cfg.transform, tau)?;
                guard(&s, "X^n", n)?;
                let d = data_consistency(&s, y, cfg.dc_mode)?;
                (t, d)
            }
            Placement::L2 => {
                let s = sparse_prox(&r, cfg.transform, tau)?;
                guard(&s, "X^n", n)?;
                let t = learned_svt(&s, cfg.rank_k)?;
                guard(&t, "T^n", n)?;
                let d = data_consistency(&t, y, cfg.dc_mode)?;
                (t, d)
            }
            Placement::L3 => {
                let s = sparse_prox(&r, cfg.transform, tau)?;
                guard(&s, "X^n", n)?;
                let d = data_consistency(&s, y, cfg.dc_mode)?;
                guard(&d, "DC", n)?;
                let t = learned_svt(&d, cfg.rank_k)?;
                (t.clone(), t)
            }
        };
        guard(&next, if cfg.placement == Placement::L3 { "T^n" } else { "DC" }, n)?;

        let obj = objective_slr(&next, &next, &zero, y, &objective_cfg)?;
        trace.push(IterationRecord {
            iteration: n,
            objective: obj.total,
            fidelity: obj.fidelity,
            sparse: obj.sparse,
            nuclear: obj.nuclear,
            coupling: 0.0,
            rel_change: rel_change(&x, &next),
            primal_residual: None,
        });
        x = next;
        observe(&IterateView { iteration: n, x: &x, t: Some(&lr_out), beta: None });
    }
    Ok(ReconReport {
        image: x,
        trace,
        seconds: clock.seconds(),
        config: cfg.clone(),
        metrics: None,
    })
}
