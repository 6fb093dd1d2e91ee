use crate::error::{Error, Result};
use crate::operators::{encode_adjoint, fidelity_gradient};
use crate::prox::{ist_svt, learned_svt, sparse_prox};
use crate::solvers::{
    guard, objective_slr, rel_change, Clock, IterateView, IterationRecord, LrMode, ReconReport, SolverConfig, SvtInput,
};
use crate::volume::{DynamicImage, KSpaceData};

/// Sparse + low-rank reconstruction. Each iteration runs
///
/// ```text
/// r^n    = x^(n-1) - eta2 (A^H(A x^(n-1) - y) + rho (x^(n-1) + beta^(n-1) - t^(n-1)))
/// x^n    = D^H soft(D r^n, lambda1 eta2)
/// t^n    = SVT(x^n + beta^(n-1))        hard rank k, or soft at lambda2/rho
/// beta^n = beta^(n-1) + eta1 (x^n - t^n)
/// ```
///
/// starting from the zero-filled image with `t^0 = beta^0 = 0`. There is no
/// separate data-consistency step; `dc_mode` is ignored.
pub fn solve_slr(y: &KSpaceData, cfg: &SolverConfig) -> Result<ReconReport> {
    solve_slr_with(y, cfg, |_| {})
}

pub fn solve_slr_with(
    y: &KSpaceData,
    cfg: &SolverConfig,
    mut observe: impl FnMut(&IterateView<'_>),
) -> Result<ReconReport> {
    let shape = y.shape();
    cfg.validate(shape)?;
    if cfg.lr_mode == LrMode::Soft && cfg.lambda2 > 0.0 && cfg.rho == 0.0 {
        return Err(Error::InvalidConfig(
            "soft low-rank mode needs rho > 0 (threshold is lambda2 / rho)".into(),
        ));
    }
    let clock = Clock::start();

    let mut x = encode_adjoint(y);
    let mut t = DynamicImage::zeros(shape)?;
    let mut beta = DynamicImage::zeros(shape)?;
    let mut trace = Vec::with_capacity(cfg.iterations);

    for n in 1..=cfg.iterations {
        let mut grad = fidelity_gradient(&x, y)?;
        if cfg.rho != 0.0 {
            let mut coupling = x.add(&beta)?;
            coupling.axpy(-1.0, &t)?;
            grad.axpy(cfg.rho, &coupling)?;
        }
        let mut r = x.clone();
        r.axpy(-cfg.eta2, &grad)?;
        guard(&r, "R^n", n)?;

        let x_next = sparse_prox(&r, cfg.transform, cfg.lambda1 * cfg.eta2)?;
        guard(&x_next, "X^n", n)?;

        let svt_in = match cfg.svt_input {
            SvtInput::XPlusBeta => x_next.add(&beta)?,
            SvtInput::X => x_next.clone(),
        };
        let t_next = match cfg.lr_mode {
            LrMode::Hard => learned_svt(&svt_in, cfg.rank_k)?,
            LrMode::Soft if cfg.lambda2 == 0.0 => svt_in,
            LrMode::Soft => ist_svt(&svt_in, cfg.lambda2, cfg.rho, cfg.p)?,
        };
        guard(&t_next, "T^n", n)?;

        let gap = x_next.sub(&t_next)?;
        beta.axpy(cfg.eta1, &gap)?;
        guard(&beta, "M^n", n)?;

        let obj = objective_slr(&x_next, &t_next, &beta, y, cfg)?;
        trace.push(IterationRecord {
            iteration: n,
            objective: obj.total,
            fidelity: obj.fidelity,
            sparse: obj.sparse,
            nuclear: obj.nuclear,
            coupling: obj.multiplier + obj.penalty,
            rel_change: rel_change(&x, &x_next),
            primal_residual: Some(gap.norm()),
        });
        x = x_next;
        t = t_next;
        observe(&IterateView { iteration: n, x: &x, t: Some(&t), beta: Some(&beta) });
    }
    Ok(ReconReport {
        image: x,
        trace,
        seconds: clock.seconds(),
        config: cfg.clone(),
        metrics: None,
    })
}
