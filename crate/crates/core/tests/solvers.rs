mod common;

use common::*;
use dynlr::operators::data_fidelity;
use dynlr::prelude::*;
use dynlr::prox::{casorati_rank, l1_norm, transform_forward};
use dynlr::solvers::{objective_slr, solve_ista_lr_with, solve_slr_with, SvtInput};

fn instance(nx: usize, nt: usize, accel: f64, seed: u64) -> (DynamicImage, KSpaceData) {
    let truth = make_phantom(nx, nx, nt, PhantomKind::RankSparse { rank: 2, sparsity: 2 }, seed).unwrap();
    let mask = make_vd_mask(nx, nt, accel, 0.15, seed + 100).unwrap();
    let y = encode(&truth, &mask).unwrap();
    (truth, y)
}

fn sampled_residual(x: &DynamicImage, y: &KSpaceData) -> f64 {
    encode(x, y.mask()).unwrap().data().sub(y.data()).unwrap().norm() / y.data().norm()
}

#[test]
fn full_sampling_without_priors_returns_truth() {
    let truth = random_volume(Shape::new(16, 16, 8), 1);
    let y = encode(&truth, &SamplingMask::full(16, 8).unwrap()).unwrap();
    let cfg = SolverConfig { lambda1: 0.0, lambda2: 0.0, rho: 0.0, rank_k: 8, iterations: 3, ..SolverConfig::default() };
    for solver in [Solver::Slr, Solver::IstaSparse, Solver::IstaLr] {
        let out = solver.run(&y, &cfg).unwrap();
        assert!(rel_diff(&out.image, &truth) < 1e-12, "{solver}");
    }
}

#[test]
fn dc_terminated_solvers_match_sampled_data() {
    let (_, y) = instance(32, 8, 4.0, 1);
    let base = SolverConfig { iterations: 5, rank_k: 2, ..SolverConfig::default_for(&y) };
    for (solver, placement) in [(Solver::IstaSparse, Placement::L2), (Solver::IstaLr, Placement::L1), (Solver::IstaLr, Placement::L2)] {
        let cfg = SolverConfig { placement, ..base.clone() };
        let out = solver.run(&y, &cfg).unwrap();
        assert!(sampled_residual(&out.image, &y) < 1e-10, "{solver} {placement}");
        let x0 = encode_adjoint(&y);
        assert!(data_fidelity(&out.image, &y).unwrap() <= data_fidelity(&x0, &y).unwrap() + 1e-12);
    }
}

#[test]
fn l3_output_has_rank_at_most_k() {
    let (_, y) = instance(32, 8, 4.0, 2);
    let cfg = SolverConfig { iterations: 4, rank_k: 2, placement: Placement::L3, ..SolverConfig::default_for(&y) };
    let out = solve_ista_lr(&y, &cfg).unwrap();
    assert!(casorati_rank(&out.image) <= 2);
    // the final SVT moves the iterate off the measured data
    assert!(sampled_residual(&out.image, &y) > 1e-6);
}

#[test]
fn slr_low_rank_variable_respects_rank() {
    let (_, y) = instance(32, 8, 4.0, 3);
    let cfg = SolverConfig { iterations: 6, rank_k: 2, ..SolverConfig::default_for(&y) };
    let mut ranks = Vec::new();
    solve_slr_with(&y, &cfg, |v| ranks.push(casorati_rank(v.t.unwrap()))).unwrap();
    assert_eq!(ranks.len(), 6);
    assert!(ranks.iter().all(|&r| r <= 2));
}

#[test]
fn slr_multiplier_tracks_primal_gap() {
    let (_, y) = instance(32, 8, 4.0, 4);
    let cfg = SolverConfig { iterations: 5, rank_k: 1, eta1: 0.7, ..SolverConfig::default_for(&y) };
    let mut prev = DynamicImage::zeros(y.shape()).unwrap();
    let mut worst: f64 = 0.0;
    solve_slr_with(&y, &cfg, |v| {
        let beta = v.beta.unwrap();
        let mut want = prev.clone();
        want.axpy(0.7, &v.x.sub(v.t.unwrap()).unwrap()).unwrap();
        worst = worst.max(rel_diff(beta, &want));
        prev = beta.clone();
    })
    .unwrap();
    assert!(worst < 1e-12);
}

#[test]
fn objective_terms_match_direct_formula() {
    let (_, y) = instance(16, 8, 2.0, 5);
    let shape = y.shape();
    let (x, t, beta) = (random_volume(shape, 1), random_volume(shape, 2), random_volume(shape, 3));
    let cfg = SolverConfig { lambda1: 0.3, lambda2: 0.2, rho: 0.7, ..SolverConfig::default() };
    let got = objective_slr(&x, &t, &beta, &y, &cfg).unwrap();

    let mask = y.mask();
    let kx = naive_fft2c(&x, false);
    let mut fid = 0.0;
    for tt in 0..8 {
        for yy in 0..16 {
            if mask.is_sampled(yy, tt) {
                for xx in 0..16 {
                    fid += (kx.get(xx, yy, tt) - y.data().get(xx, yy, tt)).norm_sqr();
                }
            }
        }
    }
    let dx = map_temporal(&x, |s| naive_dft(s, false));
    let l1: f64 = dx.data().iter().map(|z| z.norm()).sum();
    let nuc: f64 = oracle_singular_values(&t).iter().sum();
    let mut inner = 0.0;
    let mut gap2 = 0.0;
    for ((b, tv), xv) in beta.data().iter().zip(t.data()).zip(x.data()) {
        inner += (b.conj() * (tv - xv)).re;
        gap2 += (tv - xv).norm_sqr();
    }
    let want = 0.5 * fid + 0.3 * l1 + 0.2 * nuc - 0.7 * inner + 0.35 * gap2;
    assert!((got.total - want).abs() < 1e-9 * want.abs());
    assert!((got.fidelity - 0.5 * fid).abs() < 1e-9 * fid);
    assert!((l1_norm(&transform_forward(&x, SparseTransform::TemporalFourier).unwrap()) - l1).abs() < 1e-9 * l1);
}

#[test]
fn trace_is_recorded_and_settles() {
    let (_, y) = instance(32, 8, 4.0, 6);
    let cfg = SolverConfig { iterations: 30, rank_k: 2, ..SolverConfig::default_for(&y) };
    let out = solve_slr(&y, &cfg).unwrap();
    assert_eq!(out.trace.len(), 30);
    assert!(out.trace.iter().enumerate().all(|(i, r)| r.iteration == i + 1 && r.objective.is_finite()));
    let early: f64 = out.trace[..5].iter().map(|r| r.rel_change).sum::<f64>() / 5.0;
    let late: f64 = out.trace[25..].iter().map(|r| r.rel_change).sum::<f64>() / 5.0;
    assert!(late < early, "rel_change {early:e} -> {late:e}");
    assert!(out.trace.iter().all(|r| r.primal_residual.is_some()));
}

#[test]
fn ista_objective_does_not_increase() {
    let (_, y) = instance(32, 8, 4.0, 7);
    // dc = off turns ISTA into plain proximal gradient on the convex objective
    let cfg = SolverConfig { iterations: 15, eta2: 1.0, dc_mode: DcMode::Off, ..SolverConfig::default_for(&y) };
    let out = solve_ista_sparse(&y, &cfg).unwrap();
    for w in out.trace.windows(2) {
        assert!(w[1].objective <= w[0].objective * (1.0 + 1e-12), "{} -> {}", w[0].objective, w[1].objective);
    }
}

#[test]
fn solvers_are_deterministic() {
    let (_, y) = instance(32, 8, 4.0, 8);
    let cfg = SolverConfig { iterations: 4, rank_k: 2, ..SolverConfig::default_for(&y) };
    for solver in [Solver::Slr, Solver::IstaSparse, Solver::IstaLr] {
        let a = solver.run(&y, &cfg).unwrap();
        let b = solver.run(&y, &cfg).unwrap();
        assert_eq!(a.image, b.image);
        assert_eq!(a.trace, b.trace);
    }
}

#[test]
fn haar_and_soft_modes_run() {
    let (truth, y) = instance(32, 8, 4.0, 9);
    let zf = psnr(&truth, &encode_adjoint(&y)).unwrap();
    let cfg = SolverConfig {
        iterations: 20,
        transform: SparseTransform::TemporalHaar,
        lr_mode: LrMode::Soft,
        lambda2: 0.05,
        svt_input: SvtInput::X,
        ..SolverConfig::default_for(&y)
    };
    let out = solve_slr(&y, &cfg).unwrap().with_reference(&truth).unwrap();
    assert!(out.image.is_finite());
    assert!(out.metrics.unwrap().psnr > zf);
}

#[test]
fn invalid_configs_are_rejected() {
    let (_, y) = instance(16, 8, 2.0, 10);
    let base = SolverConfig::default_for(&y);
    let bad = [
        SolverConfig { rank_k: 0, ..base.clone() },
        SolverConfig { rank_k: 9, ..base.clone() },
        SolverConfig { eta2: 0.0, ..base.clone() },
        SolverConfig { lambda1: -1.0, ..base.clone() },
        SolverConfig { p: 1.5, ..base.clone() },
        SolverConfig { iterations: 0, ..base.clone() },
        SolverConfig { lr_mode: LrMode::Soft, rho: 0.0, ..base.clone() },
    ];
    for cfg in bad {
        let err = solve_slr(&y, &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{cfg:?}");
    }
    let truth = random_volume(Shape::new(16, 16, 4), 1);
    assert_eq!(solve_slr(&y, &base).is_ok(), true);
    let mismatch = tune_hyperparams(&y, &truth, &SearchSpace::new(base), Solver::Slr).unwrap_err();
    assert_eq!(mismatch.exit_code(), 3);
}

#[test]
fn divergent_step_reports_non_finite() {
    let (_, y) = instance(16, 8, 2.0, 11);
    let cfg = SolverConfig { eta2: 1e300, lambda1: 0.0, rho: 1e300, iterations: 50, ..SolverConfig::default_for(&y) };
    let err = solve_slr(&y, &cfg).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn tuner_single_point_and_extremes() {
    let (truth, y) = instance(16, 8, 2.0, 12);
    let base = SolverConfig { iterations: 5, ..SolverConfig::default_for(&y) };
    let single = tune_hyperparams(&y, &truth, &SearchSpace::new(base.clone()), Solver::IstaSparse).unwrap();
    assert_eq!(single.evaluations.len(), 1);
    assert_eq!(single.best, base);
    let direct = psnr(&truth, &solve_ista_sparse(&y, &base).unwrap().image).unwrap();
    assert_eq!(single.best_psnr, direct);

    // an enormous threshold wipes out everything but the data
    let space = SearchSpace::new(base).axis("lambda1", [1e6, 0.0]).unwrap();
    let out = tune_hyperparams(&y, &truth, &space, Solver::IstaSparse).unwrap();
    assert_eq!(out.best.lambda1, 0.0);
    assert_eq!(out.evaluations.len(), 2);
}

#[test]
fn ista_lr_full_rank_matches_ista_at_every_placement() {
    let (_, y) = instance(16, 8, 2.0, 13);
    let cfg = SolverConfig { iterations: 4, rank_k: 8, ..SolverConfig::default_for(&y) };
    let reference = solve_ista_sparse(&y, &cfg).unwrap().image;
    for placement in [Placement::L1, Placement::L2, Placement::L3] {
        let mut count = 0;
        let out = solve_ista_lr_with(&y, &SolverConfig { placement, ..cfg.clone() }, |_| count += 1).unwrap();
        assert_eq!(count, 4);
        assert!(rel_diff(&out.image, &reference) < 1e-10, "{placement}");
    }
}
