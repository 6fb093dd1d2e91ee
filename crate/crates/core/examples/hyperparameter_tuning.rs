//! Grid search over solver hyper-parameters, scored by PSNR.

use dynlr::prelude::*;
use dynlr::solvers::parse_grid;

fn main() -> dynlr::Result<()> {
    let truth = make_phantom(48, 48, 16, PhantomKind::RankSparse { rank: 2, sparsity: 2 }, 5)?;
    let mask = make_vd_mask(48, 16, 6.0, 0.15, 9)?;
    let y = encode(&truth, &mask)?;
    let peak = encode_adjoint(&y).max_abs();
    let base = SolverConfig { iterations: 30, ..SolverConfig::default_for(&y) };

    let space = SearchSpace::new(base.clone())
        .axis("lambda1", [1e-3 * peak, 3e-3 * peak, 1e-2 * peak])?
        .axis("rank_k", [1, 2, 4])?;
    let out = tune_hyperparams(&y, &truth, &space, Solver::Slr)?;
    for e in &out.evaluations {
        println!("lambda1={:.3e} k={}  {:.3} dB", e.config.lambda1, e.config.rank_k, e.psnr);
    }
    println!("best {:.3} dB\n{}", out.best_psnr, out.best.to_kv());

    // the same search written as a command-line grid string
    let grid = format!("lambda1={},{};eta2=0.5,1.0", 1e-3 * peak, 1e-2 * peak);
    let out = tune_hyperparams(&y, &truth, &parse_grid(&grid, base)?, Solver::IstaSparse)?;
    println!("ista best {:.3} dB over {} points", out.best_psnr, out.evaluations.len());
    Ok(())
}
