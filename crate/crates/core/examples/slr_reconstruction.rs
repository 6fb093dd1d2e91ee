//! Sparse + low-rank reconstruction with a per-iteration trace.

use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let truth = make_phantom(64, 64, 16, PhantomKind::RankSparse { rank: 2, sparsity: 2 }, 1)?;
    let mask = make_vd_mask(64, 16, 8.0, 0.15, 7)?;
    let y = encode(&truth, &mask)?;
    let peak = encode_adjoint(&y).max_abs();

    let cfg = SolverConfig {
        lambda1: 3e-3 * peak,
        rank_k: 2,
        eta2: 1.5,
        iterations: 50,
        ..SolverConfig::default_for(&y)
    };
    let report = solve_slr(&y, &cfg)?.with_reference(&truth)?;
    println!("iter   objective     fidelity    rel_change  |x - t|");
    for r in report.trace.iter().filter(|r| r.iteration % 5 == 0 || r.iteration == 1) {
        println!(
            "{:>4}  {:.5e}  {:.5e}  {:.3e}  {:.3e}",
            r.iteration,
            r.objective,
            r.fidelity,
            r.rel_change,
            r.primal_residual.unwrap_or(0.0)
        );
    }
    println!("zero-filled    {}", QualityMetrics::compute(&truth, &encode_adjoint(&y))?);
    println!("slr            {}", report.metrics.unwrap());
    println!("{:.2} s", report.seconds);
    Ok(())
}
