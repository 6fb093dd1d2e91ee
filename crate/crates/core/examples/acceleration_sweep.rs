//! Zero-filled, ISTA and SLR quality across acceleration factors.

use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let truth = make_phantom(64, 64, 16, PhantomKind::RankSparse { rank: 2, sparsity: 2 }, 1)?;
    println!("  R   zero-filled   ista    slr   (PSNR dB)");
    for accel in [4.0, 6.0, 8.0, 10.0, 12.0] {
        let mask = make_vd_mask(64, 16, accel, 0.15, 7)?;
        let y = encode(&truth, &mask)?;
        let peak = encode_adjoint(&y).max_abs();
        let base = SolverConfig { iterations: 50, rank_k: 2, eta2: 1.5, ..SolverConfig::default_for(&y) };
        let ista = solve_ista_sparse(&y, &SolverConfig { lambda1: 1e-2 * peak, eta2: 0.5, ..base.clone() })?;
        let slr = solve_slr(&y, &SolverConfig { lambda1: 1e-3 * peak, ..base })?;
        println!(
            "{accel:>4}  {:>9.2}  {:>7.2}  {:>6.2}",
            psnr(&truth, &encode_adjoint(&y))?,
            psnr(&truth, &ista.image)?,
            psnr(&truth, &slr.image)?
        );
    }
    Ok(())
}
