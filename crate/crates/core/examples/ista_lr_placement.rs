//! ISTA-LR with the hard-rank module at L1, L2 and L3, compared with
//! sparse-only ISTA.

use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let truth = make_phantom(64, 64, 16, PhantomKind::BeatingRings, 2)?;
    let mask = make_vd_mask(64, 16, 8.0, 0.15, 3)?;
    let y = encode(&truth, &mask)?;
    let cfg = SolverConfig { rank_k: 4, iterations: 50, ..SolverConfig::default_for(&y) };

    let ista = solve_ista_sparse(&y, &cfg)?.with_reference(&truth)?;
    println!("ista      {}", ista.metrics.unwrap());
    for placement in [Placement::L1, Placement::L2, Placement::L3] {
        let c = SolverConfig { placement, ..cfg.clone() };
        let out = solve_ista_lr(&y, &c)?.with_reference(&truth)?;
        let resid = encode(&out.image, &mask)?.data().sub(y.data())?.norm() / y.data().norm();
        println!("ista-lr {placement} {}  sampled residual {resid:.1e}", out.metrics.unwrap());
    }
    Ok(())
}
