//! Synthetic dynamic phantoms and their low-rank / sparse structure.

use dynlr::prelude::*;
use dynlr::prox::{casorati_singular_values, transform_forward};

fn main() -> dynlr::Result<()> {
    let kinds = [
        ("beating_rings", PhantomKind::BeatingRings),
        ("rank 1, sparsity 1", PhantomKind::RankSparse { rank: 1, sparsity: 1 }),
        ("rank 2, sparsity 2", PhantomKind::RankSparse { rank: 2, sparsity: 2 }),
        ("rank 3, sparsity 4", PhantomKind::RankSparse { rank: 3, sparsity: 4 }),
    ];
    for (name, kind) in kinds {
        let x = make_phantom(64, 64, 16, kind, 1)?;
        let sv = casorati_singular_values(&x);
        let top: Vec<String> = sv.iter().take(5).map(|s| format!("{:.2e}", s / sv[0])).collect();
        let f = transform_forward(&x, SparseTransform::TemporalFourier)?;
        let bins = (0..16).filter(|&t| f.frame(t).iter().any(|z| z.norm() > 1e-9)).count();
        println!("{name:<20} sigma/sigma1 [{}]  active temporal bins {bins}", top.join(", "));
    }
    Ok(())
}
