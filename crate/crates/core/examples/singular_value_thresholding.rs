//! Soft thresholding, soft (Schatten-p) SVT and hard-rank SVT on a noisy
//! low-rank volume.

use dynlr::prelude::*;
use dynlr::prox::casorati_singular_values;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> dynlr::Result<()> {
    let clean = make_phantom(32, 32, 16, PhantomKind::RankSparse { rank: 2, sparsity: 3 }, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let noise = DynamicImage::from_fn(clean.shape(), |_, _, _| {
        num_complex::Complex64::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05))
    })?;
    let noisy = clean.add(&noise)?;

    let show = |label: &str, x: &DynamicImage| -> dynlr::Result<()> {
        let sv = casorati_singular_values(x);
        println!(
            "{label:<22} PSNR {:>6.2} dB  sigma[0..4] {:.3} {:.3} {:.3} {:.3}",
            psnr(&clean, x)?,
            sv[0],
            sv[1],
            sv[2],
            sv[3]
        );
        Ok(())
    };
    show("noisy", &noisy)?;
    for k in [1, 2, 4] {
        show(&format!("hard rank k={k}"), &learned_svt(&noisy, k)?)?;
    }
    for thr in [0.5, 1.0, 2.0] {
        show(&format!("soft SVT thr={thr}"), &ist_svt(&noisy, thr, 1.0, 1.0)?)?;
    }
    show("schatten p=0.5", &ist_svt(&noisy, 0.5, 1.0, 0.5)?)?;
    show("complex soft tau=0.02", &soft_threshold(&noisy, 0.02)?)?;
    println!("nuclear norm clean {:.3}  noisy {:.3}", nuclear_norm(&clean), nuclear_norm(&noisy));
    Ok(())
}
