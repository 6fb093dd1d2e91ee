//! MSE, PSNR and SSIM of progressively degraded volumes.

use dynlr::metrics::mse_per_element_e5;
use dynlr::prelude::*;

fn main() -> dynlr::Result<()> {
    let truth = make_phantom(64, 64, 8, PhantomKind::BeatingRings, 1)?;
    println!("identical: {}", QualityMetrics::compute(&truth, &truth)?);
    for accel in [2.0, 4.0, 8.0, 12.0] {
        let y = encode(&truth, &make_vd_mask(64, 8, accel, 0.15, 1)?)?;
        let zf = encode_adjoint(&y);
        println!(
            "zero-filled R={accel:<4} MSE {:.4}  MSE(*e-5) {:.3}  PSNR {:.2}  SSIM {:.4}",
            mse(&truth, &zf)?,
            mse_per_element_e5(&truth, &zf)?,
            psnr(&truth, &zf)?,
            ssim(&truth, &zf)?
        );
    }
    // SSIM works on magnitudes, so a global phase change is invisible to it
    let rotated = DynamicImage::from_vec(
        truth.shape(),
        truth.data().iter().map(|z| z * num_complex::Complex64::from_polar(1.0, 1.0)).collect(),
    )?;
    println!("global phase: PSNR {:.2} dB  SSIM {:.4}", psnr(&truth, &rotated)?, ssim(&truth, &rotated)?);
    Ok(())
}
