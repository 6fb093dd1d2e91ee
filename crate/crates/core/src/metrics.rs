//! Image quality metrics: MSE, PSNR and SSIM between a reference and a
//! reconstructed volume.
//!
//! MSE and PSNR act on the complex difference. SSIM acts on magnitude frames
//! with an 11x11 Gaussian window (sigma 1.5), `K1 = 0.01`, `K2 = 0.03` and a
//! dynamic range equal to the peak reference magnitude, and is averaged over
//! frames.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::volume::DynamicImage;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// Squared L2 norm of the difference, not normalized by the element count.
pub fn mse(reference: &DynamicImage, rec: &DynamicImage) -> Result<f64> {
    Ok(reference.sub(rec)?.norm_sqr())
}

/// MSE divided by the element count and scaled by `1e5`, the convention of
/// the usual "MSE (x1e-5)" table column.
pub fn mse_per_element_e5(reference: &DynamicImage, rec: &DynamicImage) -> Result<f64> {
    Ok(mse(reference, rec)? / reference.shape().len() as f64 * 1e5)
}

/// `20 log10(max|ref| sqrt(N) / ||ref - rec||)` in dB; `+inf` when the
/// volumes are identical.
pub fn psnr(reference: &DynamicImage, rec: &DynamicImage) -> Result<f64> {
    let peak = reference.max_abs();
    if peak == 0.0 {
        return Err(Error::InvalidArgument("PSNR reference is all zero".into()));
    }
    let err = reference.sub(rec)?.norm();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let n = reference.shape().len() as f64;
    Ok(20.0 * (peak * n.sqrt() / err).log10())
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let mut w = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    for (i, v) in w.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    w
}

// Separable "valid" filtering of an nx-by-ny image.
fn filter_valid(img: &[f64], nx: usize, ny: usize, w: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let ox = nx - SSIM_WINDOW + 1;
    let oy = ny - SSIM_WINDOW + 1;
    let mut rows = vec![0.0; ox * ny];
    for y in 0..ny {
        let line = &img[y * nx..(y + 1) * nx];
        for x in 0..ox {
            rows[x + ox * y] = w.iter().zip(&line[x..x + SSIM_WINDOW]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; ox * oy];
    for y in 0..oy {
        for x in 0..ox {
            out[x + ox * y] = (0..SSIM_WINDOW).map(|k| w[k] * rows[x + ox * (y + k)]).sum();
        }
    }
    out
}

/// Mean structural similarity over frames, computed on magnitudes.
pub fn ssim(reference: &DynamicImage, rec: &DynamicImage) -> Result<f64> {
    let shape = reference.shape();
    rec.expect_shape(shape)?;
    let (nx, ny) = (shape.nx, shape.ny);
    if nx < SSIM_WINDOW || ny < SSIM_WINDOW {
        return Err(Error::InvalidArgument(format!(
            "SSIM needs frames of at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {nx}x{ny}"
        )));
    }
    let range = reference.max_abs();
    let c1 = (SSIM_K1 * range).powi(2);
    let c2 = (SSIM_K2 * range).powi(2);
    let w = gaussian_window();

    let mut total = 0.0;
    for t in 0..shape.nt {
        let a: Vec<f64> = reference.frame(t).iter().map(|z| z.norm()).collect();
        let b: Vec<f64> = rec.frame(t).iter().map(|z| z.norm()).collect();
        let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
        let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mu_a = filter_valid(&a, nx, ny, &w);
        let mu_b = filter_valid(&b, nx, ny, &w);
        let e_aa = filter_valid(&aa, nx, ny, &w);
        let e_bb = filter_valid(&bb, nx, ny, &w);
        let e_ab = filter_valid(&ab, nx, ny, &w);
        let mut sum = 0.0;
        for i in 0..mu_a.len() {
            let (ma, mb) = (mu_a[i], mu_b[i]);
            let var_a = e_aa[i] - ma * ma;
            let var_b = e_bb[i] - mb * mb;
            let cov = e_ab[i] - ma * mb;
            sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
                / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
        }
        total += sum / mu_a.len() as f64;
    }
    Ok(total / shape.nt as f64)
}

/// MSE, PSNR and SSIM of one reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QualityMetrics {
    pub mse: f64,
    pub mse_e5: f64,
    pub psnr: f64,
    pub ssim: f64,
}

impl QualityMetrics {
    pub fn compute(reference: &DynamicImage, rec: &DynamicImage) -> Result<Self> {
        Ok(QualityMetrics {
            mse: mse(reference, rec)?,
            mse_e5: mse_per_element_e5(reference, rec)?,
            psnr: psnr(reference, rec)?,
            ssim: ssim(reference, rec)?,
        })
    }
}

impl std::fmt::Display for QualityMetrics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MSE {:.4}  MSE(*e-5) {:.4}  PSNR {:.4}  SSIM {:.4}",
            self.mse, self.mse_e5, self.psnr, self.ssim
        )
    }
}
