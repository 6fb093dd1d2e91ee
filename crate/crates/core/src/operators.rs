//! Centered unitary 2D Fourier transform, the encoding operator `A = P F`
//! with its Hermitian adjoint, and the k-space data-consistency step.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::volume::{DynamicImage, KSpaceData, SamplingMask};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(len)
        } else {
            p.plan_fft_inverse(len)
        }
    })
}

/// How acquired samples are merged into a predicted k-space.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum DcMode {
    /// Sampled coefficients are overwritten by the acquired ones.
    #[default]
    Replace,
    /// Sampled coefficients become `(k_pred + nu * k_acq) / (1 + nu)`.
    Weighted(f64),
    /// No data consistency; the prediction passes through.
    Off,
}

impl std::fmt::Display for DcMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DcMode::Replace => write!(f, "replace"),
            DcMode::Weighted(nu) => write!(f, "weighted:{nu}"),
            DcMode::Off => write!(f, "off"),
        }
    }
}

impl std::str::FromStr for DcMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replace" => Ok(DcMode::Replace),
            "off" | "none" => Ok(DcMode::Off),
            _ => {
                let nu = s
                    .strip_prefix("weighted:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|nu| nu.is_finite() && *nu >= 0.0)
                    .ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "unknown data-consistency mode `{s}` (expected replace, weighted:<nu>, off)"
                        ))
                    })?;
                Ok(DcMode::Weighted(nu))
            }
        }
    }
}

/// Unitary 2D DFT of every frame, with the zero frequency moved to
/// `(nx/2, ny/2)`.
pub fn fft2c(img: &DynamicImage) -> DynamicImage {
    let mut out = img.clone();
    transform_frames(&mut out, true);
    out
}

/// Inverse of [`fft2c`].
pub fn ifft2c(ksp: &DynamicImage) -> DynamicImage {
    let mut out = ksp.clone();
    transform_frames(&mut out, false);
    out
}

fn transform_frames(vol: &mut DynamicImage, forward: bool) {
    let shape = vol.shape();
    let (nx, ny) = (shape.nx, shape.ny);
    let fx = plan(nx, forward);
    let fy = plan(ny, forward);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fx.get_inplace_scratch_len().max(fy.get_inplace_scratch_len())];
    let mut column = vec![Complex64::new(0.0, 0.0); ny];
    let scale = 1.0 / ((nx * ny) as f64).sqrt();

    for frame in vol.frames_mut() {
        for row in frame.chunks_exact_mut(nx) {
            row.rotate_left(nx / 2);
            fx.process_with_scratch(row, &mut scratch);
            row.rotate_right(nx / 2);
        }
        for x in 0..nx {
            for (y, c) in column.iter_mut().enumerate() {
                *c = frame[x + nx * y];
            }
            column.rotate_left(ny / 2);
            fy.process_with_scratch(&mut column, &mut scratch);
            column.rotate_right(ny / 2);
            for (y, c) in column.iter().enumerate() {
                frame[x + nx * y] = c * scale;
            }
        }
    }
}

/// Zeroes every k-space line not sampled by `mask`.
pub fn apply_mask(ksp: &mut DynamicImage, mask: &SamplingMask) -> Result<()> {
    let shape = ksp.shape();
    mask.check_shape(shape)?;
    let nx = shape.nx;
    for (t, frame) in ksp.frames_mut().enumerate() {
        for (y, row) in frame.chunks_exact_mut(nx).enumerate() {
            if !mask.is_sampled(y, t) {
                row.fill(Complex64::new(0.0, 0.0));
            }
        }
    }
    Ok(())
}

/// `A x = P F x`.
pub fn encode(img: &DynamicImage, mask: &SamplingMask) -> Result<KSpaceData> {
    mask.check_shape(img.shape())?;
    let mut ksp = fft2c(img);
    apply_mask(&mut ksp, mask)?;
    KSpaceData::new(ksp, mask.clone())
}

/// `A^H y = F^H P^H y`.
pub fn encode_adjoint(ksp: &KSpaceData) -> DynamicImage {
    let mut masked = ksp.data().clone();
    apply_mask(&mut masked, ksp.mask()).expect("KSpaceData shape is checked at construction");
    ifft2c(&masked)
}

/// Gradient of `1/2 ||A x - y||^2`, i.e. `A^H (A x - y)`.
pub fn fidelity_gradient(x: &DynamicImage, y: &KSpaceData) -> Result<DynamicImage> {
    let ax = encode(x, y.mask())?;
    let residual = ax.data().sub(y.data())?;
    Ok(encode_adjoint(&KSpaceData::new(residual, y.mask().clone())?))
}

/// `1/2 ||A x - y||^2`.
pub fn data_fidelity(x: &DynamicImage, y: &KSpaceData) -> Result<f64> {
    let ax = encode(x, y.mask())?;
    let mut acquired = y.data().clone();
    apply_mask(&mut acquired, y.mask())?;
    Ok(0.5 * ax.data().sub(&acquired)?.norm_sqr())
}

/// Merges acquired samples into the k-space of `pred` and returns the result
/// in image space. Unsampled coefficients keep their predicted values.
pub fn data_consistency(pred: &DynamicImage, acquired: &KSpaceData, mode: DcMode) -> Result<DynamicImage> {
    pred.expect_shape(acquired.shape())?;
    let (w_pred, w_acq) = match mode {
        DcMode::Off => return Ok(pred.clone()),
        DcMode::Replace => (0.0, 1.0),
        DcMode::Weighted(nu) => {
            if !(nu >= 0.0) || !nu.is_finite() {
                return Err(Error::InvalidConfig(format!("weighted DC needs finite nu >= 0, got {nu}")));
            }
            (1.0 / (1.0 + nu), nu / (1.0 + nu))
        }
    };
    let mut k = fft2c(pred);
    let nx = k.shape().nx;
    let mask = acquired.mask();
    let acq = acquired.data();
    for (t, frame) in k.frames_mut().enumerate() {
        let acq_frame = acq.frame(t);
        for (y, row) in frame.chunks_exact_mut(nx).enumerate() {
            if !mask.is_sampled(y, t) {
                continue;
            }
            let acq_row = &acq_frame[y * nx..(y + 1) * nx];
            if w_pred == 0.0 {
                row.copy_from_slice(acq_row);
            } else {
                for (kp, ka) in row.iter_mut().zip(acq_row) {
                    *kp = *kp * w_pred + ka * w_acq;
                }
            }
        }
    }
    Ok(ifft2c(&k))
}
