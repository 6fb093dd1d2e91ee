//! Proximal and thresholding operators.
//!
//! The low-rank operators act on the Casorati matrix of a volume: singular
//! value thresholding in its soft form ([`ist_svt`], with a Schatten-`p`
//! exponent) and its hard-rank form ([`learned_svt`], keep the top `k`
//! singular values and drop the rest).

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::volume::{from_casorati, to_casorati, CasoratiView, DynamicImage};

/// Singular values below this fraction of the largest one count as zero when
/// determining rank.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Unitary sparsifying transform acting along the temporal axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SparseTransform {
    /// Unitary DFT along `t` (zero frequency at index 0).
    #[default]
    TemporalFourier,
    /// Orthonormal full-depth Haar wavelet along `t`; needs `nt` a power of two.
    TemporalHaar,
}

impl std::fmt::Display for SparseTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SparseTransform::TemporalFourier => write!(f, "temporal_fourier"),
            SparseTransform::TemporalHaar => write!(f, "temporal_haar"),
        }
    }
}

impl std::str::FromStr for SparseTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "temporal_fourier" | "fourier" => Ok(SparseTransform::TemporalFourier),
            "temporal_haar" | "haar" => Ok(SparseTransform::TemporalHaar),
            _ => Err(Error::InvalidConfig(format!(
                "unknown sparse transform `{s}` (expected temporal_fourier, temporal_haar)"
            ))),
        }
    }
}

impl SparseTransform {
    pub fn check(&self, nt: usize) -> Result<()> {
        if *self == SparseTransform::TemporalHaar && !nt.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "temporal Haar transform needs nt to be a power of two, got {nt}"
            )));
        }
        Ok(())
    }
}

/// `D x`.
pub fn transform_forward(x: &DynamicImage, d: SparseTransform) -> Result<DynamicImage> {
    apply_temporal(x, d, true)
}

/// `D^H z`.
pub fn transform_adjoint(z: &DynamicImage, d: SparseTransform) -> Result<DynamicImage> {
    apply_temporal(z, d, false)
}

fn apply_temporal(x: &DynamicImage, d: SparseTransform, forward: bool) -> Result<DynamicImage> {
    let shape = x.shape();
    d.check(shape.nt)?;
    let (m, nt) = (shape.frame_len(), shape.nt);
    let mut out = x.clone();
    let mut series = vec![Complex64::new(0.0, 0.0); nt];
    let mut work = vec![Complex64::new(0.0, 0.0); nt];

    let fft = (d == SparseTransform::TemporalFourier).then(|| {
        let mut planner = rustfft::FftPlanner::new();
        if forward {
            planner.plan_fft_forward(nt)
        } else {
            planner.plan_fft_inverse(nt)
        }
    });
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.as_ref().map_or(0, |f| f.get_inplace_scratch_len())];
    let scale = 1.0 / (nt as f64).sqrt();

    let data = out.data_mut();
    for p in 0..m {
        for (t, s) in series.iter_mut().enumerate() {
            *s = data[p + m * t];
        }
        match &fft {
            Some(f) => {
                f.process_with_scratch(&mut series, &mut scratch);
                series.iter_mut().for_each(|s| *s *= scale);
            }
            None if forward => haar_forward(&mut series, &mut work),
            None => haar_inverse(&mut series, &mut work),
        }
        for (t, s) in series.iter().enumerate() {
            data[p + m * t] = *s;
        }
    }
    Ok(out)
}

// Coefficient layout after the forward pass: [approx, detail_coarsest, ..., detail_finest].
fn haar_forward(v: &mut [Complex64], work: &mut [Complex64]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut len = v.len();
    while len > 1 {
        let half = len / 2;
        for i in 0..half {
            let (a, b) = (v[2 * i], v[2 * i + 1]);
            work[i] = (a + b) * s;
            work[half + i] = (a - b) * s;
        }
        v[..len].copy_from_slice(&work[..len]);
        len = half;
    }
}

fn haar_inverse(v: &mut [Complex64], work: &mut [Complex64]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut len = 2;
    while len <= v.len() {
        let half = len / 2;
        for i in 0..half {
            let (a, d) = (v[i], v[half + i]);
            work[2 * i] = (a + d) * s;
            work[2 * i + 1] = (a - d) * s;
        }
        v[..len].copy_from_slice(&work[..len]);
        len *= 2;
    }
}

/// Complex soft-thresholding `z / |z| * max(|z| - tau, 0)`, the proximal map
/// of `tau * ||.||_1`.
pub fn soft_threshold(z: &DynamicImage, tau: f64) -> Result<DynamicImage> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be >= 0, got {tau}")));
    }
    let mut out = z.clone();
    out.data_mut().iter_mut().for_each(|v| *v = soft_scalar(*v, tau));
    Ok(out)
}

pub(crate) fn soft_scalar(z: Complex64, tau: f64) -> Complex64 {
    let mag = z.norm();
    if mag <= tau || mag == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z * ((mag - tau) / mag)
    }
}

/// `||x||_1` over complex magnitudes.
pub fn l1_norm(x: &DynamicImage) -> f64 {
    x.data().iter().map(|z| z.norm()).sum()
}

/// Thin SVD of a Casorati matrix. Singular values are sorted descending.
pub struct CasoratiSvd {
    pub u: Mat<Complex64>,
    pub singular_values: Vec<f64>,
    pub v: Mat<Complex64>,
}

impl CasoratiSvd {
    pub fn new(m: &CasoratiView) -> Self {
        let svd = m.matrix().thin_svd().expect("SVD of a finite matrix converges");
        let s = svd.S().column_vector();
        let mut order: Vec<usize> = (0..s.nrows()).collect();
        order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
        let (u, v) = (svd.U(), svd.V());
        CasoratiSvd {
            u: Mat::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]),
            singular_values: order.iter().map(|&i| s[i].re).collect(),
            v: Mat::from_fn(v.nrows(), order.len(), |i, j| v[(i, order[j])]),
        }
    }

    /// `sum_i f(i, sigma_i) u_i v_i^H`. Only components with nonzero `f`
    /// enter the product.
    pub fn recompose(&self, mut f: impl FnMut(usize, f64) -> f64) -> Mat<Complex64> {
        let kept: Vec<(usize, f64)> = (0..self.singular_values.len())
            .map(|i| (i, f(i, self.singular_values[i])))
            .filter(|&(_, s)| s != 0.0)
            .collect();
        let us = Mat::from_fn(self.u.nrows(), kept.len(), |r, j| self.u[(r, kept[j].0)] * kept[j].1);
        let vh = Mat::from_fn(kept.len(), self.v.nrows(), |j, c| self.v[(c, kept[j].0)].conj());
        us * vh
    }
}

/// Singular values of the Casorati matrix, descending.
pub fn casorati_singular_values(x: &DynamicImage) -> Vec<f64> {
    let mut s = to_casorati(x)
        .into_matrix()
        .singular_values()
        .expect("SVD of a finite matrix converges");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank of the Casorati matrix (see [`RANK_TOLERANCE`]).
pub fn casorati_rank(x: &DynamicImage) -> usize {
    let s = casorati_singular_values(x);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > RANK_TOLERANCE * top).count()
}

/// Sum of singular values of the Casorati matrix.
pub fn nuclear_norm(x: &DynamicImage) -> f64 {
    casorati_singular_values(x).iter().sum()
}

/// Iterative singular value thresholding step: each singular value becomes
/// `(sigma - (lambda2 / rho) * sigma^(p - 1))_+`.
///
/// With `p = 1` this is the proximal map of `(lambda2 / rho) * ||.||_*`.
pub fn ist_svt(x: &DynamicImage, lambda2: f64, rho: f64, p: f64) -> Result<DynamicImage> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    if !(lambda2 >= 0.0) {
        return Err(Error::InvalidArgument(format!("lambda2 must be >= 0, got {lambda2}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("Schatten exponent p must be in (0, 1], got {p}")));
    }
    if lambda2 == 0.0 {
        return Ok(x.clone());
    }
    let tau = lambda2 / rho;
    let svd = CasoratiSvd::new(&to_casorati(x));
    let shrunk = svd.recompose(|_, s| {
        if s <= 0.0 {
            return 0.0;
        }
        let w = if p == 1.0 { 1.0 } else { s.powf(p - 1.0) };
        (s - tau * w).max(0.0)
    });
    from_casorati(&CasoratiView::new(shrunk), x.shape())
}

/// Hard-rank thresholding `U H_k(Sigma) V^H`: the top `k` singular values are
/// kept exactly and the remaining ones are set to zero.
pub fn learned_svt(x: &DynamicImage, k: usize) -> Result<DynamicImage> {
    let shape = x.shape();
    if k == 0 || k > shape.nt {
        return Err(Error::InvalidArgument(format!(
            "rank k must be in 1..={}, got {k}",
            shape.nt
        )));
    }
    if k >= shape.nt.min(shape.frame_len()) {
        return Ok(x.clone());
    }
    let svd = CasoratiSvd::new(&to_casorati(x));
    let kept = svd.recompose(|i, s| if i < k { s } else { 0.0 });
    from_casorati(&CasoratiView::new(kept), shape)
}

/// Applies `D^H soft(D r, tau)`.
pub fn sparse_prox(r: &DynamicImage, d: SparseTransform, tau: f64) -> Result<DynamicImage> {
    let coeffs = transform_forward(r, d)?;
    transform_adjoint(&soft_threshold(&coeffs, tau)?, d)
}

/// `||D x||_1`.
pub fn sparse_norm(x: &DynamicImage, d: SparseTransform) -> Result<f64> {
    Ok(l1_norm(&transform_forward(x, d)?))
}
