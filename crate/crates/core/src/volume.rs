//! Space-time volumes, k-space containers, Cartesian sampling masks and the
//! Casorati matrix view.
//!
//! Every volume is stored in `[x, y, t]` order with `x` varying fastest, so
//! frame `t` is the contiguous slice `data[t * nx * ny..(t + 1) * nx * ny]`.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Volume shape `(nx, ny, nt)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
}

impl Shape {
    pub fn new(nx: usize, ny: usize, nt: usize) -> Self {
        Shape { nx, ny, nt }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pixels per frame.
    pub fn frame_len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, x: usize, y: usize, t: usize) -> usize {
        x + self.nx * (y + self.ny * t)
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.nx, self.ny, self.nt)
    }
}

/// Complex-valued space-time volume.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicImage {
    shape: Shape,
    data: Vec<Complex64>,
}

impl DynamicImage {
    pub fn zeros(shape: Shape) -> Result<Self> {
        check_shape(shape)?;
        Ok(DynamicImage {
            shape,
            data: vec![Complex64::new(0.0, 0.0); shape.len()],
        })
    }

    pub fn from_vec(shape: Shape, data: Vec<Complex64>) -> Result<Self> {
        check_shape(shape)?;
        if data.len() != shape.len() {
            return Err(Error::dims(
                format!("{} elements for {shape}", shape.len()),
                format!("{} elements", data.len()),
            ));
        }
        Ok(DynamicImage { shape, data })
    }

    /// Builds a volume by evaluating `f(x, y, t)` at every voxel.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(usize, usize, usize) -> Complex64) -> Result<Self> {
        check_shape(shape)?;
        let mut data = Vec::with_capacity(shape.len());
        for t in 0..shape.nt {
            for y in 0..shape.ny {
                for x in 0..shape.nx {
                    data.push(f(x, y, t));
                }
            }
        }
        Ok(DynamicImage { shape, data })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize, t: usize) -> Complex64 {
        self.data[self.shape.index(x, y, t)]
    }

    pub fn frame(&self, t: usize) -> &[Complex64] {
        let n = self.shape.frame_len();
        &self.data[t * n..(t + 1) * n]
    }

    pub fn frames_mut(&mut self) -> std::slice::ChunksExactMut<'_, Complex64> {
        let n = self.shape.frame_len();
        self.data.chunks_exact_mut(n)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Euclidean norm over all voxels.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest voxel magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `<self, other> = sum conj(self) * other`.
    pub fn inner(&self, other: &DynamicImage) -> Result<Complex64> {
        self.expect_shape(other.shape)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &DynamicImage) -> Result<()> {
        self.expect_shape(other.shape)?;
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += b * alpha);
        Ok(())
    }

    /// `self - other` as a new volume.
    pub fn sub(&self, other: &DynamicImage) -> Result<DynamicImage> {
        self.expect_shape(other.shape)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(DynamicImage { shape: self.shape, data })
    }

    /// `self + other` as a new volume.
    pub fn add(&self, other: &DynamicImage) -> Result<DynamicImage> {
        self.expect_shape(other.shape)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(DynamicImage { shape: self.shape, data })
    }

    /// Magnitude of every voxel, same layout.
    pub fn magnitude(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm()).collect()
    }

    pub(crate) fn expect_shape(&self, shape: Shape) -> Result<()> {
        if self.shape != shape {
            return Err(Error::dims(shape, self.shape));
        }
        Ok(())
    }
}

fn check_shape(shape: Shape) -> Result<()> {
    if shape.nx == 0 || shape.ny == 0 || shape.nt == 0 {
        return Err(Error::InvalidArgument(format!(
            "volume dimensions must be at least 1, got {shape}"
        )));
    }
    Ok(())
}

/// Binary phase-encode sampling pattern over `(y, t)`.
///
/// The frequency-encode axis is fully sampled, so the mask is constant along
/// `x`. The four central phase-encode lines (`ny/2 - 2 ..= ny/2 + 1`) are
/// always sampled.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingMask {
    ny: usize,
    nt: usize,
    entries: Vec<bool>,
    acceleration: f64,
}

/// Number of guaranteed central phase-encode lines.
pub const CENTRAL_LINES: usize = 4;

/// Relative tolerance between nominal and achieved acceleration.
pub const ACCELERATION_TOLERANCE: f64 = 0.10;

impl SamplingMask {
    /// Builds a mask from `entries[y + ny * t]`. The nominal acceleration is
    /// set to the achieved one.
    pub fn from_entries(ny: usize, nt: usize, entries: Vec<bool>) -> Result<Self> {
        let mut mask = SamplingMask {
            ny,
            nt,
            entries,
            acceleration: 1.0,
        };
        mask.validate_layout()?;
        mask.acceleration = mask.achieved_acceleration();
        Ok(mask)
    }

    /// Builds a mask with a nominal acceleration, which must lie within
    /// [`ACCELERATION_TOLERANCE`] of the achieved one.
    pub fn with_nominal(ny: usize, nt: usize, entries: Vec<bool>, acceleration: f64) -> Result<Self> {
        let mut mask = SamplingMask::from_entries(ny, nt, entries)?;
        if !(acceleration >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "acceleration must be >= 1, got {acceleration}"
            )));
        }
        let achieved = mask.acceleration;
        if (achieved - acceleration).abs() > ACCELERATION_TOLERANCE * acceleration {
            return Err(Error::InvalidArgument(format!(
                "achieved acceleration {achieved:.3} is not within 10% of nominal {acceleration}"
            )));
        }
        mask.acceleration = acceleration;
        Ok(mask)
    }

    /// Every line sampled in every frame.
    pub fn full(ny: usize, nt: usize) -> Result<Self> {
        SamplingMask::from_entries(ny, nt, vec![true; ny * nt])
    }

    /// Only the central lines sampled.
    pub fn central_only(ny: usize, nt: usize) -> Result<Self> {
        let mut entries = vec![false; ny * nt];
        let lines = central_lines(ny);
        for t in 0..nt {
            for y in lines.clone() {
                entries[y + ny * t] = true;
            }
        }
        SamplingMask::from_entries(ny, nt, entries)
    }

    fn validate_layout(&self) -> Result<()> {
        if self.ny < CENTRAL_LINES || self.nt == 0 {
            return Err(Error::InvalidArgument(format!(
                "mask needs ny >= {CENTRAL_LINES} and nt >= 1, got ny={} nt={}",
                self.ny, self.nt
            )));
        }
        if self.entries.len() != self.ny * self.nt {
            return Err(Error::dims(
                format!("{} mask entries", self.ny * self.nt),
                format!("{} entries", self.entries.len()),
            ));
        }
        for t in 0..self.nt {
            for y in central_lines(self.ny) {
                if !self.entries[y + self.ny * t] {
                    return Err(Error::InvalidArgument(format!(
                        "central phase-encode line {y} is not sampled in frame {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    pub fn is_sampled(&self, y: usize, t: usize) -> bool {
        self.entries[y + self.ny * t]
    }

    /// Nominal acceleration factor.
    pub fn acceleration(&self) -> f64 {
        self.acceleration
    }

    pub fn sampled_count(&self) -> usize {
        self.entries.iter().filter(|&&e| e).count()
    }

    /// `ny * nt / sampled lines`.
    pub fn achieved_acceleration(&self) -> f64 {
        (self.ny * self.nt) as f64 / self.sampled_count() as f64
    }

    /// Checks that the mask matches the `(y, t)` extent of `shape`.
    pub fn check_shape(&self, shape: Shape) -> Result<()> {
        if shape.ny != self.ny || shape.nt != self.nt {
            return Err(Error::dims(
                format!("mask ny={} nt={}", self.ny, self.nt),
                format!("volume {shape}"),
            ));
        }
        Ok(())
    }
}

/// Indices of the always-sampled central phase-encode lines.
pub fn central_lines(ny: usize) -> std::ops::Range<usize> {
    let c = ny / 2;
    c - CENTRAL_LINES / 2..c + CENTRAL_LINES / 2
}

/// Undersampled k-space together with its sampling pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct KSpaceData {
    data: DynamicImage,
    mask: SamplingMask,
}

impl KSpaceData {
    pub fn new(data: DynamicImage, mask: SamplingMask) -> Result<Self> {
        mask.check_shape(data.shape())?;
        Ok(KSpaceData { data, mask })
    }

    pub fn data(&self) -> &DynamicImage {
        &self.data
    }

    pub fn mask(&self) -> &SamplingMask {
        &self.mask
    }

    pub fn shape(&self) -> Shape {
        self.data.shape()
    }

    pub fn into_parts(self) -> (DynamicImage, SamplingMask) {
        (self.data, self.mask)
    }
}

/// The `(nx * ny) x nt` space-time matrix whose column `t` is frame `t`
/// flattened with `x` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct CasoratiView {
    matrix: Mat<Complex64>,
}

impl CasoratiView {
    pub fn new(matrix: Mat<Complex64>) -> Self {
        CasoratiView { matrix }
    }

    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat<Complex64> {
        self.matrix
    }
}

pub fn to_casorati(img: &DynamicImage) -> CasoratiView {
    let s = img.shape();
    let m = s.frame_len();
    let data = img.data();
    CasoratiView::new(Mat::from_fn(m, s.nt, |i, j| data[i + m * j]))
}

pub fn from_casorati(m: &CasoratiView, shape: Shape) -> Result<DynamicImage> {
    let mat = m.matrix();
    if mat.nrows() != shape.frame_len() || mat.ncols() != shape.nt {
        return Err(Error::dims(
            format!("{}x{} Casorati matrix for {shape}", shape.frame_len(), shape.nt),
            format!("{}x{}", mat.nrows(), mat.ncols()),
        ));
    }
    let mut data = Vec::with_capacity(shape.len());
    for j in 0..shape.nt {
        data.extend_from_slice(mat.col_as_slice(j));
    }
    DynamicImage::from_vec(shape, data)
}
