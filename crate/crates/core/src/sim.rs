//! Retrospective experiment inputs: Gaussian variable-density Cartesian
//! masks and synthetic dynamic phantoms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::prox::{transform_adjoint, SparseTransform};
use crate::volume::{central_lines, DynamicImage, SamplingMask, Shape, ACCELERATION_TOLERANCE, CENTRAL_LINES};

/// Default Gaussian width as a fraction of `ny`.
pub const DEFAULT_SIGMA_FRAC: f64 = 0.15;

/// Options for a Gaussian variable-density phase-encode mask.
#[derive(Clone, Debug, PartialEq)]
pub struct VdMaskOptions {
    pub ny: usize,
    pub nt: usize,
    pub acceleration: f64,
    pub sigma_frac: f64,
    pub seed: u64,
    /// Reuse the first frame's pattern for every frame.
    pub frozen: bool,
}

impl VdMaskOptions {
    pub fn new(ny: usize, nt: usize, acceleration: f64) -> Self {
        VdMaskOptions {
            ny,
            nt,
            acceleration,
            sigma_frac: DEFAULT_SIGMA_FRAC,
            seed: 0,
            frozen: false,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sigma_frac(mut self, sigma_frac: f64) -> Self {
        self.sigma_frac = sigma_frac;
        self
    }

    pub fn frozen(mut self, frozen: bool) -> Self {
        self.frozen = frozen;
        self
    }

    pub fn generate(&self) -> Result<SamplingMask> {
        let VdMaskOptions { ny, nt, acceleration, sigma_frac, seed, frozen } = *self;
        if ny < 8 || nt == 0 {
            return Err(Error::InvalidArgument(format!("mask needs ny >= 8 and nt >= 1, got ny={ny} nt={nt}")));
        }
        if !(acceleration >= 1.0) || !acceleration.is_finite() {
            return Err(Error::InvalidArgument(format!("acceleration must be >= 1, got {acceleration}")));
        }
        if !(sigma_frac > 0.0) || !sigma_frac.is_finite() {
            return Err(Error::InvalidArgument(format!("sigma_frac must be positive, got {sigma_frac}")));
        }
        let budget = line_budget(ny, acceleration)?;

        let center = (ny / 2) as f64;
        let sigma = sigma_frac * ny as f64;
        let central = central_lines(ny);
        let candidates: Vec<usize> = (0..ny).filter(|y| !central.contains(y)).collect();
        // log of the Gaussian density, up to a constant
        let log_w: Vec<f64> = candidates
            .iter()
            .map(|&y| {
                let d = y as f64 - center;
                -0.5 * (d / sigma).powi(2)
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = vec![false; ny * nt];
        let mut keys: Vec<(f64, usize)> = Vec::with_capacity(candidates.len());
        let mut pattern: Vec<bool> = Vec::new();
        for t in 0..nt {
            if !(frozen && t > 0) {
                // Gumbel-top-k: the `budget - 4` largest perturbed log-weights
                // are a weighted sample without replacement.
                keys.clear();
                for (i, &lw) in log_w.iter().enumerate() {
                    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    keys.push((lw - (-u.ln()).ln(), candidates[i]));
                }
                keys.sort_by(|a, b| b.0.total_cmp(&a.0));
                pattern = vec![false; ny];
                for y in central.clone() {
                    pattern[y] = true;
                }
                for &(_, y) in keys.iter().take(budget - CENTRAL_LINES) {
                    pattern[y] = true;
                }
            }
            entries[t * ny..(t + 1) * ny].copy_from_slice(&pattern);
        }
        SamplingMask::with_nominal(ny, nt, entries, acceleration)
    }
}

/// Lines sampled per frame: the count whose achieved acceleration `ny / b`
/// is closest to the nominal one.
pub fn line_budget(ny: usize, acceleration: f64) -> Result<usize> {
    let ideal = ny as f64 / acceleration;
    let lo = ideal.floor().max(1.0) as usize;
    let hi = (lo + 1).min(ny);
    let err = |b: usize| (ny as f64 / b as f64 - acceleration).abs();
    let budget = if err(hi) <= err(lo) { hi } else { lo };
    if budget < CENTRAL_LINES {
        return Err(Error::InvalidArgument(format!(
            "acceleration {acceleration} leaves {budget} lines per frame for ny={ny}, fewer than the {CENTRAL_LINES} central lines"
        )));
    }
    let achieved = ny as f64 / budget as f64;
    if (achieved - acceleration).abs() > ACCELERATION_TOLERANCE * acceleration {
        return Err(Error::InvalidArgument(format!(
            "acceleration {acceleration} is not reachable within 10% with ny={ny} (closest {achieved:.3})"
        )));
    }
    Ok(budget)
}

/// Gaussian variable-density mask with per-frame random lines.
pub fn make_vd_mask(ny: usize, nt: usize, acceleration: f64, sigma_frac: f64, seed: u64) -> Result<SamplingMask> {
    VdMaskOptions::new(ny, nt, acceleration)
        .sigma_frac(sigma_frac)
        .seed(seed)
        .generate()
}

/// Synthetic phantom families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhantomKind {
    /// Piecewise-smooth frames with a sinusoidally dilating ring.
    BeatingRings,
    /// Casorati product of `rank` smooth spatial modes and `rank` temporal
    /// profiles, each with `sparsity` nonzero temporal Fourier bins.
    RankSparse { rank: usize, sparsity: usize },
}

impl PhantomKind {
    pub const NAMES: [&'static str; 2] = ["beating_rings", "rank_r_sparse"];
}

pub fn make_phantom(nx: usize, ny: usize, nt: usize, kind: PhantomKind, seed: u64) -> Result<DynamicImage> {
    if nx < 8 || ny < 8 || nt < 8 {
        return Err(Error::InvalidArgument(format!("phantom dims must be >= 8, got {nx}x{ny}x{nt}")));
    }
    let shape = Shape::new(nx, ny, nt);
    let mut img = match kind {
        PhantomKind::BeatingRings => beating_rings(shape, seed)?,
        PhantomKind::RankSparse { rank, sparsity } => rank_sparse(shape, rank, sparsity, seed)?,
    };
    let peak = img.max_abs();
    img.scale(1.0 / peak);
    Ok(img)
}

/// Smooth spatial phase ramp shared by the phantoms.
fn phase_ramp(shape: Shape, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let ax = rng.gen_range(-1.0..1.0) * std::f64::consts::PI;
    let ay = rng.gen_range(-1.0..1.0) * std::f64::consts::PI;
    let mut out = Vec::with_capacity(shape.frame_len());
    for y in 0..shape.ny {
        for x in 0..shape.nx {
            let phi = ax * x as f64 / shape.nx as f64 + ay * y as f64 / shape.ny as f64;
            out.push(Complex64::from_polar(1.0, phi));
        }
    }
    out
}

fn smoothstep_edge(d: f64, width: f64) -> f64 {
    // 1 inside (d < 0), 0 outside, smooth transition over `width`
    let s = (0.5 - d / width).clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

fn beating_rings(shape: Shape, seed: u64) -> Result<DynamicImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ramp = phase_ramp(shape, &mut rng);
    let (nx, ny, nt) = (shape.nx as f64, shape.ny as f64, shape.nt as f64);
    let (cx, cy) = (nx / 2.0 + rng.gen_range(-0.05..0.05) * nx, ny / 2.0 + rng.gen_range(-0.05..0.05) * ny);
    let scale = nx.min(ny);
    let edge = 0.02 * scale + 0.5;
    let body_a = 0.45 * nx;
    let body_b = 0.40 * ny;
    let r_base = 0.16 * scale;
    let r_swing = 0.05 * scale;
    let thickness = 0.07 * scale;

    DynamicImage::from_fn(shape, |x, y, t| {
        let phase = 2.0 * std::f64::consts::PI * t as f64 / nt;
        let radius = r_base + r_swing * phase.sin();
        let pool = 0.75 + 0.2 * phase.cos();
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        // torso ellipse with a gentle intensity gradient
        let body_d = ((dx / body_a).powi(2) + (dy / body_b).powi(2)).sqrt() - 1.0;
        let body = smoothstep_edge(body_d * body_a.min(body_b), edge) * (0.3 + 0.1 * dy / ny);
        let r = (dx * dx + dy * dy).sqrt();
        let ring = smoothstep_edge((r - radius).abs() - thickness / 2.0, edge);
        let blood = smoothstep_edge(r - (radius - thickness / 2.0), edge);
        let v = body + 0.6 * ring + pool * blood * (1.0 - ring);
        ramp[x + shape.nx * y] * v
    })
}

fn rank_sparse(shape: Shape, rank: usize, sparsity: usize, seed: u64) -> Result<DynamicImage> {
    let nt = shape.nt;
    if rank == 0 || sparsity == 0 {
        return Err(Error::InvalidArgument("rank and sparsity must be >= 1".into()));
    }
    if rank > nt || rank * sparsity > nt {
        return Err(Error::InvalidArgument(format!(
            "rank * sparsity must not exceed nt={nt}, got {rank} * {sparsity}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ramp = phase_ramp(shape, &mut rng);

    // Disjoint Fourier supports make the temporal profiles linearly
    // independent; the first profile always carries the DC bin.
    let mut bins: Vec<usize> = (1..nt).collect();
    for i in (1..bins.len()).rev() {
        bins.swap(i, rng.gen_range(0..=i));
    }
    bins.insert(0, 0);

    let (nx, ny) = (shape.nx as f64, shape.ny as f64);
    let mut modes: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    let mut profiles: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    for r in 0..rank {
        let blobs: Vec<(f64, f64, f64, f64)> = (0..4)
            .map(|_| {
                (
                    rng.gen_range(0.2..0.8) * nx,
                    rng.gen_range(0.2..0.8) * ny,
                    rng.gen_range(0.08..0.2) * nx.min(ny),
                    rng.gen_range(0.3..1.0),
                )
            })
            .collect();
        let mut mode = Vec::with_capacity(shape.frame_len());
        for y in 0..shape.ny {
            for x in 0..shape.nx {
                let v: f64 = blobs
                    .iter()
                    .map(|&(bx, by, w, a)| {
                        let d2 = (x as f64 - bx).powi(2) + (y as f64 - by).powi(2);
                        a * (-0.5 * d2 / (w * w)).exp()
                    })
                    .sum();
                mode.push(ramp[x + shape.nx * y] * v);
            }
        }
        modes.push(mode);

        let mut spectrum = vec![Complex64::new(0.0, 0.0); nt];
        for &b in &bins[r * sparsity..(r + 1) * sparsity] {
            spectrum[b] = Complex64::from_polar(rng.gen_range(0.5..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
        }
        profiles.push(spectrum);
    }

    // Build the Fourier-domain volume sum_r mode_r(x, y) * spectrum_r(f) and
    // bring it to time with the same unitary transform the solvers use.
    let m = shape.frame_len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); shape.len()];
    for (mode, spectrum) in modes.iter().zip(&profiles) {
        for (f, s) in spectrum.iter().enumerate() {
            if s.norm() == 0.0 {
                continue;
            }
            for (p, a) in mode.iter().enumerate() {
                coeffs[p + m * f] += a * s;
            }
        }
    }
    let coeffs = DynamicImage::from_vec(shape, coeffs)?;
    transform_adjoint(&coeffs, SparseTransform::TemporalFourier)
}
