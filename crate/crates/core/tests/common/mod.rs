//! Reference implementations used as test oracles. Nothing here calls into
//! the library's FFT, transform or SVD code.

#![allow(dead_code)]

use std::f64::consts::PI;

use dynlr::volume::{DynamicImage, Shape};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_volume(shape: Shape, seed: u64) -> DynamicImage {
    let mut r = rng(seed);
    DynamicImage::from_fn(shape, |_, _, _| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).unwrap()
}

pub fn max_abs_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `||a - b|| / max(||b||, tiny)`.
pub fn rel_diff(a: &DynamicImage, b: &DynamicImage) -> f64 {
    let num: f64 = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.data().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    num / den.max(1e-300)
}

/// Centered unitary 1-D DFT by direct summation:
/// `X[k] = 1/sqrt(n) sum_m x[m] exp(-2 pi i (k - c)(m - c) / n)`, `c = n / 2`.
pub fn naive_dft_centered(x: &[C], inverse: bool) -> Vec<C> {
    let n = x.len();
    let cc = (n / 2) as f64;
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..n)
        .map(|k| {
            let mut acc = C::new(0.0, 0.0);
            for (m, v) in x.iter().enumerate() {
                let ang = sign * 2.0 * PI * (k as f64 - cc) * (m as f64 - cc) / n as f64;
                acc += v * C::from_polar(1.0, ang);
            }
            acc / (n as f64).sqrt()
        })
        .collect()
}

/// Unitary 1-D DFT with the zero frequency at index 0.
pub fn naive_dft(x: &[C], inverse: bool) -> Vec<C> {
    let n = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..n)
        .map(|k| {
            let mut acc = C::new(0.0, 0.0);
            for (m, v) in x.iter().enumerate() {
                acc += v * C::from_polar(1.0, sign * 2.0 * PI * (k * m) as f64 / n as f64);
            }
            acc / (n as f64).sqrt()
        })
        .collect()
}

/// Per-frame centered 2-D DFT via row/column direct sums.
pub fn naive_fft2c(img: &DynamicImage, inverse: bool) -> DynamicImage {
    let s = img.shape();
    let mut out = img.clone();
    for t in 0..s.nt {
        for y in 0..s.ny {
            let row: Vec<C> = (0..s.nx).map(|x| out.get(x, y, t)).collect();
            let tr = naive_dft_centered(&row, inverse);
            for x in 0..s.nx {
                out.data_mut()[s.index(x, y, t)] = tr[x];
            }
        }
        for x in 0..s.nx {
            let col: Vec<C> = (0..s.ny).map(|y| out.get(x, y, t)).collect();
            let tr = naive_dft_centered(&col, inverse);
            for y in 0..s.ny {
                out.data_mut()[s.index(x, y, t)] = tr[y];
            }
        }
    }
    out
}

/// Applies `f` to the temporal series of every pixel.
pub fn map_temporal(img: &DynamicImage, f: impl Fn(&[C]) -> Vec<C>) -> DynamicImage {
    let s = img.shape();
    let mut out = img.clone();
    for y in 0..s.ny {
        for x in 0..s.nx {
            let series: Vec<C> = (0..s.nt).map(|t| img.get(x, y, t)).collect();
            for (t, v) in f(&series).into_iter().enumerate() {
                out.data_mut()[s.index(x, y, t)] = v;
            }
        }
    }
    out
}

/// Orthonormal Haar analysis by explicit basis projection. Coefficient 0 is
/// the mean (scaled), then details from the coarsest to the finest level.
pub fn naive_haar(x: &[C]) -> Vec<C> {
    let n = x.len();
    let mut basis: Vec<Vec<f64>> = vec![vec![1.0 / (n as f64).sqrt(); n]];
    let mut block = n;
    while block > 1 {
        let half = block / 2;
        let amp = 1.0 / (block as f64).sqrt();
        for start in (0..n).step_by(block) {
            let mut v = vec![0.0; n];
            for (i, e) in v.iter_mut().enumerate().skip(start).take(block) {
                *e = if i < start + half { amp } else { -amp };
            }
            basis.push(v);
        }
        block = half;
    }
    basis
        .iter()
        .map(|b| b.iter().zip(x).map(|(w, v)| v * *w).sum())
        .collect()
}

/// Casorati matrix as a list of columns (one per frame, x fastest).
pub fn casorati_columns(img: &DynamicImage) -> Vec<Vec<C>> {
    let s = img.shape();
    (0..s.nt)
        .map(|t| {
            let mut col = Vec::with_capacity(s.frame_len());
            for y in 0..s.ny {
                for x in 0..s.nx {
                    col.push(img.get(x, y, t));
                }
            }
            col
        })
        .collect()
}

pub fn from_columns(cols: &[Vec<C>], shape: Shape) -> DynamicImage {
    DynamicImage::from_fn(shape, |x, y, t| cols[t][x + shape.nx * y]).unwrap()
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Thin SVD of a tall matrix given by columns, by one-sided (Hestenes)
/// Jacobi rotations. Returns `(u_columns, sigma, v_columns)` with sigma
/// sorted descending and `A = U diag(sigma) V^H`.
pub fn jacobi_svd(cols: &[Vec<C>]) -> (Vec<Vec<C>>, Vec<f64>, Vec<Vec<C>>) {
    let n = cols.len();
    let m = cols[0].len();
    assert!(m >= n, "oracle SVD expects a tall matrix");
    let mut a: Vec<Vec<C>> = cols.to_vec();
    let mut v: Vec<Vec<C>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&a[p], &a[p]).re;
                let beta = dot(&a[q], &a[q]).re;
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                // Rotate column q by the phase of gamma so the pair's inner
                // product becomes real, then apply a real Jacobi rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut a, &mut v] {
                    let (left, right) = mat.split_at_mut(q);
                    let (cp, cq) = (&mut left[p], &mut right[0]);
                    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
                        let wq = *xq * phase.conj();
                        let np = *xp * cs - wq * sn;
                        let nq = *xp * sn + wq * cs;
                        *xp = np;
                        *xq = nq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = a.iter().map(|col| dot(col, col).re.sqrt()).collect();
    order.sort_by(|&i, &j| sig[j].total_cmp(&sig[i]));
    let mut u = Vec::new();
    let mut s = Vec::new();
    let mut vv = Vec::new();
    for i in order {
        let sigma = sig[i];
        u.push(a[i].iter().map(|z| if sigma > 0.0 { z / sigma } else { c(0.0, 0.0) }).collect());
        s.push(sigma);
        vv.push(v[i].clone());
    }
    (u, s, vv)
}

/// Reassembles `sum_i f(i, sigma_i) u_i v_i^H` from the oracle SVD of the
/// Casorati matrix of `img`.
pub fn svd_map(img: &DynamicImage, f: impl Fn(usize, f64) -> f64) -> DynamicImage {
    let shape = img.shape();
    let (u, s, v) = jacobi_svd(&casorati_columns(img));
    let m = shape.frame_len();
    let mut cols = vec![vec![c(0.0, 0.0); m]; shape.nt];
    for i in 0..s.len() {
        let w = f(i, s[i]);
        if w == 0.0 {
            continue;
        }
        for (t, col) in cols.iter_mut().enumerate() {
            let vt = v[i][t].conj() * w;
            for (r, e) in col.iter_mut().enumerate() {
                *e += u[i][r] * vt;
            }
        }
    }
    from_columns(&cols, shape)
}

pub fn oracle_singular_values(img: &DynamicImage) -> Vec<f64> {
    jacobi_svd(&casorati_columns(img)).1
}

pub fn naive_mse(a: &DynamicImage, b: &DynamicImage) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.data().len() {
        let d = a.data()[i] - b.data()[i];
        acc += d.re * d.re + d.im * d.im;
    }
    acc
}

pub fn naive_psnr(reference: &DynamicImage, rec: &DynamicImage) -> f64 {
    let mut peak: f64 = 0.0;
    for z in reference.data() {
        peak = peak.max(z.norm());
    }
    let n = reference.data().len() as f64;
    20.0 * (peak * n.sqrt() / naive_mse(reference, rec).sqrt()).log10()
}

/// SSIM by direct 2-D window sums (no separable filtering), magnitude
/// frames, valid windows, mean over windows then over frames.
pub fn naive_ssim(reference: &DynamicImage, rec: &DynamicImage) -> f64 {
    let s = reference.shape();
    let (win, sigma) = (11usize, 1.5f64);
    let mut w = vec![vec![0.0; win]; win];
    let mut total = 0.0;
    for (i, row) in w.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            *e = (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp();
            total += *e;
        }
    }
    let range = reference.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let c1 = (0.01 * range).powi(2);
    let c2 = (0.03 * range).powi(2);
    let mut frames = 0.0;
    for t in 0..s.nt {
        let mut acc = 0.0;
        let mut count = 0.0;
        for y0 in 0..=s.ny - win {
            for x0 in 0..=s.nx - win {
                let (mut ma, mut mb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for j in 0..win {
                    for i in 0..win {
                        let wt = w[j][i] / total;
                        let a = reference.get(x0 + i, y0 + j, t).norm();
                        let b = rec.get(x0 + i, y0 + j, t).norm();
                        ma += wt * a;
                        mb += wt * b;
                        saa += wt * a * a;
                        sbb += wt * b * b;
                        sab += wt * a * b;
                    }
                }
                let (va, vb, cov) = (saa - ma * ma, sbb - mb * mb, sab - ma * mb);
                acc += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                count += 1.0;
            }
        }
        frames += acc / count;
    }
    frames / s.nt as f64
}

/// Minimises `|u - z|^2 / 2 + tau |u|` by brute force: a coarse cartesian
/// grid covering the disc of radius `|z| + 1`, then a finer grid around the
/// best coarse point.
pub fn grid_argmin(z: C, tau: f64) -> C {
    let cost = |u: C| 0.5 * (u - z).norm_sqr() + tau * u.norm();
    let mut best = (c(0.0, 0.0), cost(c(0.0, 0.0)));
    let r = z.norm() + 1.0;
    let steps = 800;
    for i in 0..=steps {
        for j in 0..=steps {
            let u = c(-r + 2.0 * r * i as f64 / steps as f64, -r + 2.0 * r * j as f64 / steps as f64);
            let v = cost(u);
            if v < best.1 {
                best = (u, v);
            }
        }
    }
    let (centre, h) = (best.0, 2.0 * r / steps as f64);
    for i in -200..=200 {
        for j in -200..=200 {
            let u = centre + c(h * i as f64 / 100.0, h * j as f64 / 100.0);
            let v = cost(u);
            if v < best.1 {
                best = (u, v);
            }
        }
    }
    best.0
}

/// `A^H (A x - y)` with the direct-summation DFT; `sampled(y, t)` is the mask.
pub fn naive_gradient(x: &DynamicImage, y: &DynamicImage, sampled: &dyn Fn(usize, usize) -> bool) -> DynamicImage {
    let s = x.shape();
    let k = naive_fft2c(x, false);
    let resid = DynamicImage::from_fn(s, |xx, yy, t| {
        if sampled(yy, t) {
            k.get(xx, yy, t) - y.get(xx, yy, t)
        } else {
            c(0.0, 0.0)
        }
    })
    .unwrap();
    naive_fft2c(&resid, true)
}

/// One proximal-gradient step `D^H soft(D (x - eta A^H(Ax - y)), tau)` with
/// the temporal DFT as `D`, all by direct summation.
pub fn naive_prox_gradient_step(
    x: &DynamicImage,
    y: &DynamicImage,
    sampled: &dyn Fn(usize, usize) -> bool,
    eta: f64,
    tau: f64,
) -> DynamicImage {
    let g = naive_gradient(x, y, sampled);
    let r = DynamicImage::from_fn(x.shape(), |xx, yy, t| x.get(xx, yy, t) - g.get(xx, yy, t) * eta).unwrap();
    if tau == 0.0 {
        return r;
    }
    let coeffs = map_temporal(&r, |s| naive_dft(s, false));
    let shrunk = DynamicImage::from_fn(x.shape(), |xx, yy, t| {
        let z = coeffs.get(xx, yy, t);
        let m = z.norm();
        if m <= tau {
            c(0.0, 0.0)
        } else {
            z * ((m - tau) / m)
        }
    })
    .unwrap();
    map_temporal(&shrunk, |s| naive_dft(s, true))
}
