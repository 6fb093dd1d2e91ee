//! `.hdr`/`.dat` volume files.
//!
//! A volume stored under base path `p` is two files:
//!
//! ```text
//! p.hdr   DYNLR1
//!         dims <nx> <ny> <nt>
//!         dtype c64le
//! p.dat   little-endian f32 pairs (real, imaginary), x fastest, then y, then t
//! ```
//!
//! Masks are stored as volumes of shape `1 x ny x nt` holding `0` or `1`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::volume::{DynamicImage, SamplingMask, Shape};

pub const MAGIC: &str = "DYNLR1";
pub const DTYPE: &str = "c64le";

/// `(base.hdr, base.dat)`.
pub fn file_pair(base: &Path) -> (PathBuf, PathBuf) {
    let mut hdr = base.as_os_str().to_owned();
    hdr.push(".hdr");
    let mut dat = base.as_os_str().to_owned();
    dat.push(".dat");
    (PathBuf::from(hdr), PathBuf::from(dat))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format { path: path.to_path_buf(), reason: reason.into() }
}

pub fn write_cplx(base: &Path, vol: &DynamicImage) -> Result<()> {
    let (hdr, dat) = file_pair(base);
    let s = vol.shape();
    let header = format!("{MAGIC}\ndims {} {} {}\ndtype {DTYPE}\n", s.nx, s.ny, s.nt);
    fs::write(&hdr, header).map_err(io_err(&hdr))?;
    let mut bytes = Vec::with_capacity(vol.data().len() * 8);
    for z in vol.data() {
        bytes.extend_from_slice(&(z.re as f32).to_le_bytes());
        bytes.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    fs::write(&dat, bytes).map_err(io_err(&dat))
}

/// Parses a header file, returning the declared shape.
pub fn read_header(hdr: &Path) -> Result<Shape> {
    let text = fs::read_to_string(hdr).map_err(io_err(hdr))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some(MAGIC) => {}
        Some(other) => return Err(format_err(hdr, format!("unknown magic `{other}`, expected {MAGIC}"))),
        None => return Err(format_err(hdr, "empty header")),
    }
    let mut dims = None;
    let mut dtype = None;
    for line in lines {
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("dims") => {
                let vals: Vec<usize> = fields
                    .map(|f| f.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| format_err(hdr, format!("malformed dims line `{line}`")))?;
                if vals.len() != 3 || vals.contains(&0) {
                    return Err(format_err(hdr, format!("dims line needs three positive sizes, got `{line}`")));
                }
                dims = Some(Shape::new(vals[0], vals[1], vals[2]));
            }
            Some("dtype") => dtype = fields.next().map(str::to_owned),
            _ => return Err(format_err(hdr, format!("unexpected header line `{line}`"))),
        }
    }
    let shape = dims.ok_or_else(|| format_err(hdr, "missing dims line"))?;
    match dtype.as_deref() {
        Some(DTYPE) => Ok(shape),
        Some(other) => Err(format_err(hdr, format!("unsupported dtype `{other}`"))),
        None => Err(format_err(hdr, "missing dtype line")),
    }
}

pub fn read_cplx(base: &Path) -> Result<DynamicImage> {
    let (hdr, dat) = file_pair(base);
    let shape = read_header(&hdr)?;
    let bytes = fs::read(&dat).map_err(io_err(&dat))?;
    let expected = shape.len() as u64 * 8;
    if bytes.len() as u64 != expected {
        return Err(Error::SizeMismatch { path: dat, expected, actual: bytes.len() as u64 });
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    DynamicImage::from_vec(shape, data)
}

pub fn write_mask(base: &Path, mask: &SamplingMask) -> Result<()> {
    let shape = Shape::new(1, mask.ny(), mask.nt());
    let data = mask
        .entries()
        .iter()
        .map(|&e| Complex64::new(if e { 1.0 } else { 0.0 }, 0.0))
        .collect();
    write_cplx(base, &DynamicImage::from_vec(shape, data)?)
}

pub fn read_mask(base: &Path) -> Result<SamplingMask> {
    let vol = read_cplx(base)?;
    let (_, dat) = file_pair(base);
    let s = vol.shape();
    if s.nx != 1 {
        return Err(format_err(&dat, format!("mask volumes must have nx = 1, got {}", s.nx)));
    }
    let entries = vol
        .data()
        .iter()
        .map(|z| match (z.re, z.im) {
            (v, 0.0) if v == 1.0 => Ok(true),
            (v, 0.0) if v == 0.0 => Ok(false),
            _ => Err(format_err(&dat, format!("mask entries must be 0 or 1, found {z}"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    SamplingMask::from_entries(s.ny, s.nt, entries).map_err(|e| format_err(&dat, e.to_string()))
}
