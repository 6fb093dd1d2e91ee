use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::operators::{encode_adjoint, DcMode};
use crate::prox::SparseTransform;
use crate::volume::{KSpaceData, Shape};

/// Where the low-rank module sits inside an ISTA-LR iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Placement {
    /// Before the sparse step.
    L1,
    /// After the sparse step, before data consistency.
    #[default]
    L2,
    /// After data consistency.
    L3,
}

impl std::fmt::Display for Placement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Placement::L1 => "l1",
            Placement::L2 => "l2",
            Placement::L3 => "l3",
        })
    }
}

impl std::str::FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Placement::L1),
            "l2" => Ok(Placement::L2),
            "l3" => Ok(Placement::L3),
            _ => Err(Error::InvalidConfig(format!("unknown placement `{s}` (expected l1, l2, l3)"))),
        }
    }
}

/// Low-rank step of the SLR iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum LrMode {
    /// Keep the top `rank_k` singular values.
    #[default]
    Hard,
    /// Soft singular value thresholding at `lambda2 / rho` with exponent `p`.
    Soft,
}

impl std::fmt::Display for LrMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LrMode::Hard => "hard",
            LrMode::Soft => "soft",
        })
    }
}

impl std::str::FromStr for LrMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hard" => Ok(LrMode::Hard),
            "soft" => Ok(LrMode::Soft),
            _ => Err(Error::InvalidConfig(format!("unknown low-rank mode `{s}` (expected hard, soft)"))),
        }
    }
}

/// Input of the SLR low-rank step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SvtInput {
    /// `t^n = T(x^n + beta^(n-1))`, the minimizer of the `t` subproblem.
    #[default]
    XPlusBeta,
    /// `t^n = T(x^n)`.
    X,
}

impl std::fmt::Display for SvtInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SvtInput::XPlusBeta => "x_plus_beta",
            SvtInput::X => "x",
        })
    }
}

impl std::str::FromStr for SvtInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x_plus_beta" => Ok(SvtInput::XPlusBeta),
            "x" => Ok(SvtInput::X),
            _ => Err(Error::InvalidConfig(format!("unknown svt_input `{s}` (expected x_plus_beta, x)"))),
        }
    }
}

/// Hyper-parameters shared by all solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Sparse weight.
    pub lambda1: f64,
    /// Low-rank weight.
    pub lambda2: f64,
    /// Penalty on `||t - x||^2`.
    pub rho: f64,
    /// Multiplier update rate.
    pub eta1: f64,
    /// Gradient step size.
    pub eta2: f64,
    /// Rank kept by the hard-rank operator.
    pub rank_k: usize,
    /// Schatten exponent of the soft low-rank step.
    pub p: f64,
    pub iterations: usize,
    pub placement: Placement,
    pub dc_mode: DcMode,
    pub lr_mode: LrMode,
    pub transform: SparseTransform,
    pub svt_input: SvtInput,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda1: 1e-3,
            lambda2: 1e-3,
            rho: 0.1,
            eta1: 1.0,
            eta2: 1.0,
            rank_k: 4,
            p: 1.0,
            iterations: 8,
            placement: Placement::L2,
            dc_mode: DcMode::Replace,
            lr_mode: LrMode::Hard,
            transform: SparseTransform::TemporalFourier,
            svt_input: SvtInput::XPlusBeta,
        }
    }
}

/// Keys accepted by [`SolverConfig::set`], in file order.
pub const CONFIG_KEYS: [&str; 13] = [
    "lambda1",
    "lambda2",
    "rho",
    "eta1",
    "eta2",
    "rank_k",
    "p",
    "iterations",
    "placement",
    "dc",
    "lr_mode",
    "transform",
    "svt_input",
];

impl SolverConfig {
    /// Defaults with `lambda1` and `lambda2` set to `1e-3` of the peak
    /// zero-filled magnitude.
    pub fn default_for(y: &KSpaceData) -> Self {
        let peak = encode_adjoint(y).max_abs();
        let peak = if peak > 0.0 { peak } else { 1.0 };
        SolverConfig {
            lambda1: 1e-3 * peak,
            lambda2: 1e-3 * peak,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self, shape: Shape) -> Result<()> {
        let nonneg = [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("rho", self.rho),
            ("eta1", self.eta1),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be a finite value >= 0, got {v}")));
            }
        }
        if !(self.eta2 > 0.0) || !self.eta2.is_finite() {
            return Err(Error::InvalidConfig(format!("eta2 must be positive, got {}", self.eta2)));
        }
        if self.rank_k == 0 || self.rank_k > shape.nt {
            return Err(Error::InvalidConfig(format!(
                "rank_k must be in 1..={} (nt), got {}",
                shape.nt, self.rank_k
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidConfig(format!("p must be in (0, 1], got {}", self.p)));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be >= 1".into()));
        }
        if let DcMode::Weighted(nu) = self.dc_mode {
            if !(nu >= 0.0) || !nu.is_finite() {
                return Err(Error::InvalidConfig(format!("weighted DC needs finite nu >= 0, got {nu}")));
            }
        }
        self.transform
            .check(shape.nt)
            .map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Sets one field from its textual key and value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad value `{value}` for {key}")))
        }
        match key {
            "lambda1" => self.lambda1 = num(key, value)?,
            "lambda2" => self.lambda2 = num(key, value)?,
            "rho" => self.rho = num(key, value)?,
            "eta1" => self.eta1 = num(key, value)?,
            "eta2" => self.eta2 = num(key, value)?,
            "rank_k" => self.rank_k = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "iterations" => self.iterations = num(key, value)?,
            "placement" => self.placement = value.parse()?,
            "dc" => self.dc_mode = value.parse()?,
            "lr_mode" => self.lr_mode = value.parse()?,
            "transform" => self.transform = value.parse()?,
            "svt_input" => self.svt_input = value.parse()?,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown config key `{key}` (expected one of {})",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Flat `key=value` text, one entry per line.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let pairs: [(&str, String); 13] = [
            ("lambda1", fmt_f64(self.lambda1)),
            ("lambda2", fmt_f64(self.lambda2)),
            ("rho", fmt_f64(self.rho)),
            ("eta1", fmt_f64(self.eta1)),
            ("eta2", fmt_f64(self.eta2)),
            ("rank_k", self.rank_k.to_string()),
            ("p", fmt_f64(self.p)),
            ("iterations", self.iterations.to_string()),
            ("placement", self.placement.to_string()),
            ("dc", self.dc_mode.to_string()),
            ("lr_mode", self.lr_mode.to_string()),
            ("transform", self.transform.to_string()),
            ("svt_input", self.svt_input.to_string()),
        ];
        for (k, v) in pairs {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Parses `key=value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key=value, got `{line}`", lineno + 1))
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = SolverConfig::default();
        cfg.apply_kv(text)?;
        Ok(cfg)
    }
}

// Shortest representation that parses back to the same value.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let cfg = SolverConfig {
            lambda1: 0.0123,
            rank_k: 2,
            placement: Placement::L3,
            dc_mode: DcMode::Weighted(3.5),
            lr_mode: LrMode::Soft,
            svt_input: SvtInput::X,
            ..SolverConfig::default()
        };
        assert_eq!(SolverConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
    }

    #[test]
    fn kv_errors_name_the_problem() {
        let err = SolverConfig::from_kv("lambda1=abc").unwrap_err().to_string();
        assert!(err.contains("abc"), "{err}");
        let err = SolverConfig::from_kv("gamma=1").unwrap_err().to_string();
        assert!(err.contains("gamma"), "{err}");
        assert!(SolverConfig::from_kv("lambda1").is_err());
    }

    #[test]
    fn validation() {
        let shape = Shape::new(8, 8, 16);
        assert!(SolverConfig::default().validate(shape).is_ok());
        let bad = SolverConfig { rank_k: 20, ..SolverConfig::default() };
        assert!(bad.validate(shape).is_err());
        let bad = SolverConfig { eta2: 0.0, ..SolverConfig::default() };
        assert!(bad.validate(shape).is_err());
        let bad = SolverConfig { p: 1.5, ..SolverConfig::default() };
        assert!(bad.validate(shape).is_err());
        let haar = SolverConfig { transform: SparseTransform::TemporalHaar, ..SolverConfig::default() };
        assert!(haar.validate(Shape::new(8, 8, 12)).is_err());
    }
}
