//! Sparse and low-rank reconstruction of undersampled dynamic MRI.
//!
//! The crate recovers a complex space-time series `x` (shape `nx x ny x nt`)
//! from Cartesian k-space lines `y = P F x` by combining a temporal sparsity
//! prior with a low-rank prior on the Casorati matrix. Three iterative
//! solvers are provided:
//!
//! * [`solvers::solve_ista_sparse`]: sparsity only, with data consistency.
//! * [`solvers::solve_slr`]: sparse + low-rank augmented-Lagrangian
//!   iteration with a multiplier update and a hard-rank or soft SVT step.
//! * [`solvers::solve_ista_lr`]: ISTA with a hard-rank module plugged in at
//!   one of three positions.
//!
//! Everything needed for retrospective experiments is included: variable
//! density masks and phantoms ([`sim`]), metrics ([`metrics`]) and a simple
//! on-disk volume format ([`io`]). The `examples/` directory has one
//! runnable program per capability.
//!
//! ```no_run
//! use dynlr::prelude::*;
//!
//! let truth = make_phantom(64, 64, 16, PhantomKind::RankSparse { rank: 2, sparsity: 2 }, 1)?;
//! let mask = make_vd_mask(64, 16, 8.0, 0.15, 7)?;
//! let y = encode(&truth, &mask)?;
//! let cfg = SolverConfig { rank_k: 2, iterations: 50, ..SolverConfig::default_for(&y) };
//! let report = solve_slr(&y, &cfg)?.with_reference(&truth)?;
//! println!("{}", report.metrics.unwrap());
//! # Ok::<(), dynlr::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod io;
pub mod metrics;
pub mod operators;
pub mod prox;
pub mod sim;
pub mod solvers;
pub mod volume;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::metrics::{mse, psnr, ssim, QualityMetrics};
    pub use crate::operators::{data_consistency, encode, encode_adjoint, fft2c, ifft2c, DcMode};
    pub use crate::prox::{ist_svt, learned_svt, nuclear_norm, soft_threshold, SparseTransform};
    pub use crate::sim::{make_phantom, make_vd_mask, PhantomKind, VdMaskOptions};
    pub use crate::solvers::{
        solve_ista_lr, solve_ista_sparse, solve_slr, tune_hyperparams, LrMode, Placement, ReconReport, SearchSpace,
        Solver, SolverConfig,
    };
    pub use crate::volume::{from_casorati, to_casorati, DynamicImage, KSpaceData, SamplingMask, Shape};
}
