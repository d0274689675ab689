//! High-accuracy quadrature of uniformly sampled functions by local Fourier
//! extension (LFE).
//!
//! Every window of `m` consecutive grid nodes is mapped onto the reference
//! interval `[0, 2π/T]`, fitted by a truncated-SVD Fourier extension with
//! `2n + 1` modes, and integrated analytically from the Fourier
//! coefficients. Because the reference nodes are the same for every window,
//! the SVD of the extension matrix is computed once and reused.
//!
//! On top of the plain rule, [`correction`] detects windows that contain a
//! derivative singularity of a continuous piecewise-smooth integrand,
//! brackets the singular point to one grid cell, and replaces the
//! contaminated window contribution by a two-branch integral.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use lfe_core::{engine, window, UniformGrid, SampledFunction, WindowConfig};
//!
//! let config = WindowConfig::default();
//! let factors = window::build_reference(&config).unwrap();
//! let grid = UniformGrid::new(0.1, 1.5, 40).unwrap();
//! let samples = SampledFunction::from_fn(grid, |x| 3.0 * x * x);
//! let report = engine::integrate(&samples, &config, &factors).unwrap();
//! assert!((report.value - (1.5f64.powi(3) - 0.1f64.powi(3))).abs() < 1e-12);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod correction;
pub mod engine;
mod error;
pub mod linalg;
pub mod window;

pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix, SvdFactors};
pub use engine::{QuadratureReport, SampledFunction, UniformGrid, WindowKind, WindowPlan};
pub use window::{LocalExpansion, ModeWeights, ReferenceFactors, WindowConfig};
