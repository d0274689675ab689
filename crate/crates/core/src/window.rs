//! The reference window problem shared by every local fit.
//!
//! A window of `m` equispaced physical nodes is mapped onto
//! `t_i = i (2π/T) / (m - 1)` in `Λ = [0, 2π/T]`. The local data are fitted
//! in the span of `exp(iℓt)`, `|ℓ| ≤ n`, through the matrix
//! `F[i, ℓ] = exp(iℓ t_i) / √L` with `L = T (m - 1)`, whose SVD is computed
//! once per configuration.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, Complex, ComplexMatrix, SvdFactors};

/// Fixed parameters of the Fourier extension fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowConfig {
    /// Mode half-count: modes `ℓ = -n..=n`.
    pub n: usize,
    /// Samples per window.
    pub m: usize,
    /// Extension ratio `T > 1`.
    pub t: f64,
    /// Truncation threshold. A singular direction is kept when
    /// `√L · σ_j > epsilon`, i.e. the threshold is measured against the
    /// singular values of the unnormalized Fourier matrix.
    pub epsilon: f64,
}

impl Default for WindowConfig {
    /// `n = 10`, `m = 21`, `T = 6`, `ε = 1e-15`.
    fn default() -> Self {
        Self {
            n: 10,
            m: 21,
            t: 6.0,
            epsilon: 1e-15,
        }
    }
}

impl WindowConfig {
    pub fn new(n: usize, m: usize, t: f64, epsilon: f64) -> Result<Self> {
        let config = Self { n, m, t, epsilon };
        config.validate()?;
        Ok(config)
    }

    /// Square configuration `m = 2n + 1`.
    pub fn square(n: usize, t: f64, epsilon: f64) -> Result<Self> {
        Self::new(n, 2 * n + 1, t, epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1"));
        }
        if self.m < 2 {
            return Err(Error::InvalidConfig("m must be at least 2"));
        }
        if !(self.t.is_finite() && self.t > 1.0) {
            return Err(Error::InvalidConfig("T must be finite and greater than 1"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be finite and positive"));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        2 * self.n + 1
    }

    /// Right end of the sampled reference interval, `2π/T`.
    pub fn reference_length(&self) -> f64 {
        2.0 * PI / self.t
    }

    /// `L = T (m - 1)`.
    pub fn normalization(&self) -> f64 {
        self.t * (self.m - 1) as f64
    }

    /// Reference node `t_i`.
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.reference_length() / (self.m - 1) as f64
    }

    /// Physical-to-reference scale `s = T/(2π) * width` for a window of the
    /// given physical width.
    pub fn scale_for_width(&self, width: f64) -> f64 {
        self.t / (2.0 * PI) * width
    }
}

/// The reference matrix together with its SVD.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFactors {
    config: WindowConfig,
    matrix: ComplexMatrix,
    svd: SvdFactors,
    normalization: f64,
}

impl ReferenceFactors {
    pub fn config(&self) -> &WindowConfig {
        &self.config
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn svd(&self) -> &SvdFactors {
        &self.svd
    }

    /// `L`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Singular values of the normalized matrix are compared against
    /// `epsilon / √L`.
    pub fn effective_threshold(&self, epsilon: f64) -> f64 {
        epsilon / libm::sqrt(self.normalization)
    }

    /// Number of singular directions retained at truncation level `epsilon`.
    pub fn retained(&self, epsilon: f64) -> usize {
        self.svd.count_above(self.effective_threshold(epsilon))
    }

    /// Left singular vector belonging to the smallest singular value.
    pub fn u_min(&self) -> Vec<Complex> {
        self.svd.u.column(self.svd.rank() - 1)
    }

    /// Reassembles factors from a previously computed SVD (e.g. loaded from a
    /// cache file). The matrix is rebuilt from the configuration and the
    /// factor shapes are checked against it.
    pub fn from_svd(config: WindowConfig, svd: SvdFactors) -> Result<Self> {
        config.validate()?;
        let matrix = reference_matrix(&config)?;
        let r = config.m.min(config.modes());
        let shapes = [
            (svd.u.rows(), config.m),
            (svd.u.cols(), r),
            (svd.sigma.len(), r),
            (svd.v.rows(), config.modes()),
            (svd.v.cols(), r),
        ];
        for (found, expected) in shapes {
            if found != expected {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        if !svd.u.is_finite() || !svd.v.is_finite() || svd.sigma.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite { what: "cached factors" });
        }
        Ok(Self {
            config,
            matrix,
            svd,
            normalization: config.normalization(),
        })
    }
}

fn reference_matrix(config: &WindowConfig) -> Result<ComplexMatrix> {
    let scale = 1.0 / libm::sqrt(config.normalization());
    let n = config.n as i64;
    ComplexMatrix::from_fn(config.m, config.modes(), |i, col| {
        let ell = col as i64 - n;
        cis(ell as f64 * config.node(i)) * scale
    })
}

/// Builds the reference matrix and its SVD.
pub fn build_reference(config: &WindowConfig) -> Result<ReferenceFactors> {
    config.validate()?;
    let matrix = reference_matrix(config)?;
    let svd = linalg::svd(&matrix)?;
    Ok(ReferenceFactors {
        config: *config,
        matrix,
        svd,
        normalization: config.normalization(),
    })
}

#[inline]
pub(crate) fn cis(theta: f64) -> Complex {
    let (s, c) = libm::sincos(theta);
    Complex::new(c, s)
}

/// Closed-form integrals `∫_{t_lo}^{t_hi} exp(iℓt) dt` for `ℓ = -n..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeWeights {
    weights: Vec<Complex>,
    n: usize,
    t_lo: f64,
    t_hi: f64,
}

impl ModeWeights {
    /// Weights over an arbitrary real range. The extension is defined on the
    /// whole line, so the range does not need to lie inside `Λ`.
    pub fn between(n: usize, t_lo: f64, t_hi: f64) -> Result<Self> {
        if !t_lo.is_finite() || !t_hi.is_finite() {
            return Err(Error::NonFinite { what: "mode weight limits" });
        }
        let width = t_hi - t_lo;
        let mid = 0.5 * (t_hi + t_lo);
        let weights = (-(n as i64)..=n as i64)
            .map(|ell| {
                if ell == 0 {
                    Complex::new(width, 0.0)
                } else {
                    // (e^{iℓ t_hi} - e^{iℓ t_lo}) / (iℓ) written without cancellation
                    let l = ell as f64;
                    cis(l * mid) * (2.0 * libm::sin(0.5 * l * width) / l)
                }
            })
            .collect();
        Ok(Self {
            weights,
            n,
            t_lo,
            t_hi,
        })
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.weights
    }

    /// Weight of mode `ℓ`.
    pub fn get(&self, ell: i64) -> Complex {
        self.weights[(ell + self.n as i64) as usize]
    }

    pub fn t_lo(&self) -> f64 {
        self.t_lo
    }

    pub fn t_hi(&self) -> f64 {
        self.t_hi
    }
}

/// Weights over `[t_lo, 2π/T]`; `t_lo = 0` gives the full-window weights,
/// `t_lo > 0` the truncated weights of a tail window.
pub fn mode_weights(config: &WindowConfig, t_lo: f64) -> Result<ModeWeights> {
    let t_hi = config.reference_length();
    if !(t_lo >= 0.0 && t_lo < t_hi) {
        return Err(Error::OutOfRange {
            what: "t_lo",
            value: t_lo,
        });
    }
    ModeWeights::between(config.n, t_lo, t_hi)
}

/// TSVD coefficients `c = V Σ_ε⁺ U* g`, evaluated stage by stage.
pub fn solve_coefficients(factors: &ReferenceFactors, samples: &[Complex], epsilon: f64) -> Result<Vec<Complex>> {
    if samples.len() != factors.config.m {
        return Err(Error::DimensionMismatch {
            expected: factors.config.m,
            found: samples.len(),
        });
    }
    if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { what: "window samples" });
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::OutOfRange {
            what: "epsilon",
            value: epsilon,
        });
    }
    let svd = &factors.svd;
    let threshold = factors.effective_threshold(epsilon);
    let mut z = linalg::matvec_adjoint(&svd.u, samples)?;
    for (zj, &s) in z.iter_mut().zip(&svd.sigma) {
        if s > threshold {
            *zj /= s;
        } else {
            *zj = Complex::new(0.0, 0.0);
        }
    }
    linalg::matvec(&svd.v, &z)
}

/// A fitted window: `(1/√L) Σ_ℓ c_ℓ exp(iℓ (x - origin) / scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansion {
    pub coefficients: Vec<Complex>,
    pub scale: f64,
    pub origin: f64,
    pub normalization: f64,
}

impl LocalExpansion {
    pub fn half_count(&self) -> usize {
        self.coefficients.len() / 2
    }

    pub fn to_reference(&self, x: f64) -> f64 {
        (x - self.origin) / self.scale
    }

    /// Value of the expansion at physical `x`.
    pub fn evaluate(&self, x: f64) -> Complex {
        let t = self.to_reference(x);
        let n = self.half_count() as i64;
        let sum: Complex = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * cis((k as i64 - n) as f64 * t))
            .sum();
        sum / libm::sqrt(self.normalization)
    }

    /// `s/√L Σ_ℓ ω_ℓ c_ℓ`: the physical integral over the reference range the
    /// weights were built for.
    pub fn integrate(&self, weights: &ModeWeights) -> Result<Complex> {
        if weights.as_slice().len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                found: weights.as_slice().len(),
            });
        }
        let sum: Complex = weights
            .as_slice()
            .iter()
            .zip(&self.coefficients)
            .map(|(w, c)| w * c)
            .sum();
        Ok(sum * (self.scale / libm::sqrt(self.normalization)))
    }

    /// Integral over the physical interval `[x0, x1]`.
    pub fn integrate_between(&self, x0: f64, x1: f64) -> Result<Complex> {
        let weights = ModeWeights::between(self.half_count(), self.to_reference(x0), self.to_reference(x1))?;
        self.integrate(&weights)
    }
}

pub fn integrate_expansion(expansion: &LocalExpansion, weights: &ModeWeights) -> Result<Complex> {
    expansion.integrate(weights)
}

pub fn evaluate_expansion(expansion: &LocalExpansion, x: f64) -> Complex {
    expansion.evaluate(x)
}

/// Fits the samples of one physical window `[origin, origin + width]`.
pub fn fit_window(factors: &ReferenceFactors, samples: &[Complex], origin: f64, width: f64) -> Result<LocalExpansion> {
    let coefficients = solve_coefficients(factors, samples, factors.config.epsilon)?;
    Ok(LocalExpansion {
        coefficients,
        scale: factors.config.scale_for_width(width),
        origin,
        normalization: factors.normalization,
    })
}
