//! Global quadrature on a uniform grid by sliding windows.
//!
//! Windows hold `m` nodes and advance by `m - 1` cells, so neighbours share
//! one node. When `M` is not a multiple of `m - 1` the last window borrows
//! nodes to its left and integrates only the leftover cells, via mode
//! weights truncated to `[t_lo, 2π/T]`. Grids with fewer than `m` nodes are
//! fitted as a single window with a bespoke, smaller matrix.

use alloc::vec::Vec;

use crate::correction::{CorrectionFailure, CorrectionResult, Warning};
use crate::error::{Error, Result};
use crate::linalg::{self, Complex};
use crate::window::{self, LocalExpansion, ReferenceFactors, WindowConfig};

/// Nodes `x_j = a + j h`, `j = 0..=M`, `h = (b - a) / M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    a: f64,
    b: f64,
    cells: usize,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, cells: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite { what: "grid endpoints" });
        }
        if b <= a {
            return Err(Error::InvalidGrid("b must be greater than a"));
        }
        if cells < 1 {
            return Err(Error::InvalidGrid("at least one cell required"));
        }
        Ok(Self { a, b, cells })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `M`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.cells as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.cells {
            self.b
        } else {
            self.a + j as f64 * self.h()
        }
    }
}

/// Samples of a real function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::DimensionMismatch {
                expected: grid.nodes(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "samples" });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid node. Non-finite values are kept and
    /// rejected later by the integrators.
    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.nodes()).map(|j| f(grid.node(j))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_finite(&self) -> Result<()> {
        if self.values.len() != self.grid.nodes() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.nodes(),
                found: self.values.len(),
            });
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "samples" });
        }
        Ok(())
    }

    /// Copy of `len` samples starting at node `start`, as complex data.
    pub fn window_data(&self, start: usize, len: usize) -> Vec<Complex> {
        self.values[start..start + len]
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// `m` nodes integrated over all `m - 1` cells.
    Full,
    /// Last window, borrowing nodes on the left; integrates the leftover
    /// cells only.
    Tail,
    /// Whole grid with fewer than `m` nodes.
    Small,
}

/// One entry of a [`WindowPlan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    /// First node index.
    pub start: usize,
    /// Number of nodes in the fit.
    pub len: usize,
    pub kind: WindowKind,
    /// Lower reference limit of the integrated range (0 unless tail).
    pub t_lo: f64,
    /// Node indices `(first, last)` of the block whose integral this window
    /// contributes.
    pub covered: (usize, usize),
}

impl WindowSpec {
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }

    pub fn covered_cells(&self) -> usize {
        self.covered.1 - self.covered.0
    }

    /// Physical extent of the covered block.
    pub fn covered_block(&self, grid: &UniformGrid) -> (f64, f64) {
        (grid.node(self.covered.0), grid.node(self.covered.1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowPlan {
    pub windows: Vec<WindowSpec>,
}

/// Splits the grid into windows.
pub fn plan_windows(grid: &UniformGrid, config: &WindowConfig) -> WindowPlan {
    let m = config.m;
    let cells = grid.cells();
    let shift = m - 1;
    let mut windows = Vec::new();
    if grid.nodes() < m {
        windows.push(WindowSpec {
            start: 0,
            len: grid.nodes(),
            kind: WindowKind::Small,
            t_lo: 0.0,
            covered: (0, cells),
        });
        return WindowPlan { windows };
    }
    let mut start = 0;
    while start + shift <= cells {
        windows.push(WindowSpec {
            start,
            len: m,
            kind: WindowKind::Full,
            t_lo: 0.0,
            covered: (start, start + shift),
        });
        start += shift;
    }
    let rest = cells % shift;
    if rest > 0 {
        windows.push(WindowSpec {
            start: cells - shift,
            len: m,
            kind: WindowKind::Tail,
            t_lo: config.reference_length() * (shift - rest) as f64 / shift as f64,
            covered: (cells - rest, cells),
        });
    }
    WindowPlan { windows }
}

/// Per-window output of the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowResult {
    pub window: WindowSpec,
    pub expansion: LocalExpansion,
    /// Coefficient energy `‖c‖₂`.
    pub eta: f64,
    /// Real part of the window integral over its covered block.
    pub contribution: f64,
    /// Imaginary part of the same integral (roundoff diagnostic).
    pub contribution_imag: f64,
}

impl WindowResult {
    pub fn coefficients(&self) -> &[Complex] {
        &self.expansion.coefficients
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureReport {
    /// Sum of window contributions, with corrected windows substituted.
    pub value: f64,
    /// Sum of the imaginary parts that entered `value`.
    pub imag_residue: f64,
    pub grid: UniformGrid,
    pub window_results: Vec<WindowResult>,
    pub corrections: Vec<CorrectionResult>,
    /// Flagged windows left uncorrected, with the reason.
    pub failed_corrections: Vec<CorrectionFailure>,
    pub warnings: Vec<Warning>,
    pub config_used: WindowConfig,
}

impl QuadratureReport {
    /// Recomputes `value` and `imag_residue` in ascending window order.
    pub fn resum(&mut self) {
        let mut value = 0.0;
        let mut imag = 0.0;
        for (k, w) in self.window_results.iter().enumerate() {
            match self.corrections.iter().find(|c| c.window_index == k) {
                Some(c) => {
                    value += c.replaced_contribution;
                    imag += c.imag_residue;
                }
                None => {
                    value += w.contribution;
                    imag += w.contribution_imag;
                }
            }
        }
        self.value = value;
        self.imag_residue = imag;
    }

    pub fn etas(&self) -> Vec<f64> {
        self.window_results.iter().map(|w| w.eta).collect()
    }
}

/// LFE quadrature of the sampled function.
///
/// `factors` must have been built for `config`; grids with fewer than `m`
/// nodes are delegated to [`integrate_small`].
pub fn integrate(samples: &SampledFunction, config: &WindowConfig, factors: &ReferenceFactors) -> Result<QuadratureReport> {
    config.validate()?;
    samples.check_finite()?;
    if factors.config() != config {
        return Err(Error::ConfigMismatch);
    }
    let grid = *samples.grid();
    if grid.nodes() < config.m {
        return integrate_small(samples, config);
    }
    let plan = plan_windows(&grid, config);
    let width = (config.m - 1) as f64 * grid.h();
    let full = window::mode_weights(config, 0.0)?;
    let mut window_results = Vec::with_capacity(plan.windows.len());
    for spec in plan.windows {
        let data = samples.window_data(spec.start, spec.len);
        let expansion = window::fit_window(factors, &data, grid.node(spec.start), width)?;
        let q = match spec.kind {
            WindowKind::Tail => expansion.integrate(&window::mode_weights(config, spec.t_lo)?)?,
            _ => expansion.integrate(&full)?,
        };
        window_results.push(WindowResult {
            window: spec,
            eta: linalg::norm2(&expansion.coefficients),
            expansion,
            contribution: q.re,
            contribution_imag: q.im,
        });
    }
    Ok(finish(grid, window_results, *config))
}

fn finish(grid: UniformGrid, window_results: Vec<WindowResult>, config_used: WindowConfig) -> QuadratureReport {
    let mut report = QuadratureReport {
        value: 0.0,
        imag_residue: 0.0,
        grid,
        window_results,
        corrections: Vec::new(),
        failed_corrections: Vec::new(),
        warnings: Vec::new(),
        config_used,
    };
    report.resum();
    report
}

/// Single-window fit of a grid with fewer than `m` nodes, using an
/// `(M+1) × (2n'+1)` matrix with `n' = floor(M/2)`.
pub fn integrate_small(samples: &SampledFunction, config: &WindowConfig) -> Result<QuadratureReport> {
    config.validate()?;
    samples.check_finite()?;
    let grid = *samples.grid();
    let nodes = grid.nodes();
    if nodes < 3 {
        return Err(Error::UnsupportedGrid { nodes });
    }
    if nodes >= config.m {
        return Err(Error::InvalidGrid("small-grid path requires fewer than m nodes"));
    }
    let local = WindowConfig::new(grid.cells() / 2, nodes, config.t, config.epsilon)?;
    let factors = window::build_reference(&local)?;
    let data = samples.window_data(0, nodes);
    let expansion = window::fit_window(&factors, &data, grid.a(), grid.b() - grid.a())?;
    let q = expansion.integrate(&window::mode_weights(&local, 0.0)?)?;
    let spec = WindowSpec {
        start: 0,
        len: nodes,
        kind: WindowKind::Small,
        t_lo: 0.0,
        covered: (0, grid.cells()),
    };
    let result = WindowResult {
        window: spec,
        eta: linalg::norm2(&expansion.coefficients),
        expansion,
        contribution: q.re,
        contribution_imag: q.im,
    };
    Ok(finish(grid, alloc::vec![result], local))
}
