//! Correction of windows that straddle a derivative singularity.
//!
//! A continuous integrand whose derivative jumps at `ξ` makes the window
//! fitted across `ξ` produce coefficients orders of magnitude larger than
//! its neighbours. Such windows are flagged by comparing `‖c_k‖₂` against
//! the median over all windows. `ξ` is then bracketed to one grid cell by
//! sliding a pair of one-sided windows across the flagged one, each side is
//! modelled by a window that stops at the bracketing cell, and the flagged
//! contribution is replaced by the integral of the left model up to `ξ̂`
//! plus the right model beyond it.
//!
//! The sample on the far side of `ξ` in each branch window is not used.
//! It is replaced by the value implied by the smallest left singular vector
//! `u_min`: since `u_min* F ≈ 0`, samples of a smooth function satisfy
//! `u_min* f ≈ 0`, which can be solved for one entry.

use alloc::vec::Vec;

use crate::engine::{QuadratureReport, SampledFunction, WindowSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, Complex};
use crate::window::{self, LocalExpansion, ReferenceFactors};

/// Windows with `η_k > DEFAULT_THRESHOLD_FACTOR · median(η)` are flagged.
pub const DEFAULT_THRESHOLD_FACTOR: f64 = 1e3;

/// Smallest `|u_min[p]|` accepted by [`predict_endpoint`].
pub const PREDICTION_TOLERANCE: f64 = 1e-12;

const MIN_WINDOWS: usize = 3;
const BISECTION_MAX_ITER: usize = 60;
const BISECTION_REL_TOL: f64 = 1e-14;
const SCAN_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub etas: Vec<f64>,
    pub median: f64,
    pub threshold: f64,
    /// Indices of flagged windows, ascending.
    pub flagged: Vec<usize>,
}

/// Flags windows whose coefficient energy exceeds `factor · median(η)`.
pub fn detect(report: &QuadratureReport, factor: f64) -> Result<DetectionReport> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::OutOfRange { what: "threshold factor", value: factor });
    }
    let etas = report.etas();
    if etas.len() < MIN_WINDOWS {
        return Err(Error::DetectionUnavailable { windows: etas.len() });
    }
    let median = median(&etas);
    let threshold = factor * median;
    let flagged = etas
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > threshold)
        .map(|(k, _)| k)
        .collect();
    Ok(DetectionReport { etas, median, threshold, flagged })
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    /// Offset `i0` inside the flagged window with the smallest `‖c_L‖ + ‖c_R‖`.
    pub split_index: usize,
    /// Global node `S + i0`.
    pub split_node: usize,
    /// Node indices `(loc - 1, loc)` of the cell holding `ξ`.
    pub cell: (usize, usize),
    /// `‖c_L‖` for `i = 1..m-1`.
    pub left_norms: Vec<f64>,
    /// `‖c_R‖` for `i = 1..m-1`.
    pub right_norms: Vec<f64>,
    /// Offsets at which a candidate window was shifted to stay on the grid.
    pub clamped: Vec<usize>,
}

/// Brackets the singularity of a flagged window to one cell.
///
/// For each interior offset `i`, a window ending at node `g = S + i` and a
/// window starting at `g` are fitted. At the minimizing offset, the cell is
/// taken on the side whose window still sees the singularity.
pub fn localize(samples: &SampledFunction, factors: &ReferenceFactors, window: &WindowSpec) -> Result<LocalizationResult> {
    let m = factors.config().m;
    let cells = samples.grid().cells();
    let shift = m - 1;
    if cells < shift {
        return Err(Error::InsufficientSupport { node: window.start });
    }
    let last_start = cells - shift;
    let eps = factors.config().epsilon;
    let mut left_norms = Vec::with_capacity(m - 2);
    let mut right_norms = Vec::with_capacity(m - 2);
    let mut clamped = Vec::new();
    let mut best: Option<(f64, usize)> = None;
    for i in 1..shift {
        let g = window.start + i;
        let left_start = g.saturating_sub(shift).min(last_start);
        let right_start = g.min(last_start);
        if left_start + shift != g || right_start != g {
            clamped.push(i);
        }
        let cl = linalg::norm2(&window::solve_coefficients(factors, &samples.window_data(left_start, m), eps)?);
        let cr = linalg::norm2(&window::solve_coefficients(factors, &samples.window_data(right_start, m), eps)?);
        left_norms.push(cl);
        right_norms.push(cr);
        if best.is_none_or(|(b, _)| cl + cr < b) {
            best = Some((cl + cr, i));
        }
    }
    let (_, i0) = best.ok_or(Error::InvalidConfig("window too short to localize"))?;
    let split_node = window.start + i0;
    let loc = if right_norms[i0 - 1] > left_norms[i0 - 1] {
        split_node + 1
    } else {
        split_node
    };
    Ok(LocalizationResult {
        split_index: i0,
        split_node,
        cell: (loc - 1, loc),
        left_norms,
        right_norms,
        clamped,
    })
}

/// Value at position `p` that makes `u_min* f = 0`, given the other entries.
pub fn predict_endpoint(u_min: &[Complex], data: &[Complex], p: usize) -> Result<Complex> {
    if u_min.len() != data.len() {
        return Err(Error::DimensionMismatch { expected: u_min.len(), found: data.len() });
    }
    if p >= data.len() {
        return Err(Error::OutOfRange { what: "prediction position", value: p as f64 });
    }
    let weight = libm::hypot(u_min[p].re, u_min[p].im);
    if weight <= PREDICTION_TOLERANCE {
        return Err(Error::PredictionFailed { position: p, weight });
    }
    let sum: Complex = u_min
        .iter()
        .zip(data)
        .enumerate()
        .filter(|&(j, _)| j != p)
        .map(|(_, (u, f))| u.conj() * f)
        .sum();
    Ok(-sum / u_min[p].conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One-sided model of the integrand next to the singular cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchModel {
    pub side: Side,
    /// First node of the branch window.
    pub start: usize,
    /// Position inside the window whose sample was replaced.
    pub predicted_position: usize,
    pub predicted_value: Complex,
    pub expansion: LocalExpansion,
}

impl BranchModel {
    pub fn evaluate(&self, x: f64) -> Complex {
        self.expansion.evaluate(x)
    }
}

/// Builds the left branch on nodes `loc-(m-1)..=loc` and the right branch on
/// nodes `loc-1..=loc+m-2`, each with its far-side sample predicted.
pub fn build_branches(
    samples: &SampledFunction,
    factors: &ReferenceFactors,
    cell: (usize, usize),
) -> Result<(BranchModel, BranchModel)> {
    let m = factors.config().m;
    let grid = samples.grid();
    let loc = cell.1;
    if cell.0 + 1 != loc || loc < m - 1 || loc + m - 2 > grid.cells() {
        return Err(Error::InsufficientSupport { node: loc });
    }
    let u_min = factors.u_min();
    let width = (m - 1) as f64 * grid.h();
    let branch = |side: Side, start: usize, p: usize| -> Result<BranchModel> {
        let mut data = samples.window_data(start, m);
        let value = predict_endpoint(&u_min, &data, p)?;
        data[p] = value;
        Ok(BranchModel {
            side,
            start,
            predicted_position: p,
            predicted_value: value,
            expansion: window::fit_window(factors, &data, grid.node(start), width)?,
        })
    };
    let left = branch(Side::Left, loc - (m - 1), m - 1)?;
    let right = branch(Side::Right, loc - 1, 0)?;
    Ok((left, right))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEstimate {
    pub xi: f64,
    /// `true` when the branch difference changed sign on the cell and `xi`
    /// was found by bisection; `false` for the fallback scan.
    pub bracketed: bool,
    pub iterations: usize,
}

/// Locates where the two branches meet inside `[x0, x1]`.
pub fn estimate_xi(left: &BranchModel, right: &BranchModel, x0: f64, x1: f64) -> XiEstimate {
    let d = |x: f64| (left.evaluate(x) - right.evaluate(x)).re;
    let (mut a, mut b) = (x0, x1);
    let (mut da, db) = (d(a), d(b));
    if da == 0.0 {
        return XiEstimate { xi: a, bracketed: true, iterations: 0 };
    }
    if db == 0.0 {
        return XiEstimate { xi: b, bracketed: true, iterations: 0 };
    }
    if (da < 0.0) != (db < 0.0) {
        let tol = BISECTION_REL_TOL * (x1 - x0);
        let mut iterations = 0;
        while iterations < BISECTION_MAX_ITER && b - a > tol {
            iterations += 1;
            let mid = 0.5 * (a + b);
            let dm = d(mid);
            if dm == 0.0 {
                return XiEstimate { xi: mid, bracketed: true, iterations };
            }
            if (dm < 0.0) == (da < 0.0) {
                a = mid;
                da = dm;
            } else {
                b = mid;
            }
        }
        return XiEstimate { xi: 0.5 * (a + b), bracketed: true, iterations };
    }
    let step = (x1 - x0) / (SCAN_POINTS - 1) as f64;
    let mut best = (f64::INFINITY, x0);
    for j in 0..SCAN_POINTS {
        let x = if j == SCAN_POINTS - 1 { x1 } else { x0 + j as f64 * step };
        let v = libm::fabs(d(x));
        if v < best.0 {
            best = (v, x);
        }
    }
    XiEstimate { xi: best.1, bracketed: false, iterations: SCAN_POINTS }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionResult {
    pub window_index: usize,
    pub localization: LocalizationResult,
    pub left: BranchModel,
    pub right: BranchModel,
    pub estimate: XiEstimate,
    /// `ξ̂` after clamping into the window's covered block.
    pub xi: f64,
    pub original_contribution: f64,
    pub replaced_contribution: f64,
    pub imag_residue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionFailure {
    pub window_index: usize,
    pub error: Error,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// Two neighbouring windows were both flagged.
    AdjacentFlagged { first: usize, second: usize },
    /// `ξ̂` came from the fallback scan rather than a bracketed root.
    LowConfidence { window_index: usize, xi: f64 },
}

/// Corrects one flagged window.
pub fn correct_window(
    samples: &SampledFunction,
    factors: &ReferenceFactors,
    report: &QuadratureReport,
    window_index: usize,
) -> Result<CorrectionResult> {
    let result = report
        .window_results
        .get(window_index)
        .ok_or(Error::OutOfRange { what: "window index", value: window_index as f64 })?;
    let spec = result.window;
    let grid = samples.grid();
    let localization = localize(samples, factors, &spec)?;
    let (left, right) = build_branches(samples, factors, localization.cell)?;
    let (x0, x1) = (grid.node(localization.cell.0), grid.node(localization.cell.1));
    let estimate = estimate_xi(&left, &right, x0, x1);
    let (ak, bk) = spec.covered_block(grid);
    let xi = estimate.xi.clamp(ak, bk);
    let q = left.expansion.integrate_between(ak, xi)? + right.expansion.integrate_between(xi, bk)?;
    Ok(CorrectionResult {
        window_index,
        localization,
        left,
        right,
        estimate,
        xi,
        original_contribution: result.contribution,
        replaced_contribution: q.re,
        imag_residue: q.im,
    })
}

/// Detects and corrects singular windows of an integration report.
///
/// Windows already corrected or already recorded as failed are left alone,
/// so applying the correction twice changes nothing. A window that cannot
/// be corrected keeps its original contribution and is listed in
/// `failed_corrections`.
pub fn correct(samples: &SampledFunction, factors: &ReferenceFactors, report: &QuadratureReport) -> Result<QuadratureReport> {
    if samples.grid() != &report.grid {
        return Err(Error::InvalidGrid("samples do not belong to the report's grid"));
    }
    if factors.config() != &report.config_used {
        return Err(Error::ConfigMismatch);
    }
    let detection = detect(report, DEFAULT_THRESHOLD_FACTOR)?;
    let mut out = report.clone();
    for pair in detection.flagged.windows(2) {
        if pair[1] == pair[0] + 1 {
            let w = Warning::AdjacentFlagged { first: pair[0], second: pair[1] };
            if !out.warnings.contains(&w) {
                out.warnings.push(w);
            }
        }
    }
    for &k in &detection.flagged {
        let done = out.corrections.iter().any(|c| c.window_index == k)
            || out.failed_corrections.iter().any(|f| f.window_index == k);
        if done {
            continue;
        }
        match correct_window(samples, factors, report, k) {
            Ok(c) => {
                if !c.estimate.bracketed {
                    out.warnings.push(Warning::LowConfidence { window_index: k, xi: c.xi });
                }
                out.corrections.push(c);
            }
            Err(error) => out.failed_corrections.push(CorrectionFailure { window_index: k, error }),
        }
    }
    out.corrections.sort_by_key(|c| c.window_index);
    out.failed_corrections.sort_by_key(|f| f.window_index);
    out.resum();
    Ok(out)
}

/// Plain integration followed by [`correct`].
pub fn integrate_corrected(samples: &SampledFunction, factors: &ReferenceFactors) -> Result<QuadratureReport> {
    let report = crate::engine::integrate(samples, factors.config(), factors)?;
    correct(samples, factors, &report)
}
