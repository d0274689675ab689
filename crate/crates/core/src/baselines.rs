//! Reference rules: composite Simpson on the uniform grid and
//! Clenshaw–Curtis on Chebyshev points.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::engine::SampledFunction;
use crate::error::{Error, Result};

/// Composite Simpson rule. Requires an even number of cells.
pub fn simpson(samples: &SampledFunction) -> Result<f64> {
    let grid = samples.grid();
    let cells = grid.cells();
    if !cells.is_multiple_of(2) {
        return Err(Error::InvalidGrid("Simpson's rule needs an even number of cells"));
    }
    let y = samples.values();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "samples" });
    }
    let mut odd = 0.0;
    let mut even = 0.0;
    for (j, &v) in y.iter().enumerate().take(cells).skip(1) {
        if j % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Ok(grid.h() / 3.0 * (y[0] + 4.0 * odd + 2.0 * even + y[cells]))
}

/// Clenshaw–Curtis nodes and weights on `[a, b]` for `N + 1` points.
#[derive(Debug, Clone, PartialEq)]
pub struct ClenshawCurtisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ClenshawCurtisRule {
    /// Rule with nodes `x_j = (a+b)/2 + (b-a)/2 cos(jπ/N)`. `N` must be even
    /// and positive.
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite { what: "interval endpoints" });
        }
        if b <= a {
            return Err(Error::InvalidGrid("b must be greater than a"));
        }
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid("Clenshaw-Curtis needs a positive even N"));
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nf = n as f64;
        let edge = 1.0 / (nf * nf - 1.0);
        let period = 2 * n;
        let cos_k = |k: usize| libm::cos(PI * (k % period) as f64 / nf);
        let mut nodes = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n + 1);
        for k in 0..=n {
            nodes.push(mid + half * cos_k(k));
            let w = if k == 0 || k == n {
                edge
            } else {
                let mut v = 1.0;
                for j in 1..n / 2 {
                    let jf = j as f64;
                    v -= 2.0 * cos_k(2 * j * k) / (4.0 * jf * jf - 1.0);
                }
                v -= cos_k(n * k) / (nf * nf - 1.0);
                2.0 * v / nf
            };
            weights.push(w * half);
        }
        // cos(jπ/N) rounds off the exact values at the ends and centre.
        nodes[0] = b;
        nodes[n] = a;
        nodes[n / 2] = mid;
        Ok(Self { nodes, weights })
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Clenshaw–Curtis approximation of `∫_a^b f` with `N + 1` points.
pub fn clenshaw_curtis(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    let rule = ClenshawCurtisRule::new(a, b, n)?;
    let v = rule.apply(f);
    if !v.is_finite() {
        return Err(Error::NonFinite { what: "integrand values" });
    }
    Ok(v)
}
