//! Small dense complex linear algebra: the matrix type, products and a
//! one-sided Jacobi SVD.
//!
//! Everything here is sized for the Fourier extension systems (a few dozen
//! rows and columns at most), so the algorithms favour accuracy and a fixed
//! operation order over speed.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut out = Self::zeros(size, size)?;
        for i in 0..size {
            out[(i, i)] = Complex::new(1.0, 0.0);
        }
        Ok(out)
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Result<Self> {
        check_shape(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidGrid("matrix must have at least one row and one column"));
    }
    Ok(())
}

/// `A x`.
pub fn matvec(a: &ComplexMatrix, x: &[Complex]) -> Result<Vec<Complex>> {
    if x.len() != a.cols {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: x.len(),
        });
    }
    Ok((0..a.rows)
        .map(|i| {
            let row = &a.data[i * a.cols..(i + 1) * a.cols];
            row.iter().zip(x).map(|(aij, xj)| aij * xj).sum()
        })
        .collect())
}

/// `A* x` without forming the adjoint.
pub fn matvec_adjoint(a: &ComplexMatrix, x: &[Complex]) -> Result<Vec<Complex>> {
    if x.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: x.len(),
        });
    }
    let mut out = vec![Complex::new(0.0, 0.0); a.cols];
    for (i, xi) in x.iter().enumerate() {
        let row = &a.data[i * a.cols..(i + 1) * a.cols];
        for (o, aij) in out.iter_mut().zip(row) {
            *o += aij.conj() * xi;
        }
    }
    Ok(out)
}

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[Complex]) -> f64 {
    libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Thin SVD `A = U diag(sigma) V*` with `r = min(rows, cols)` singular
/// triplets, sorted by descending singular value.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdFactors {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Number of singular values strictly above `threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.sigma.iter().filter(|&&s| s > threshold).count()
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let mut us = self.u.clone();
        for i in 0..us.rows {
            for (j, s) in self.sigma.iter().enumerate() {
                us[(i, j)] *= *s;
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

const MAX_SWEEPS: usize = 80;

/// Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
///
/// Column pairs are swept in a fixed cyclic order until every pair is
/// orthogonal to within `rows * eps` relative to the column norms, so the
/// result is deterministic for identical input.
pub fn svd(a: &ComplexMatrix) -> Result<SvdFactors> {
    if !a.is_finite() {
        return Err(Error::NonFinite { what: "svd input" });
    }
    if a.rows < a.cols {
        let t = jacobi_tall(&a.adjoint())?;
        return Ok(SvdFactors {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    jacobi_tall(a)
}

fn jacobi_tall(a: &ComplexMatrix) -> Result<SvdFactors> {
    let m = a.rows;
    let p = a.cols;
    // column-major working copies
    let mut w: Vec<Vec<Complex>> = (0..p).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex>> = (0..p)
        .map(|j| {
            let mut e = vec![Complex::new(0.0, 0.0); p];
            e[j] = Complex::new(1.0, 0.0);
            e
        })
        .collect();
    let tol = m as f64 * f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let alpha: f64 = w[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex = w[i].iter().zip(&w[j]).map(|(x, y)| x.conj() * y).sum();
                let g = libm::hypot(gamma.re, gamma.im);
                if g == 0.0 || g <= tol * libm::sqrt(alpha) * libm::sqrt(beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::hypot(1.0, zeta));
                let c = 1.0 / libm::hypot(1.0, t);
                let s = c * t;
                let phase = (gamma / g).conj();
                let (left, right) = w.split_at_mut(j);
                rotate(&mut left[i], &mut right[0], c, s, phase);
                let (left, right) = v.split_at_mut(j);
                rotate(&mut left[i], &mut right[0], c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| norm2(col)).collect();
    let mut order: Vec<usize> = (0..p).collect();
    // stable: ties keep sweep order
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap_or(core::cmp::Ordering::Equal));

    let mut u = ComplexMatrix::zeros(m, p)?;
    let mut vm = ComplexMatrix::zeros(p, p)?;
    let mut sigma = Vec::with_capacity(p);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        if s > 0.0 {
            for r in 0..m {
                u[(r, dst)] = w[src][r] / s;
            }
        } else {
            missing.push(dst);
        }
        for r in 0..p {
            vm[(r, dst)] = v[src][r];
        }
    }
    for dst in missing {
        complete_column(&mut u, dst);
    }
    Ok(SvdFactors { u, sigma, v: vm })
}

/// `(x, y) <- (c x - s phase y, s x + c phase y)`.
fn rotate(x: &mut [Complex], y: &mut [Complex], c: f64, s: f64, phase: Complex) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi * phase;
        *xi = a * c - b * s;
        *yi = a * s + b * c;
    }
}

/// Fills column `dst` of `u` (currently zero) with a unit vector orthogonal
/// to every other nonzero column, by Gram-Schmidt on the canonical basis.
fn complete_column(u: &mut ComplexMatrix, dst: usize) {
    let m = u.rows;
    let others: Vec<usize> = (0..u.cols)
        .filter(|&j| j != dst && u.column(j).iter().any(|z| z.norm_sqr() > 0.0))
        .collect();
    for k in 0..m {
        let mut e = vec![Complex::new(0.0, 0.0); m];
        e[k] = Complex::new(1.0, 0.0);
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for &j in &others {
                let col = u.column(j);
                let proj: Complex = col.iter().zip(&e).map(|(a, b)| a.conj() * b).sum();
                for (ei, ci) in e.iter_mut().zip(&col) {
                    *ei -= proj * ci;
                }
            }
        }
        let nrm = norm2(&e);
        if nrm > 0.5 {
            for (r, ei) in e.iter().enumerate() {
                u[(r, dst)] = ei / nrm;
            }
            return;
        }
    }
}
