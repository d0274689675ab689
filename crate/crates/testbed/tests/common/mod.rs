#![allow(dead_code)]

use std::f64::consts::PI;

const ORDER: usize = 20;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre() -> (Vec<f64>, Vec<f64>) {
    let n = ORDER;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let q2 = ((2.0 * kf - 1.0) * z * q1 - (kf - 1.0) * q0) / kf;
                    q0 = q1;
                    q1 = q2;
                }
                let d = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * d * d);
                break;
            }
        }
    }
    (x, w)
}

/// Gauss–Legendre value on [a, b] together with the same rule applied to |f|.
fn rule(f: &dyn Fn(f64) -> f64, a: f64, b: f64, gl: &(Vec<f64>, Vec<f64>)) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let (mut v, mut m) = (0.0, 0.0);
    for (x, w) in gl.0.iter().zip(&gl.1) {
        let y = w * f(mid + half * x);
        v += y;
        m += y.abs();
    }
    (v * half, m * half.abs())
}

/// Adaptive Gauss–Legendre quadrature, used as an independent oracle.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let gl = gauss_legendre();
    let whole = rule(f, a, b, &gl).0;
    refine(f, a, b, whole, tol, 30, &gl)
}

fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    let m = 0.5 * (a + b);
    let (left, left_abs) = rule(f, a, m, gl);
    let (right, right_abs) = rule(f, m, b, gl);
    let floor = 16.0 * f64::EPSILON * (left_abs + right_abs);
    if depth == 0 || (left + right - whole).abs() <= tol.max(floor) {
        left + right
    } else {
        refine(f, a, m, left, 0.5 * tol, depth - 1, gl) + refine(f, m, b, right, 0.5 * tol, depth - 1, gl)
    }
}
