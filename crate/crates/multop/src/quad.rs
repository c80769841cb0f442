//! Adaptive Gauss–Legendre quadrature with interval halving, for smooth
//! complex vector-valued integrands (flattened matrices included).
//!
//! Nodes and weights are computed once by Newton iteration on the Legendre
//! recurrence and cached.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

const ORDER: usize = 15;
const MAX_DEPTH: usize = 30;

fn nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre_nodes(ORDER))
}

/// Legendre `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, derivative)
}

/// Nodes and weights on [-1, 1].
fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // Tricomi-style initial guess, then Newton
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

/// Single 15-point panel; returns the largest integrand magnitude seen.
fn panel<F>(f: &F, a: f64, b: f64, out: &mut [Complex64]) -> f64
where
    F: Fn(f64, &mut [Complex64]),
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    for v in out.iter_mut() {
        *v = Complex64::new(0.0, 0.0);
    }
    let mut value = vec![Complex64::new(0.0, 0.0); out.len()];
    let mut magnitude: f64 = 0.0;
    for &(x, w) in nodes() {
        f(mid + half * x, &mut value);
        magnitude = magnitude.max(sup_norm(&value));
        let scale = w * half;
        for (acc, v) in out.iter_mut().zip(&value) {
            *acc += v * scale;
        }
    }
    magnitude
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `∫_a^b f(t) dt` for a vector-valued integrand, adaptively halving panels
/// until the whole-vs-halves discrepancy per panel drops below the scaled
/// tolerance.
pub fn integrate<F>(f: F, a: f64, b: f64, rel_tol: f64, len: usize) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &mut [Complex64]),
{
    if a == b {
        return Ok(vec![Complex64::new(0.0, 0.0); len]);
    }
    let mut rough = vec![Complex64::new(0.0, 0.0); len];
    let magnitude = panel(&f, a, b, &mut rough);
    // scale against the integral estimate, floored by the sampled integrand
    // size so cancelling integrals still terminate
    let scale = sup_norm(&rough)
        .max(0.01 * magnitude * (b - a).abs())
        .max(1e-300);
    let tol = rel_tol * scale;

    let mut total = vec![Complex64::new(0.0, 0.0); len];
    let mut stack: Vec<(f64, f64, Vec<Complex64>, usize)> = vec![(a, b, rough, 0)];
    let mut whole_left = vec![Complex64::new(0.0, 0.0); len];
    let mut whole_right = vec![Complex64::new(0.0, 0.0); len];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        panel(&f, lo, mid, &mut whole_left);
        panel(&f, mid, hi, &mut whole_right);
        let diff = whole
            .iter()
            .zip(whole_left.iter().zip(&whole_right))
            .map(|(w, (l, r))| (w - (l + r)).norm())
            .fold(0.0, f64::max);
        // panel share of the global tolerance, proportional to length
        let panel_tol = tol * ((hi - lo) / (b - a)).max(1e-6);
        if diff <= panel_tol || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && diff > panel_tol * 16.0 {
                return Err(Error::QuadratureNonConvergence);
            }
            for ((acc, l), r) in total.iter_mut().zip(&whole_left).zip(&whole_right) {
                *acc += l + r;
            }
        } else {
            stack.push((lo, mid, whole_left.clone(), depth + 1));
            stack.push((mid, hi, whole_right.clone(), depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_scalar<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Complex64>
    where
        F: Fn(f64) -> Complex64,
    {
        let out = integrate(|t, slot: &mut [Complex64]| slot[0] = f(t), a, b, rel_tol, 1)?;
        Ok(out[0])
    }

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_scalar(|t| Complex64::new(t * t, 0.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral_converges() {
        // ∫_0^{2π} e^{it} dt = 0
        let v = integrate_scalar(
            |t| Complex64::new(0.0, t).exp(),
            0.0,
            2.0 * std::f64::consts::PI,
            1e-12,
        )
        .unwrap();
        assert!(v.norm() < 1e-12);
        // ∫_0^1 e^t dt = e − 1
        let v = integrate_scalar(|t| Complex64::new(t.exp(), 0.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((v.re - (1.0f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn gamma_style_decay() {
        // ∫_0^30 t e^{-t} dt ≈ Γ(2) = 1
        let v = integrate_scalar(
            |t| Complex64::new(t * (-t).exp(), 0.0),
            0.0,
            30.0,
            1e-12,
        )
        .unwrap();
        assert!((v.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vector_integrand() {
        let v = integrate(
            |t, out: &mut [Complex64]| {
                out[0] = Complex64::new(t, 0.0);
                out[1] = Complex64::new(t.cos(), t.sin());
            },
            0.0,
            1.0,
            1e-12,
            2,
        )
        .unwrap();
        assert!((v[0].re - 0.5).abs() < 1e-14);
        assert!((v[1].re - 1.0f64.sin()).abs() < 1e-13);
        assert!((v[1].im - (1.0 - 1.0f64.cos())).abs() < 1e-13);
    }
}
