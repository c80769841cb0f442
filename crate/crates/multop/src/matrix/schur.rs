//! Complex Schur decomposition: Householder Hessenberg reduction followed by
//! implicit single-shift QR with Wilkinson shifts and deflation. Eigenvectors
//! come from triangular back-substitution on the Schur factor, which gives a
//! per-eigenpair residual certificate.

use num_complex::Complex64;

use super::{ComplexMatrix, EigenSet};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn eigen_set(a: &ComplexMatrix) -> Result<EigenSet> {
    let n = a.dim();
    if n == 1 {
        return Ok(EigenSet {
            values: vec![a[(0, 0)]],
            residual: 0.0,
        });
    }
    let (q, t) = schur(a)?;
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let residual = eigenpair_residual(a, &q, &t);
    super::sort_points(&mut values);
    Ok(EigenSet { values, residual })
}

/// `A = Q T Q^H` with `Q` unitary and `T` upper triangular.
pub fn schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.dim();
    let (mut h, mut q) = hessenberg(a);
    qr_iterate(&mut h, &mut q, n)?;
    // clean the strictly lower part so T is exactly triangular
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok((q, h))
}

/// Householder reduction to upper Hessenberg form, accumulating `Q` so that
/// `A = Q H Q^H`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let m = n - k - 1; // length of the column tail below the diagonal
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm_sqr = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;

        // left: rows k+1..n over columns k..n
        for j in k..n {
            let mut s = ZERO;
            for i in 0..m {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= beta;
            for i in 0..m {
                let upd = v[i] * s;
                h[(k + 1 + i, j)] -= upd;
            }
        }
        // right: columns k+1..n over all rows
        for i in 0..n {
            let mut s = ZERO;
            for j in 0..m {
                s += h[(i, k + 1 + j)] * v[j];
            }
            s *= beta;
            for j in 0..m {
                let upd = s * v[j].conj();
                h[(i, k + 1 + j)] -= upd;
            }
        }
        // accumulate Q·P
        for i in 0..n {
            let mut s = ZERO;
            for j in 0..m {
                s += q[(i, k + 1 + j)] * v[j];
            }
            s *= beta;
            for j in 0..m {
                let upd = s * v[j].conj();
                q[(i, k + 1 + j)] -= upd;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

fn qr_iterate(h: &mut ComplexMatrix, q: &mut ComplexMatrix, n: usize) -> Result<()> {
    let hnorm = h.sup_induced_norm().max(f64::MIN_POSITIVE);
    let mut ihi = n;
    let mut steps_since_deflation = 0usize;
    let mut total_steps = 0usize;
    let max_steps = 60 * n.max(8);

    while ihi > 1 {
        // scan for a negligible subdiagonal entry inside the active block
        let mut lo = ihi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let threshold = f64::EPSILON * if local > 0.0 { local } else { hnorm };
            if sub <= threshold {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == ihi - 1 {
            // trailing 1x1 converged
            ihi -= 1;
            steps_since_deflation = 0;
            continue;
        }

        total_steps += 1;
        steps_since_deflation += 1;
        if total_steps > max_steps {
            let worst = (lo + 1..ihi)
                .map(|i| h[(i, i - 1)].norm())
                .fold(0.0, f64::max);
            return Err(Error::EigenNonConvergence { residual: worst });
        }

        let shift = if steps_since_deflation % 12 == 0 {
            // exceptional shift to break symmetric limit cycles
            h[(ihi - 1, ihi - 1)] + Complex64::new(0.75 * h[(ihi - 1, ihi - 2)].norm(), 0.0)
        } else {
            wilkinson_shift(h, ihi)
        };
        qr_step(h, q, lo, ihi, shift);
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(h: &ComplexMatrix, ihi: usize) -> Complex64 {
    let a = h[(ihi - 2, ihi - 2)];
    let b = h[(ihi - 2, ihi - 1)];
    let c = h[(ihi - 1, ihi - 2)];
    let d = h[(ihi - 1, ihi - 1)];
    let mid = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    let lam1 = mid + disc;
    let lam2 = mid - disc;
    if (lam1 - d).norm() <= (lam2 - d).norm() {
        lam1
    } else {
        lam2
    }
}

/// One implicit single-shift bulge chase over the window `[lo, ihi)`.
fn qr_step(h: &mut ComplexMatrix, q: &mut ComplexMatrix, lo: usize, ihi: usize, shift: Complex64) {
    let n = h.dim();
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for k in lo..ihi - 1 {
        let (c, s) = givens(x, y);
        let col_start = if k > lo { k - 1 } else { lo };
        rot_rows(h, k, k + 1, c, s, col_start, n);
        if k > lo {
            h[(k + 1, k - 1)] = ZERO; // bulge annihilated by construction
        }
        let row_end = usize::min(k + 3, n);
        rot_cols(h, k, k + 1, c, s, row_end);
        rot_cols(q, k, k + 1, c, s, n);
        if k + 2 < ihi {
            x = h[(k + 1, k)];
            y = h[(k + 2, k)];
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with real `c ≥ 0` annihilating the
/// second component of `(a, b)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = (an * an + bn * bn).sqrt();
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Rows `i, j ← G · (rows i, j)` over columns `[from, to)`.
fn rot_rows(
    m: &mut ComplexMatrix,
    i: usize,
    j: usize,
    c: f64,
    s: Complex64,
    from: usize,
    to: usize,
) {
    for col in from..to {
        let mi = m[(i, col)];
        let mj = m[(j, col)];
        m[(i, col)] = mi * c + s * mj;
        m[(j, col)] = -s.conj() * mi + mj * c;
    }
}

/// Columns `i, j ← (columns i, j) · G^H` over rows `[0, to)`.
fn rot_cols(m: &mut ComplexMatrix, i: usize, j: usize, c: f64, s: Complex64, to: usize) {
    for row in 0..to {
        let mi = m[(row, i)];
        let mj = m[(row, j)];
        m[(row, i)] = mi * c + s.conj() * mj;
        m[(row, j)] = -s * mi + mj * c;
    }
}

/// Worst residual `‖A v − λ v‖_sup` over eigenvectors recovered from the
/// Schur factor by back-substitution (unit sup norm each).
fn eigenpair_residual(a: &ComplexMatrix, q: &ComplexMatrix, t: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let tnorm = t.sup_induced_norm();
    let smallnum = f64::EPSILON * tnorm.max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for i in 0..n {
        let lambda = t[(i, i)];
        let mut w = vec![ZERO; n];
        w[i] = Complex64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut num = ZERO;
            for k in j + 1..=i {
                num += t[(j, k)] * w[k];
            }
            let mut den = t[(j, j)] - lambda;
            if den.norm() < smallnum {
                den = Complex64::new(smallnum, 0.0);
            }
            w[j] = -num / den;
            let mag = w[j].norm();
            if mag > 1e120 {
                for entry in w.iter_mut().take(i + 1) {
                    *entry /= mag;
                }
            }
        }
        let mut v = q.mul_vec(&w);
        let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if vmax == 0.0 {
            continue;
        }
        for entry in v.iter_mut() {
            *entry /= vmax;
        }
        let av = a.mul_vec(&v);
        let res = av
            .iter()
            .zip(&v)
            .map(|(&avi, &vi)| (avi - lambda * vi).norm())
            .fold(0.0, f64::max);
        worst = worst.max(res);
    }
    worst
}
