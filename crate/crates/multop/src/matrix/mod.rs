//! Dense complex matrix kernel: the induced sup norm, eigenvalues via
//! Hessenberg + shifted QR, the exponential via scaling-and-squaring, and
//! Gaussian-elimination inverse/determinant.
//!
//! Symbol values are small (N ≤ 8), but the same kernel serves the
//! block-diagonal oracle, so nothing here assumes a dimension cap.

mod expm;
mod schur;

use num_complex::Complex64;

use crate::{Error, Result};

/// Pivot threshold factor separating "singular" from "ill-conditioned":
/// a pivot below `SINGULAR_PIVOT_FACTOR * ‖A‖` aborts the elimination.
pub const SINGULAR_PIVOT_FACTOR: f64 = 1e-13;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of dimension `n ≥ 1`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        ComplexMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major slice of `n*n` entries.
    pub fn from_rows(n: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        assert!(n >= 1);
        ComplexMatrix {
            n,
            data: entries.to_vec(),
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Self {
        let data: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(n, &data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Operator norm induced by the sup norm on `C^N`: the maximal absolute
    /// row sum `max_i Σ_j |a_ij|`.
    pub fn sup_induced_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// `A^k` for `k ≥ 0` by repeated multiplication.
    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = out.matmul(self);
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n, "dimension mismatch in mul_vec");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Determinant via LU with partial pivoting. Exact zero for a zero pivot.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut lu = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut piv = col;
            let mut piv_mag = lu[(col, col)].norm();
            for row in col + 1..n {
                let mag = lu[(row, col)].norm();
                if mag > piv_mag {
                    piv = row;
                    piv_mag = mag;
                }
            }
            if piv_mag == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if piv != col {
                for j in 0..n {
                    lu.data.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let pivot = lu[(col, col)];
            det *= pivot;
            for row in col + 1..n {
                let factor = lu[(row, col)] / pivot;
                for j in col + 1..n {
                    let sub = factor * lu[(col, j)];
                    lu[(row, j)] -= sub;
                }
            }
        }
        det
    }

    /// Inverse via Gauss–Jordan with partial pivoting.
    ///
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `SINGULAR_PIVOT_FACTOR * ‖A‖`.
    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.n))
    }

    /// Solve `A X = B` for a matrix right-hand side.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let threshold = SINGULAR_PIVOT_FACTOR * self.sup_induced_norm();
        let mut a = self.clone();
        let mut x = rhs.clone();
        for col in 0..n {
            let mut piv = col;
            let mut piv_mag = a[(col, col)].norm();
            for row in col + 1..n {
                let mag = a[(row, col)].norm();
                if mag > piv_mag {
                    piv = row;
                    piv_mag = mag;
                }
            }
            if piv_mag <= threshold || piv_mag == 0.0 {
                return Err(Error::Singular {
                    pivot: piv_mag,
                    threshold,
                });
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                    x.data.swap(col * n + j, piv * n + j);
                }
            }
            let pivot = a[(col, col)];
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[(row, col)] / pivot;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let sub = factor * a[(col, j)];
                    a[(row, j)] -= sub;
                }
                for j in 0..n {
                    let sub = factor * x[(col, j)];
                    x[(row, j)] -= sub;
                }
            }
        }
        for row in 0..n {
            let pivot = a[(row, row)];
            for j in 0..n {
                x[(row, j)] /= pivot;
            }
        }
        Ok(x)
    }

    /// Matrix exponential `e^A` (Padé(13) with scaling and squaring).
    pub fn expm(&self) -> Self {
        expm::expm(self)
    }

    /// All eigenvalues with multiplicity, plus the worst eigenpair residual.
    pub fn eigenvalues(&self) -> Result<EigenSet> {
        schur::eigen_set(self)
    }

    /// Largest real part over the spectrum.
    pub fn spectral_bound(&self) -> Result<f64> {
        let eigen = self.eigenvalues()?;
        Ok(eigen
            .values
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalue multiset of a matrix together with a certified residual:
/// `residual` bounds `‖Av − λv‖_sup` over the reported eigenpair basis
/// (eigenvectors normalized to unit sup norm).
#[derive(Debug, Clone)]
pub struct EigenSet {
    /// All eigenvalues with multiplicity, sorted by (re, im).
    pub values: Vec<Complex64>,
    /// Worst observed eigenpair residual.
    pub residual: f64,
}

/// Directed + reversed sup of pointwise distances between two finite point
/// sets. Empty/empty is 0; one-sided empty is +∞.
pub fn hausdorff_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_sided = |from: &[Complex64], to: &[Complex64]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Sort key used anywhere eigenvalues or spectra are reported: lexicographic
/// by (re, im), which keeps every serialized point list deterministic.
pub fn sort_points(points: &mut [Complex64]) {
    points.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}
