//! Dense complex matrices, a Hermitian eigensolver and a one-sided Jacobi SVD.
//!
//! The eigensolver reduces a Hermitian matrix to real symmetric tridiagonal
//! form with Householder reflections, removes the phases of the
//! off-diagonal, and finishes with implicit QL iterations. Eigenvectors are
//! accumulated so callers can check `A = V diag(w) V*`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[Complex64]) {
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// `<v| A |v>` without forming `A v` separately.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..self.rows {
            let av: Complex64 = self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum();
            acc += v[i].conj() * av;
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add_scaled(&mut self, other: &Self, s: f64) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(&x, &y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    libm::sqrt(a.iter().map(|z| z.norm_sqr()).sum())
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, non-increasing.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(values) V*`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|l| v[(i, l)] * self.values[l] * v[(j, l)].conj()).sum()
        })
    }
}

/// Full eigen-decomposition. Only the lower triangle of `a` is read, so the
/// caller is responsible for checking Hermiticity.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    decompose(a, true)
}

/// Eigenvalues only, non-increasing.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    decompose(a, false).map(|e| e.values)
}

fn decompose(a: &CMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(HermitianEigen { values: Vec::new(), vectors: CMatrix::zeros(0, 0) });
    }
    // Work on a full Hermitian copy built from the lower triangle.
    let mut w = CMatrix::from_fn(n, n, |i, j| if i >= j { a[(i, j)] } else { a[(j, i)].conj() });
    for i in 0..n {
        w[(i, i)] = Complex64::new(w[(i, i)].re, 0.0);
    }
    let mut q = CMatrix::identity(n);
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let m = k + 1;
        let xnorm = libm::sqrt((m..n).map(|i| w[(i, k)].norm_sqr()).sum::<f64>());
        if xnorm == 0.0 {
            continue;
        }
        let x0 = w[(m, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        for i in m..n {
            v[i] = w[(i, k)];
        }
        v[m] -= alpha;
        let vnorm = libm::sqrt((m..n).map(|i| v[i].norm_sqr()).sum::<f64>());
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[m..n] {
            *vi /= vnorm;
        }
        // Trailing block update: B <- B - 2 (v q* + q v*), q = Bv - (v*Bv) v.
        for i in m..n {
            p[i] = (m..n).map(|j| w[(i, j)] * v[j]).sum();
        }
        let kappa: Complex64 = (m..n).map(|i| v[i].conj() * p[i]).sum();
        for i in m..n {
            p[i] -= kappa * v[i];
        }
        for i in m..n {
            for j in m..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                w[(i, j)] -= upd * 2.0;
            }
        }
        w[(m, k)] = alpha;
        w[(k, m)] = alpha.conj();
        for i in (m + 1)..n {
            w[(i, k)] = ZERO;
            w[(k, i)] = ZERO;
        }
        if want_vectors {
            // Q <- Q H
            for r in 0..n {
                let qv: Complex64 = (m..n).map(|j| q[(r, j)] * v[j]).sum();
                for j in m..n {
                    let upd = qv * v[j].conj();
                    q[(r, j)] -= upd * 2.0;
                }
            }
        }
    }

    // Phase-rotate the complex tridiagonal into a real one.
    let mut diag: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phase = ONE;
    let mut phases = vec![ONE; n];
    for k in 0..n - 1 {
        let e = w[(k + 1, k)];
        let mag = e.norm();
        off[k] = mag;
        if mag > 0.0 {
            phase *= e / mag;
        }
        phases[k + 1] = phase;
    }
    if want_vectors {
        for r in 0..n {
            for c in 0..n {
                q[(r, c)] *= phases[c];
            }
        }
    }

    tql2(&mut diag, &mut off, want_vectors.then_some(&mut q))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = if want_vectors {
        CMatrix::from_fn(n, n, |r, c| q[(r, order[c])])
    } else {
        CMatrix::zeros(0, 0)
    };
    Ok(HermitianEigen { values, vectors })
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
/// matrix (`d` diagonal, `e[i]` couples `i` and `i + 1`). Rotations are
/// applied to the columns of `z` when present.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut CMatrix>) -> Result<()> {
    let n = d.len();
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence);
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let hk = z[(k, i + 1)];
                            let zi = z[(k, i)];
                            z[(k, i + 1)] = zi * s + hk * c;
                            z[(k, i)] = zi * c - hk * s;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Column-major real matrix used by the SVD and least-squares routines.
#[derive(Debug, Clone, PartialEq)]
pub struct RealColumns {
    pub rows: usize,
    pub columns: Vec<Vec<f64>>,
}

impl RealColumns {
    pub fn new(rows: usize, ncols: usize) -> Self {
        Self { rows, columns: vec![vec![0.0; rows]; ncols] }
    }
}

/// Singular values (non-increasing) by one-sided Jacobi. Small singular
/// values come out with good relative accuracy, which matters for rank
/// decisions.
pub fn singular_values(a: &RealColumns) -> Vec<f64> {
    let mut cols = a.columns.clone();
    one_sided_jacobi(&mut cols, None);
    let mut s: Vec<f64> = cols.iter().map(|c| libm::sqrt(dot(c, c))).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Least-squares solution of `A x ~ b` through the SVD, with the singular
/// values so callers can judge conditioning.
pub fn least_squares(a: &RealColumns, b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, found: b.len() });
    }
    let n = a.columns.len();
    let mut cols = a.columns.clone();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    one_sided_jacobi(&mut cols, Some(&mut v));
    let sigma: Vec<f64> = cols.iter().map(|c| libm::sqrt(dot(c, c))).collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let mut x = vec![0.0; n];
    for (j, col) in cols.iter().enumerate() {
        if sigma[j] <= smax * 1e-14 || sigma[j] == 0.0 {
            continue;
        }
        // U_j = col / sigma_j; coefficient = U_j . b / sigma_j
        let coef = dot(col, b) / (sigma[j] * sigma[j]);
        for (xi, vrow) in x.iter_mut().zip(&v) {
            *xi += vrow[j] * coef;
        }
    }
    let mut sorted = sigma;
    sorted.sort_by(|p, q| q.total_cmp(p));
    Ok((x, sorted))
}

fn one_sided_jacobi(cols: &mut [Vec<f64>], mut v: Option<&mut Vec<Vec<f64>>>) {
    let n = cols.len();
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                let gamma = dot(&cols[i], &cols[j]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
                if let Some(v) = v.as_deref_mut() {
                    for row in v.iter_mut() {
                        let (xi, yj) = (row[i], row[j]);
                        row[i] = c * xi - s * yj;
                        row[j] = s * xi + c * yj;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
