//! Small dense complex matrices: pivoted LU determinants, block assembly and
//! singular values for rank decisions. Sizes here never exceed 2q × 2q.

use std::ops::{Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![Complex::new(T::one(), T::zero()); n])
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::from_diag(&d)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row vectors; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Option<Self> {
        let c: Vec<Vec<_>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect()).collect();
        Self::from_rows(&c)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == T::zero())
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// `[[a, b], [c, d]]` for four equally sized square blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        for m in [a, b, c, d] {
            assert!(m.rows == n && m.cols == n, "block2 expects equal square blocks");
        }
        Self::from_fn(2 * n, 2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(i % n, j % n)]
        })
    }

    /// Product of the Euclidean row norms; bounds `|det|` from above.
    pub fn hadamard_bound(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt())
            .fold(T::one(), |p, r| p * r)
    }

    /// Determinant by LU with partial pivoting. Panics on non-square input.
    pub fn det(&self) -> Complex<T> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex::new(T::one(), T::zero());
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det = det * pivot;
            for i in (k + 1)..n {
                let f = a[i * n + k] / pivot;
                if f.norm() == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let akj = a[k * n + j];
                    a[i * n + j] = a[i * n + j] - f * akj;
                }
            }
        }
        det
    }

    /// Singular values in descending order (one-sided Jacobi on the rows).
    pub fn singular_values(&self) -> Vec<T> {
        // Orthogonalize the rows of M (m ≤ n case) or of M* otherwise; the
        // singular values are the final row norms.
        let work = if self.rows <= self.cols { self.clone() } else { self.adjoint() };
        let (m, n) = (work.rows, work.cols);
        let mut r: Vec<Vec<Complex<T>>> = work.to_rows();
        let eps = T::epsilon();
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..m {
                for q in (p + 1)..m {
                    let alpha: T = r[p].iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
                    let beta: T = r[q].iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
                    let gamma: Complex<T> = (0..n)
                        .map(|k| r[p][k] * r[q][k].conj())
                        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
                    let g = gamma.norm();
                    if g <= eps * (alpha * beta).sqrt() || g == T::zero() {
                        continue;
                    }
                    rotated = true;
                    // Rotate in the plane spanned by rows p, q so that they become orthogonal.
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (T::lit(2.0) * g);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let t = if zeta == T::zero() { T::one() } else { t };
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    for k in 0..n {
                        let xp = r[p][k];
                        let xq = r[q][k];
                        r[p][k] = xp * c - phase * xq * s;
                        r[q][k] = phase.conj() * xp * s + xq * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<T> = r
            .iter()
            .map(|row| row.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt())
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sv
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn numerical_rank(&self, rel_tol: T) -> usize {
        let sv = self.singular_values();
        let smax = sv.first().copied().unwrap_or(T::zero());
        if smax == T::zero() {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * smax).count()
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        CMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .map(|k| self[(i, k)] * rhs[(k, j)])
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        })
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference shape mismatch");
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}
