//! Small dense matrices and a symmetric tridiagonal eigen-solver.
//!
//! Everything in this crate is at most a few hundred sites, so the solver is
//! the classic implicit-shift QL iteration with eigenvector accumulation
//! (the EISPACK `tql2` scheme). Hermitian tridiagonal matrices are reduced
//! to the real case by a diagonal phase gauge before solving.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data; `None` when the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
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

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl DenseMatrix<f64> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `max |self - other|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, abs(a - b)))
    }
}

impl DenseMatrix<Complex64> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `max |self - other|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).norm()))
    }
}

/// Real symmetric tridiagonal matrix; `off[i]` couples sites `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Ascending eigenvalues with eigenvectors stored as matrix columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix<f64>,
}

impl Eigensystem {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }
}

impl SymTridiagonal {
    /// # Panics
    ///
    /// If `off.len() + 1 != diag.len()` (unless both are empty).
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
            "tridiagonal shape mismatch"
        );
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DenseMatrix<f64> {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, &e) in self.off.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        m
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = abs(self.diag[i]);
                if i > 0 {
                    s += abs(self.off[i - 1]);
                }
                if i + 1 < n {
                    s += abs(self.off[i]);
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Full eigen-decomposition by implicit QL with Wilkinson-style shifts.
    pub fn eigen(&self) -> Result<Eigensystem> {
        let n = self.dim();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        let mut z = DenseMatrix::<f64>::identity(n);
        tql2(&mut d, &mut e, &mut z)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let values = order.iter().map(|&i| d[i]).collect();
        let vectors = DenseMatrix::from_fn(n, n, |i, j| z[(i, order[j])]);
        Ok(Eigensystem { values, vectors })
    }
}

fn tql2(d: &mut [f64], e: &mut [f64], z: &mut DenseMatrix<f64>) -> Result<()> {
    const MAX_ITER: usize = 60;
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |m, &x| m.max(abs(x)));
    let tiny = f64::EPSILON * scale;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= f64::EPSILON * dd || abs(e[m]) <= tiny {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence);
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z[(k, i + 1)];
                    let zk = z[(k, i)];
                    z[(k, i + 1)] = s * zk + c * zk1;
                    z[(k, i)] = c * zk - s * zk1;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Hermitian tridiagonal matrix; `off[i] = H[i+1][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<Complex64>,
}

/// Eigen-decomposition `H = G V Λ Vᵀ G†` with `G` a diagonal phase gauge.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub values: Vec<f64>,
    /// Diagonal of the gauge `G`.
    pub gauge: Vec<Complex64>,
    /// Real orthogonal eigenvectors of the gauge-transformed matrix.
    pub vectors: DenseMatrix<f64>,
}

impl HermitianEigensystem {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.gauge
            .iter()
            .enumerate()
            .map(|(i, g)| g * self.vectors[(i, j)])
            .collect()
    }

    /// `Σ_j f(λ_j) |v_j⟩⟨v_j| ψ`.
    pub fn apply_function(&self, psi: &[Complex64], f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let n = self.values.len();
        assert_eq!(psi.len(), n);
        let rotated: Vec<Complex64> = psi
            .iter()
            .zip(&self.gauge)
            .map(|(a, g)| a * g.conj())
            .collect();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let overlap: Complex64 = (0..n).map(|i| rotated[i] * self.vectors[(i, j)]).sum();
            *c = overlap * f(self.values[j]);
        }
        (0..n)
            .map(|i| {
                let back: Complex64 = (0..n).map(|j| coeffs[j] * self.vectors[(i, j)]).sum();
                back * self.gauge[i]
            })
            .collect()
    }
}

impl HermitianTridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DenseMatrix<Complex64> {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self.diag[i], 0.0);
        }
        for (i, &h) in self.off.iter().enumerate() {
            m[(i + 1, i)] = h;
            m[(i, i + 1)] = h.conj();
        }
        m
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = v[i] * self.diag[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i].conj() * v[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn eigen(&self) -> Result<HermitianEigensystem> {
        let n = self.dim();
        let mut gauge = Vec::with_capacity(n);
        let mut phase = Complex64::new(1.0, 0.0);
        if n > 0 {
            gauge.push(phase);
        }
        let mut real_off = Vec::with_capacity(self.off.len());
        for h in &self.off {
            let mag = h.norm();
            real_off.push(mag);
            if mag > 0.0 {
                phase *= h / mag;
            }
            gauge.push(phase);
        }
        let real = SymTridiagonal::new(self.diag.clone(), real_off).eigen()?;
        Ok(HermitianEigensystem {
            values: real.values,
            gauge,
            vectors: real.vectors,
        })
    }
}

/// Euclidean norm of a real vector.
pub fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}
