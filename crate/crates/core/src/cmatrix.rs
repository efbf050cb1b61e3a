//! Complex dense matrices for samples of loops on the unit circle.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::{Error, Result};

/// Taylor terms used by [`CMatrix::expm`] once the norm is scaled below 1/2.
const EXPM_TAYLOR_TERMS: usize = 13;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(a: &Matrix) -> Self {
        let n = a.dim();
        Self { n, data: a.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn real_part(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self[(i, j)].re)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: Complex64, other: &CMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect() }
    }

    pub fn add_assign_scaled(&mut self, s: Complex64, other: &CMatrix) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Matrix exponential by scaling and squaring around a Taylor core:
    /// scale by `2^{-s}` so the Frobenius norm is at most 1/2, sum 13 Taylor
    /// terms (truncation error below 1e−15 relative), then square `s` times.
    pub fn expm(&self) -> CMatrix {
        let norm = self.norm();
        let mut squarings = 0u32;
        let mut scaled_norm = norm;
        while scaled_norm > 0.5 {
            scaled_norm *= 0.5;
            squarings += 1;
        }
        let a = self.scale(Complex64::new(libm::ldexp(1.0, -(squarings as i32)), 0.0));
        let mut term = CMatrix::identity(self.n);
        let mut sum = term.clone();
        for k in 1..=EXPM_TAYLOR_TERMS {
            term = term.matmul(&a).scale(Complex64::new(1.0 / k as f64, 0.0));
            sum.add_assign_scaled(Complex64::new(1.0, 0.0), &term);
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum);
        }
        sum
    }

    /// LU factorization with partial pivoting; returns `(lu, perm, sign)`.
    fn lu(&self) -> Result<(Vec<Complex64>, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if scale == 0.0 {
            return Err(Error::SingularSystem { routine: "complex lu" });
        }
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].norm();
            for r in col + 1..n {
                let v = a[r * n + col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= 1e-14 * scale {
                return Err(Error::SingularSystem { routine: "complex lu" });
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
                sign = -sign;
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                a[r * n + col] = f;
                for j in col + 1..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        Ok((a, perm, sign))
    }

    pub fn det(&self) -> Complex64 {
        match self.lu() {
            Ok((lu, _, sign)) => {
                let n = self.n;
                (0..n).fold(Complex64::new(sign, 0.0), |acc, i| acc * lu[i * n + i])
            }
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.n;
        let (lu, perm, _) = self.lu()?;
        let mut inv = CMatrix::zeros(n);
        for col in 0..n {
            let mut x: Vec<Complex64> = (0..n)
                .map(|i| if perm[i] == col { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    let v = lu[i * n + k] * x[k];
                    x[i] -= v;
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let v = lu[i * n + k] * x[k];
                    x[i] -= v;
                }
                x[i] /= lu[i * n + i];
            }
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Solves the dense complex system `A X = B` (row-major, `A` is `m × m`, `B`
/// is `m × nrhs`) by LU with partial pivoting. Used for the stacked
/// block-Toeplitz systems of the Birkhoff factorization.
pub fn solve_dense(a: &mut [Complex64], m: usize, b: &mut [Complex64], nrhs: usize) -> Result<()> {
    assert_eq!(a.len(), m * m);
    assert_eq!(b.len(), m * nrhs);
    let scale = a.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    if scale == 0.0 {
        return Err(Error::SingularSystem { routine: "block toeplitz solve" });
    }
    for col in 0..m {
        let mut piv = col;
        let mut best = a[col * m + col].norm();
        for r in col + 1..m {
            let v = a[r * m + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= 1e-14 * scale {
            return Err(Error::SingularSystem { routine: "block toeplitz solve" });
        }
        if piv != col {
            for j in 0..m {
                a.swap(col * m + j, piv * m + j);
            }
            for j in 0..nrhs {
                b.swap(col * nrhs + j, piv * nrhs + j);
            }
        }
        let d = a[col * m + col];
        for r in col + 1..m {
            let f = a[r * m + col] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..m {
                let v = a[col * m + j];
                a[r * m + j] -= f * v;
            }
            for j in 0..nrhs {
                let v = b[col * nrhs + j];
                b[r * nrhs + j] -= f * v;
            }
        }
    }
    for col in (0..m).rev() {
        let d = a[col * m + col];
        for j in 0..nrhs {
            let mut acc = b[col * nrhs + j];
            for k in col + 1..m {
                acc -= a[col * m + k] * b[k * nrhs + j];
            }
            b[col * nrhs + j] = acc / d;
        }
    }
    Ok(())
}
