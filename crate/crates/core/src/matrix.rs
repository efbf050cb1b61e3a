//! Dense real square matrices and the symmetric / skew-symmetric subspaces.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::linalg;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Sweep cap for the cyclic Jacobi eigensolver.
pub const JACOBI_SWEEP_CAP: usize = 100;
/// Default relative tolerance for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Minimum separation between the `|λ|` of an accepted random skew matrix.
pub const SIMPLE_SPECTRUM_GAP: f64 = 1e-6;
const RESAMPLE_CAP: usize = 1000;

/// Row-major `n × n` real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a
    /// perfect square and every entry finite.
    pub fn from_row_major(entries: &[f64]) -> Result<Self> {
        let n = libm::sqrt(entries.len() as f64) as usize;
        if n * n != entries.len() || n == 0 {
            return Err(Error::InvalidArgument("entry count is not a positive square"));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite"));
        }
        Ok(Self { n, data: entries.to_vec() })
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &Matrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect() }
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// Largest entry of `A - Aᵀ` in absolute value.
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    /// Largest entry of `A + Aᵀ` in absolute value (diagonal included).
    pub fn skewness_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                m = m.max((self[(i, j)] + self[(j, i)]).abs());
            }
        }
        m
    }

    fn check_dim(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.add_scaled(1.0, rhs)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.add_scaled(-1.0, rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

impl AddAssign<&Matrix> for Matrix {
    fn add_assign(&mut self, rhs: &Matrix) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&Matrix> for Matrix {
    fn sub_assign(&mut self, rhs: &Matrix) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, r) in dst.iter_mut().zip(row) {
                    *d += a * r;
                }
            }
        }
        out
    }
}

impl Mul<f64> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: f64) -> Matrix {
        self.scale(rhs)
    }
}

/// Symmetric matrix stored as its lower triangle, row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    lower: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, lower: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix_projected(&Matrix::identity(n))
    }

    /// `(A + Aᵀ) / 2`.
    pub fn from_matrix_projected(a: &Matrix) -> Self {
        let n = a.dim();
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                lower.push(0.5 * (a[(i, j)] + a[(j, i)]));
            }
        }
        Self { n, lower }
    }

    /// Accepts `a` only if it is symmetric to within `tol` (max entry).
    pub fn try_from_matrix(a: &Matrix, tol: f64) -> Result<Self> {
        let defect = a.asymmetry();
        if defect > tol {
            return Err(Error::SymmetryViolated { residual: defect });
        }
        Ok(Self::from_matrix_projected(a))
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_matrix_projected(&Matrix::diag(values))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[Self::slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.lower[Self::slot(i, j)] = v;
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    pub fn packed(&self) -> &[f64] {
        &self.lower
    }

    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self { n: self.n, lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + s * b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, lower: self.lower.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.lower.iter().zip(&other.lower).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn norm(&self) -> f64 {
        self.to_matrix().norm()
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().all(|x| x.is_finite())
    }
}

/// Skew-symmetric matrix stored as its strict lower triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    n: usize,
    lower: Vec<f64>,
}

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, lower: vec![0.0; n * n.saturating_sub(1) / 2] }
    }

    /// `(A - Aᵀ) / 2`.
    pub fn from_matrix_projected(a: &Matrix) -> Self {
        let n = a.dim();
        let mut lower = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in 0..i {
                lower.push(0.5 * (a[(i, j)] - a[(j, i)]));
            }
        }
        Self { n, lower }
    }

    pub fn try_from_matrix(a: &Matrix, tol: f64) -> Result<Self> {
        let defect = a.skewness_defect();
        if defect > tol {
            return Err(Error::SymmetryViolated { residual: defect });
        }
        Ok(Self::from_matrix_projected(a))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            core::cmp::Ordering::Greater => self.lower[i * (i - 1) / 2 + j],
            core::cmp::Ordering::Less => -self.lower[j * (j - 1) / 2 + i],
            core::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Sets entry `(i, j)` and, implicitly, `(j, i) = -v`. `i != j`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert_ne!(i, j, "skew matrices have zero diagonal");
        if i > j {
            self.lower[i * (i - 1) / 2 + j] = v;
        } else {
            self.lower[j * (j - 1) / 2 + i] = -v;
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    pub fn packed(&self) -> &[f64] {
        &self.lower
    }

    pub fn add_scaled(&self, s: f64, other: &SkewMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self { n: self.n, lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + s * b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, lower: self.lower.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `AB − BA`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.check_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// Splits `A` into its skew and symmetric parts (the ±1 eigenspaces of
/// `ξ ↦ −ξᵀ`).
pub fn cartan_split(a: &Matrix) -> (SkewMatrix, SymMatrix) {
    (SkewMatrix::from_matrix_projected(a), SymMatrix::from_matrix_projected(a))
}

/// Coefficients of `det(A − wI)` in ascending powers of `w`; the last entry
/// is `(−1)ⁿ`.
///
/// Faddeev–LeVerrier: with `M₀ = 0`, `c_n = 1`,
/// `M_k = A M_{k−1} + c_{n−k+1} I` and `c_{n−k} = −tr(A M_k)/k`, which yields
/// `det(wI − A) = Σ c_i wⁱ`.
pub fn char_poly(a: &Matrix) -> Vec<f64> {
    let n = a.dim();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = Matrix::zeros(n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        c[n - k] = -a.trace_product(&next) / k as f64;
        m = next;
    }
    if n % 2 == 1 {
        for x in &mut c {
            *x = -*x;
        }
    }
    c
}

/// Evaluates `Σ coeffs[i] Aⁱ` by Horner's rule.
pub fn poly_at_matrix(coeffs: &[f64], a: &Matrix) -> Matrix {
    let n = a.dim();
    let mut acc = Matrix::zeros(n);
    for &c in coeffs.iter().rev() {
        acc = &acc * a;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}

/// Eigenvalues of a symmetric matrix in ascending order, by cyclic Jacobi
/// rotations. Terminates once the off-diagonal Frobenius norm is at most
/// `1e−12 · ‖S‖`.
pub fn eigenvalues_sym(s: &SymMatrix) -> Result<Vec<f64>> {
    let mut a = s.to_matrix();
    let n = a.dim();
    let scale = a.norm();
    let target = 1e-12 * scale;
    let off = |a: &Matrix| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[(i, j)] * a[(i, j)];
                }
            }
        }
        libm::sqrt(acc)
    };
    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == JACOBI_SWEEP_CAP {
            return Err(Error::NoConvergence { routine: "jacobi eigensolver", iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Numerical rank of a family of matrices viewed as vectors under the trace
/// inner product `⟨X, Y⟩ = tr(XᵀY)`.
///
/// Each vector is normalized, then the singular values of the stacked family
/// (the square roots of the Gram eigenvalues) are computed by one-sided
/// Jacobi; singular values above `tol · σ_max` are counted. Zero matrices
/// contribute nothing.
pub fn numerical_rank(vectors: &[Matrix], tol: f64) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("rank tolerance must be positive"));
    }
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let n = first.dim();
    let mut cols = Vec::with_capacity(vectors.len());
    for v in vectors {
        first.check_dim(v)?;
        let norm = v.norm();
        if norm > 0.0 {
            cols.push(v.as_slice().iter().map(|x| x / norm).collect::<Vec<f64>>());
        }
    }
    if cols.is_empty() || n == 0 {
        return Ok(0);
    }
    let sv = linalg::singular_values(&cols)?;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

fn uniform_matrix(n: usize, rng: &mut SplitMix64) -> Matrix {
    Matrix::from_fn(n, |_, _| rng.uniform(-1.0, 1.0))
}

/// Random symmetric matrix: i.i.d. uniform `[−1, 1]` entries, symmetrized.
pub fn random_sym(n: usize, seed: u64) -> Result<SymMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument("random_sym requires n >= 2"));
    }
    let mut rng = SplitMix64::new(seed);
    Ok(SymMatrix::from_matrix_projected(&uniform_matrix(n, &mut rng)))
}

/// Random skew-symmetric matrix with simple spectrum: draws antisymmetrized
/// uniform matrices from one seeded stream until [`has_simple_spectrum`]
/// accepts one.
pub fn random_skew_simple(n: usize, seed: u64) -> Result<SkewMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument("random_skew_simple requires n >= 2"));
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..RESAMPLE_CAP {
        let k = SkewMatrix::from_matrix_projected(&uniform_matrix(n, &mut rng));
        if has_simple_spectrum(&k, SIMPLE_SPECTRUM_GAP)? {
            return Ok(k);
        }
    }
    Err(Error::ResampleCapExceeded { attempts: RESAMPLE_CAP })
}

/// Moduli `|λ_j|` of the eigenvalues `±iλ_j` of a skew matrix, one per
/// conjugate pair, ascending; for odd `n` the forced zero eigenvalue is
/// returned first on its own.
pub fn skew_spectrum_moduli(k: &SkewMatrix) -> Result<Vec<f64>> {
    let km = k.to_matrix();
    let gram = SymMatrix::from_matrix_projected(&(&km.transpose() * &km));
    let ev = eigenvalues_sym(&gram)?;
    let sv: Vec<f64> = ev.iter().map(|&x| libm::sqrt(x.max(0.0))).collect();
    let n = k.dim();
    let mut out = Vec::with_capacity(n.div_ceil(2));
    let mut i = 0;
    if n % 2 == 1 {
        out.push(sv[0]);
        i = 1;
    }
    while i + 1 < n {
        out.push(0.5 * (sv[i] + sv[i + 1]));
        i += 2;
    }
    Ok(out)
}

/// Whether the skew matrix has simple spectrum: the singular values, which
/// always come in equal pairs, form pairs whose moduli are nonzero and
/// separated by more than `gap` (for odd `n`, one zero is forced and allowed).
pub fn has_simple_spectrum(k: &SkewMatrix, gap: f64) -> Result<bool> {
    let moduli = skew_spectrum_moduli(k)?;
    let mut prev = 0.0;
    let pairs = if k.dim() % 2 == 1 { &moduli[1..] } else { &moduli[..] };
    for &m in pairs {
        if m - prev <= gap {
            return Ok(false);
        }
        prev = m;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_row_major(&[a, b, c, d]).unwrap()
    }

    #[test]
    fn commutator_examples() {
        let a = m2(1.0, 2.0, 3.0, 4.0);
        assert!(commutator(&a, &a).unwrap().is_zero());
        assert!(commutator(&Matrix::identity(2), &a).unwrap().is_zero());
        let n = m2(0.0, 1.0, -1.0, 0.0);
        let s2 = Matrix::diag(&[1.0, 4.0]);
        assert_eq!(commutator(&n, &s2).unwrap(), m2(0.0, 3.0, 3.0, 0.0));
        assert!(matches!(commutator(&a, &Matrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn cartan_split_examples() {
        let s = m2(1.0, 2.0, 2.0, 5.0);
        let (k, p) = cartan_split(&s);
        assert_eq!(k.max_abs(), 0.0);
        assert_eq!(p.to_matrix(), s);
        let w = m2(0.0, 2.0, -2.0, 0.0);
        let (k, p) = cartan_split(&w);
        assert_eq!(k.to_matrix(), w);
        assert_eq!(p.max_abs(), 0.0);
        let (k, p) = cartan_split(&m2(1.0, 2.0, 0.0, 1.0));
        assert_eq!(k.to_matrix(), m2(0.0, 1.0, -1.0, 0.0));
        assert_eq!(p.to_matrix(), m2(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn char_poly_small_cases() {
        // det(diag(1,2) − w) = w² − 3w + 2
        assert_eq!(char_poly(&Matrix::diag(&[1.0, 2.0])), vec![2.0, -3.0, 1.0]);
        // det(0 − wI) = (−w)³
        assert_eq!(char_poly(&Matrix::zeros(3)), vec![0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn jacobi_small_cases() {
        assert_eq!(eigenvalues_sym(&SymMatrix::diag(&[2.0, 1.0])).unwrap(), vec![1.0, 2.0]);
        let swap = SymMatrix::from_matrix_projected(&m2(0.0, 1.0, 1.0, 0.0));
        let ev = eigenvalues_sym(&swap).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank_examples() {
        let i = Matrix::identity(3);
        assert_eq!(numerical_rank(&[i.clone(), i.scale(2.0)], DEFAULT_RANK_TOL).unwrap(), 1);
        let mut e11 = Matrix::zeros(2);
        e11[(0, 0)] = 1.0;
        let mut e22 = Matrix::zeros(2);
        e22[(1, 1)] = 1.0;
        assert_eq!(numerical_rank(&[e11, e22], DEFAULT_RANK_TOL).unwrap(), 2);
        assert_eq!(numerical_rank(&[], DEFAULT_RANK_TOL).unwrap(), 0);
        assert!(numerical_rank(std::slice::from_ref(&i), 0.0).is_err());
    }

    #[test]
    fn random_generation_is_deterministic() {
        assert_eq!(random_sym(4, 11).unwrap(), random_sym(4, 11).unwrap());
        assert_ne!(random_sym(4, 11).unwrap(), random_sym(4, 12).unwrap());
        assert_eq!(random_skew_simple(5, 3).unwrap(), random_skew_simple(5, 3).unwrap());
        assert!(random_sym(1, 0).is_err());
    }

    #[test]
    fn two_by_two_skew_is_simple_iff_nonzero() {
        let mut k = SkewMatrix::zeros(2);
        assert!(!has_simple_spectrum(&k, SIMPLE_SPECTRUM_GAP).unwrap());
        k.set(1, 0, 0.3);
        assert!(has_simple_spectrum(&k, SIMPLE_SPECTRUM_GAP).unwrap());
    }

    #[test]
    fn repeated_pair_is_rejected() {
        // Two identical rotation blocks: eigenvalues ±i twice.
        let mut k = SkewMatrix::zeros(4);
        k.set(1, 0, 1.0);
        k.set(3, 2, 1.0);
        assert!(!has_simple_spectrum(&k, SIMPLE_SPECTRUM_GAP).unwrap());
        k.set(3, 2, 2.0);
        assert!(has_simple_spectrum(&k, SIMPLE_SPECTRUM_GAP).unwrap());
    }

    #[test]
    fn packed_storage_accessors() {
        let mut s = SymMatrix::zeros(3);
        s.set(0, 2, 4.0);
        assert_eq!(s.get(2, 0), 4.0);
        let mut k = SkewMatrix::zeros(3);
        k.set(0, 2, 4.0);
        assert_eq!(k.get(2, 0), -4.0);
        assert_eq!(k.get(1, 1), 0.0);
        assert_eq!(k.to_matrix().skewness_defect(), 0.0);
    }
}
