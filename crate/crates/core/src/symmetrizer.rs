//! Symmetrizers `sym_{ij}(A, B)`: the sum of all words with `i` letters `A`
//! and `j` letters `B`.
//!
//! The table is filled by the left recursion
//! `sym_{i,j} = A·sym_{i−1,j} + B·sym_{i,j−1}`, which costs one pair of
//! products per entry instead of `C(i+j, i)` word evaluations.

use alloc::vec::Vec;

use crate::linalg;
use crate::matrix::{commutator, numerical_rank, Matrix, SkewMatrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::{Error, Result};

/// Parity tolerance used by [`parity_check`].
pub const PARITY_TOL: f64 = 1e-13;

/// All `sym_{i,j}(A, B)` with `i + j ≤ degree`.
#[derive(Clone, Debug)]
pub struct SymmetrizerTable {
    a: Matrix,
    b: Matrix,
    degree: usize,
    table: Vec<Matrix>,
}

#[inline]
fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

impl SymmetrizerTable {
    pub fn new(a: &Matrix, b: &Matrix, degree: usize) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        let n = a.dim();
        let mut table = Vec::with_capacity(slot(0, degree) + 1);
        table.push(Matrix::identity(n));
        for d in 1..=degree {
            for j in 0..=d {
                let i = d - j;
                let mut m = Matrix::zeros(n);
                if i > 0 {
                    m += &(a * &table[slot(i - 1, j)]);
                }
                if j > 0 {
                    m += &(b * &table[slot(i, j - 1)]);
                }
                table.push(m);
            }
        }
        Ok(Self { a: a.clone(), b: b.clone(), degree, table })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `sym_{i,j}`, or `None` beyond the table degree.
    pub fn get(&self, i: usize, j: usize) -> Option<&Matrix> {
        (i + j <= self.degree).then(|| &self.table[slot(i, j)])
    }

    /// Largest entry of `sym_{i,j} − (sym_{i−1,j}·A + sym_{i,j−1}·B)`: the
    /// right recursion checked against the stored left recursion. The base
    /// entry `sym_{0,0} = I` reports zero.
    pub fn right_recursion_defect(&self, i: usize, j: usize) -> Option<f64> {
        let target = self.get(i, j)?;
        if i + j == 0 {
            return Some(0.0);
        }
        let n = self.a.dim();
        let mut m = Matrix::zeros(n);
        if i > 0 {
            m += &(self.get(i - 1, j)? * &self.a);
        }
        if j > 0 {
            m += &(self.get(i, j - 1)? * &self.b);
        }
        Some(target.max_abs_diff(&m))
    }

    /// `sym_{k−ℓ,ℓ}` for every `k < degree_bound` and `0 ≤ ℓ ≤ k`, ordered
    /// by `k` then `ℓ`.
    pub fn below_degree(&self, degree_bound: usize) -> Vec<Matrix> {
        let top = degree_bound.min(self.degree + 1);
        (0..top).flat_map(|k| (0..=k).map(move |l| (k, l))).map(|(k, l)| self.table[slot(k - l, l)].clone()).collect()
    }
}

/// `sym_{i,j}(A, B)`.
pub fn sym(a: &Matrix, b: &Matrix, i: usize, j: usize) -> Result<Matrix> {
    let t = SymmetrizerTable::new(a, b, i + j)?;
    Ok(t.get(i, j).cloned().expect("within degree"))
}

/// Relative residual of `[sym_{i,j+1}, A] + [sym_{i+1,j}, B] = 0`, measured
/// against `‖sym_{i,j+1}‖‖A‖ + ‖sym_{i+1,j}‖‖B‖` (Frobenius norms); zero
/// when that scale vanishes.
pub fn lemma_a_residual(a: &Matrix, b: &Matrix, i: usize, j: usize) -> Result<f64> {
    let t = SymmetrizerTable::new(a, b, i + j + 1)?;
    let x = t.get(i, j + 1).expect("within degree");
    let y = t.get(i + 1, j).expect("within degree");
    let r = &commutator(x, a)? + &commutator(y, b)?;
    let scale = x.norm() * a.norm() + y.norm() * b.norm();
    Ok(if scale == 0.0 { 0.0 } else { r.norm() / scale })
}

/// Whether `sym_{i,j}(S, N)` is symmetric for even `j` and skew for odd `j`,
/// to within [`PARITY_TOL`] relative to its size.
pub fn parity_check(s: &SymMatrix, n: &SkewMatrix, i: usize, j: usize) -> Result<bool> {
    let m = sym(&s.to_matrix(), &n.to_matrix(), i, j)?;
    let tol = PARITY_TOL * m.max_abs().max(1.0);
    Ok(if j.is_multiple_of(2) { m.asymmetry() <= tol } else { m.skewness_defect() <= tol })
}

/// Worst relative least-squares residual of `sym_{n−ℓ,ℓ}(A, B)`, `ℓ = 0..n`,
/// against the span of all symmetrizers of degree `< n`.
///
/// Regressor columns are normalized before the Householder QR solve.
pub fn cayley_hamilton_dependence(a: &Matrix, b: &Matrix) -> Result<f64> {
    let n = a.dim();
    let t = SymmetrizerTable::new(a, b, n)?;
    let cols: Vec<Vec<f64>> = t
        .below_degree(n)
        .into_iter()
        .filter_map(|m| {
            let norm = m.norm();
            (norm > 0.0).then(|| m.as_slice().iter().map(|x| x / norm).collect())
        })
        .collect();
    let mut worst: f64 = 0.0;
    for l in 0..=n {
        let target = t.get(n - l, l).expect("within degree");
        let tn = target.norm();
        if tn == 0.0 {
            continue;
        }
        let (_, res) = linalg::least_squares(&cols, target.as_slice())?;
        worst = worst.max(res / tn);
    }
    Ok(worst)
}

/// `A* = diag(c, c², …, cⁿ)` and `B*` with ones on the subdiagonal
/// `r − s = 1`. For generic `c` their symmetrizers of degree `< n` are
/// linearly independent.
pub fn witness_pair(n: usize, c: f64) -> Result<(Matrix, Matrix)> {
    if c.is_nan() || c <= 0.0 || c == 1.0 {
        return Err(Error::InvalidArgument("witness ratio must be positive and different from 1"));
    }
    Ok(witness_pair_unchecked(n, c))
}

/// [`witness_pair`] without the genericity guard, for probing degenerate
/// ratios such as `c = 1`.
pub fn witness_pair_unchecked(n: usize, c: f64) -> (Matrix, Matrix) {
    let a = Matrix::from_fn(n, |i, j| if i == j { libm::pow(c, (i + 1) as f64) } else { 0.0 });
    let b = Matrix::from_fn(n, |i, j| if i == j + 1 { 1.0 } else { 0.0 });
    (a, b)
}

/// Number of symmetrizers of degree `< n`, i.e. `n(n+1)/2`.
pub fn symmetrizer_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Numerical rank (tolerance 1e−8) of the symmetrizers of degree `< n` of
/// an arbitrary pair.
pub fn symmetrizer_rank(a: &Matrix, b: &Matrix) -> Result<usize> {
    let n = a.dim();
    let t = SymmetrizerTable::new(a, b, n.saturating_sub(1))?;
    numerical_rank(&t.below_degree(n), DEFAULT_RANK_TOL)
}

/// [`symmetrizer_rank`] for a symmetric/skew pair.
pub fn generic_independence(s: &SymMatrix, n: &SkewMatrix) -> Result<usize> {
    symmetrizer_rank(&s.to_matrix(), &n.to_matrix())
}
