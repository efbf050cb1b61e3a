//! A finite-dimensional model of the flows: the group of unipotent `3n × 3n`
//! matrices
//!
//! ```text
//! g(S, N) = | I  S  S²/2 + N |
//!           | 0  I  S        |
//!           | 0  0  I        |
//! ```
//!
//! with `S` symmetric and `N` skew, its Lie algebra of matrices
//! `X(S, N) = [0 S N; 0 0 S; 0 0 0]`, and the dual realized as
//! `A(S̃, Ñ) = [0 0 0; S̃ 0 0; 2Ñ S̃ 0]` under `(X, A) = tr(XA)`.
//!
//! Everything is computed on the `(S, N)` block data; `materialize` builds the
//! full matrices for cross-checks.

use alloc::vec::Vec;

use crate::matrix::{commutator, numerical_rank, Matrix, SkewMatrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::{Error, Result};

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

fn skew_of(m: &Matrix) -> SkewMatrix {
    SkewMatrix::from_matrix_projected(m)
}

fn sym_of(m: &Matrix) -> SymMatrix {
    SymMatrix::from_matrix_projected(m)
}

/// Assembles a `3n × 3n` matrix from a 3 × 3 grid of optional blocks.
fn assemble(n: usize, blocks: [[Option<&Matrix>; 3]; 3]) -> Matrix {
    Matrix::from_fn(3 * n, |r, c| match blocks[r / n][c / n] {
        Some(b) => b[(r % n, c % n)],
        None => 0.0,
    })
}

/// Reads block `(br, bc)` of a `3n × 3n` matrix.
pub fn block(m: &Matrix, n: usize, br: usize, bc: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| m[(br * n + i, bc * n + j)])
}

/// `g(S, N)`; equal to `exp(X(S, N))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElem {
    pub s: SymMatrix,
    pub n: SkewMatrix,
}

impl GroupElem {
    pub fn new(s: SymMatrix, n: SkewMatrix) -> Result<Self> {
        same_dim(s.dim(), n.dim())?;
        Ok(Self { s, n })
    }

    pub fn identity(n: usize) -> Self {
        Self { s: SymMatrix::zeros(n), n: SkewMatrix::zeros(n) }
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `g(S, N)⁻¹ = g(−S, −N)`.
    pub fn inverse(&self) -> Self {
        Self { s: self.s.scale(-1.0), n: self.n.scale(-1.0) }
    }

    pub fn materialize(&self) -> Matrix {
        let n = self.dim();
        let s = self.s.to_matrix();
        let corner = &(&s * &s).scale(0.5) + &self.n.to_matrix();
        let id = Matrix::identity(n);
        assemble(n, [[Some(&id), Some(&s), Some(&corner)], [None, Some(&id), Some(&s)], [None, None, Some(&id)]])
    }
}

/// `X(S, N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElem {
    pub s: SymMatrix,
    pub n: SkewMatrix,
}

impl AlgElem {
    pub fn new(s: SymMatrix, n: SkewMatrix) -> Result<Self> {
        same_dim(s.dim(), n.dim())?;
        Ok(Self { s, n })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `exp(X(S, N)) = g(S, N)`.
    pub fn exp(&self) -> GroupElem {
        GroupElem { s: self.s.clone(), n: self.n.clone() }
    }

    pub fn materialize(&self) -> Matrix {
        let n = self.dim();
        let s = self.s.to_matrix();
        let nn = self.n.to_matrix();
        assemble(n, [[None, Some(&s), Some(&nn)], [None, None, Some(&s)], [None, None, None]])
    }
}

/// `A(S̃, Ñ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElem {
    pub s: SymMatrix,
    pub n: SkewMatrix,
}

impl DualElem {
    pub fn new(s: SymMatrix, n: SkewMatrix) -> Result<Self> {
        same_dim(s.dim(), n.dim())?;
        Ok(Self { s, n })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn materialize(&self) -> Matrix {
        let n = self.dim();
        let s = self.s.to_matrix();
        let nn = self.n.to_matrix().scale(2.0);
        assemble(n, [[None, None, None], [Some(&s), None, None], [Some(&nn), Some(&s), None]])
    }
}

/// `g(S,N) g(T,M) = g(S + T, N + M + [S,T]/2)`.
pub fn group_mul(g1: &GroupElem, g2: &GroupElem) -> Result<GroupElem> {
    same_dim(g1.dim(), g2.dim())?;
    let bracket = commutator(&g1.s.to_matrix(), &g2.s.to_matrix())?;
    Ok(GroupElem { s: g1.s.add_scaled(1.0, &g2.s), n: g1.n.add_scaled(1.0, &g2.n).add_scaled(0.5, &skew_of(&bracket)) })
}

/// `[X(S₁,N₁), X(S₂,N₂)] = X(0, [S₁,S₂])`.
pub fn alg_bracket(x1: &AlgElem, x2: &AlgElem) -> Result<AlgElem> {
    same_dim(x1.dim(), x2.dim())?;
    let bracket = commutator(&x1.s.to_matrix(), &x2.s.to_matrix())?;
    Ok(AlgElem { s: SymMatrix::zeros(x1.dim()), n: skew_of(&bracket) })
}

/// `(X(S,N), A(S̃,Ñ)) = 2 tr(S S̃) + 2 tr(N Ñ)`.
pub fn pairing_f(x: &AlgElem, a: &DualElem) -> Result<f64> {
    same_dim(x.dim(), a.dim())?;
    let ss = x.s.to_matrix().trace_product(&a.s.to_matrix());
    let nn = x.n.to_matrix().trace_product(&a.n.to_matrix());
    Ok(2.0 * ss + 2.0 * nn)
}

/// `Ad_{g(T,M)} X(S,N) = g X g⁻¹ = X(S, N + [T,S])`.
pub fn adjoint_f(g: &GroupElem, x: &AlgElem) -> Result<AlgElem> {
    same_dim(g.dim(), x.dim())?;
    let bracket = commutator(&g.s.to_matrix(), &x.s.to_matrix())?;
    Ok(AlgElem { s: x.s.clone(), n: x.n.add_scaled(1.0, &skew_of(&bracket)) })
}

/// `Ad*_{g(T,M)} A(S̃,Ñ) = A(S̃ + [Ñ,T], Ñ)`, characterized by
/// `(X, Ad*_g A) = (Ad_g X, A)`.
pub fn coadjoint_f(g: &GroupElem, a: &DualElem) -> Result<DualElem> {
    same_dim(g.dim(), a.dim())?;
    let bracket = commutator(&a.n.to_matrix(), &g.s.to_matrix())?;
    Ok(DualElem { s: a.s.add_scaled(1.0, &sym_of(&bracket)), n: a.n.clone() })
}

/// `H_f(A(S̃,Ñ)) = (2/3) tr S̃³`.
pub fn hamiltonian_f(a: &DualElem) -> f64 {
    let s = a.s.to_matrix();
    (2.0 / 3.0) * (&s * &s).trace_product(&s)
}

/// Gradient of [`hamiltonian_f`] under [`pairing_f`]: `X(S̃², 0)`.
pub fn gradient_f(a: &DualElem) -> AlgElem {
    let s = a.s.to_matrix();
    AlgElem { s: sym_of(&(&s * &s)), n: SkewMatrix::zeros(a.dim()) }
}

/// Infinitesimal coadjoint action `A(S̃,Ñ) ↦ A([Ñ,T], 0)` of `X(T, M)`.
pub fn coadjoint_infinitesimal(x: &AlgElem, a: &DualElem) -> Result<DualElem> {
    same_dim(x.dim(), a.dim())?;
    let bracket = commutator(&a.n.to_matrix(), &x.s.to_matrix())?;
    Ok(DualElem { s: sym_of(&bracket), n: SkewMatrix::zeros(a.dim()) })
}

/// Lie–Poisson flow of [`hamiltonian_f`]: `Ṡ̃ = [Ñ, S̃²]`, `Ṅ = 0`.
pub fn induced_flow_rhs(a: &DualElem) -> DualElem {
    coadjoint_infinitesimal(&gradient_f(a), a).expect("same dimension")
}

/// Rank of `T ↦ [N, T]` on symmetric matrices, the dimension of the orbit
/// through any `A(·, N)`.
pub fn orbit_dimension_f(n: &SkewMatrix) -> Result<usize> {
    let dim = n.dim();
    let nm = n.to_matrix();
    let mut images = Vec::with_capacity(dim * (dim + 1) / 2);
    for i in 0..dim {
        for j in 0..=i {
            let mut t = SymMatrix::zeros(dim);
            t.set(i, j, 1.0);
            images.push(commutator(&nm, &t.to_matrix())?);
        }
    }
    numerical_rank(&images, DEFAULT_RANK_TOL)
}
