//! Conserved quantities of the hierarchy: the Hamiltonians `H_{kℓ}`, their
//! loop gradients, the R-Poisson bracket, spectral-curve coefficients, and the
//! orbit Casimirs `tr(S Nˡ)`.

use alloc::vec::Vec;

use crate::laurent::{pairing, rbracket, BILoop, LaurentLoop};
use crate::linalg;
use crate::matrix::{char_poly, commutator, numerical_rank, Matrix, SkewMatrix, SymMatrix, DEFAULT_RANK_TOL};
use crate::symmetrizer::SymmetrizerTable;
use crate::{Error, Result};

/// Index `(k, ℓ)` of a Hamiltonian: `k ≥ 1`, `ℓ` even, `ℓ ≤ k − 1`.
///
/// Whether it belongs to the commuting family in a given dimension is a
/// separate question, see [`IntegralIndex::is_admissible`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralIndex {
    k: usize,
    l: usize,
}

impl IntegralIndex {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("integral index needs k >= 1"));
        }
        if l % 2 == 1 {
            return Err(Error::InvalidArgument("integral index needs even l"));
        }
        if l >= k {
            return Err(Error::InvalidArgument("integral index needs l <= k - 1"));
        }
        Ok(Self { k, l })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `k ≤ n − 1` and `ℓ ≤ n − 2`.
    pub fn is_admissible(&self, n: usize) -> bool {
        self.k < n && self.l + 2 <= n
    }
}

impl core::fmt::Display for IntegralIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "H_{}_{}", self.k, self.l)
    }
}

/// All admissible indices for dimension `n`, ordered by `k` then `ℓ`. There
/// are `⌊n²/4⌋` of them.
pub fn enumerate_indices(n: usize) -> Vec<IntegralIndex> {
    let mut out = Vec::new();
    for k in 1..n {
        for l in (0..k).step_by(2) {
            if l + 2 <= n {
                out.push(IntegralIndex { k, l });
            }
        }
    }
    out
}

/// `H_{kℓ}(X) = 1/(k+1) · [z^ℓ] tr((S + zN)^{k+1})`.
pub fn hamiltonian(x: &BILoop, idx: IntegralIndex) -> Result<f64> {
    let p = x.to_loop().pow(idx.k as u32 + 1)?;
    Ok(p.coeff(idx.l as i64).trace() / (idx.k + 1) as f64)
}

/// `dH_{kℓ}(X) = (S + zN)^k z^{−(ℓ+1)}`.
pub fn gradient_loop(x: &BILoop, idx: IntegralIndex) -> Result<LaurentLoop> {
    let p = x.to_loop().pow(idx.k as u32)?;
    if p.is_zero() {
        return Ok(p);
    }
    Ok(shift_loop(&p, -(idx.l as i64 + 1)))
}

fn shift_loop(p: &LaurentLoop, by: i64) -> LaurentLoop {
    let (lo, hi) = p.window().expect("nonzero loop");
    let coeffs = (lo..=hi).map(|j| p.coeff(j)).collect();
    LaurentLoop::from_coeffs(lo + by, coeffs).expect("nonempty")
}

/// `{H₁, H₂}(X) = (X, [dH₁, dH₂]_R)`.
pub fn poisson_bracket(x: &BILoop, idx1: IntegralIndex, idx2: IntegralIndex) -> Result<f64> {
    let g1 = gradient_loop(x, idx1)?;
    let g2 = gradient_loop(x, idx2)?;
    pairing(&x.to_loop(), &rbracket(&g1, &g2)?)
}

/// Coefficients `I_{rk}` of `det(S + zN − wI) = Σ I_{rk} z^{2k} w^{n−r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTable {
    n: usize,
    /// `coeffs[r][d]` is the coefficient of `z^d w^{n−r}`, `0 ≤ d ≤ r`.
    coeffs: Vec<Vec<f64>>,
}

impl SpectralTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `I_{rk}`, or `None` outside `0 ≤ r ≤ n`, `0 ≤ k ≤ ⌊r/2⌋`.
    pub fn get(&self, r: usize, k: usize) -> Option<f64> {
        (r <= self.n && 2 * k <= r).then(|| self.coeffs[r][2 * k])
    }

    /// Coefficient of `z^d w^{n−r}` for any `d ≤ r`.
    pub fn raw(&self, r: usize, d: usize) -> Option<f64> {
        self.coeffs.get(r).and_then(|row| row.get(d)).copied()
    }

    /// Largest coefficient of an odd power of `z`; zero up to rounding.
    pub fn max_odd(&self) -> f64 {
        self.coeffs.iter().flat_map(|row| row.iter().skip(1).step_by(2)).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest coefficient overall.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// The nontrivial integrals `I_{rk}` with `1 ≤ r ≤ n`, `k ≤ ⌊r/2⌋ − 1`.
    pub fn nontrivial(&self) -> Vec<((usize, usize), f64)> {
        let mut out = Vec::new();
        for r in 1..=self.n {
            for k in 0..(r / 2) {
                out.push(((r, k), self.coeffs[r][2 * k]));
            }
        }
        out
    }
}

/// Interpolates `det(S + zN − wI)` in `z` from `n + 1` Chebyshev nodes on
/// `[−1, 1]`, taking the characteristic polynomial in `w` at each node.
pub fn spectral_coeffs(s: &SymMatrix, n: &SkewMatrix) -> Result<SpectralTable> {
    let dim = s.dim();
    if n.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: n.dim() });
    }
    let sm = s.to_matrix();
    let nm = n.to_matrix();
    let nodes = dim + 1;
    let zs: Vec<f64> =
        (0..nodes).map(|m| libm::cos((2 * m + 1) as f64 * core::f64::consts::PI / (2 * nodes) as f64)).collect();
    let mut vander = Vec::with_capacity(nodes * nodes);
    for &z in &zs {
        let mut p = 1.0;
        for _ in 0..nodes {
            vander.push(p);
            p *= z;
        }
    }
    // rhs[m][i]: coefficient of w^i at node m.
    let mut rhs = Vec::with_capacity(nodes * nodes);
    for &z in &zs {
        rhs.extend(char_poly(&sm.add_scaled(z, &nm)));
    }
    linalg::lu_solve(&mut vander, nodes, &mut rhs, nodes)?;
    // rhs[d][i] now holds the coefficient of z^d w^i.
    let coeffs = (0..=dim).map(|r| (0..=r).map(|d| rhs[d * nodes + (dim - r)]).collect()).collect();
    Ok(SpectralTable { n: dim, coeffs })
}

/// `[tr(S Nˡ)]` for even `ℓ`, `0 ≤ ℓ ≤ n − 1`.
pub fn casimirs(s: &SymMatrix, n: &SkewMatrix) -> Vec<f64> {
    let sm = s.to_matrix();
    let nm = n.to_matrix();
    let n2 = &nm * &nm;
    let mut power = Matrix::identity(s.dim());
    let mut out = Vec::new();
    for _ in (0..s.dim()).step_by(2) {
        out.push(sm.trace_product(&power));
        power = &power * &n2;
    }
    out
}

/// Whether `S` lies on the coadjoint orbit through `S0` for fixed `N0`,
/// judged by agreement of all Casimirs to `tol`.
pub fn orbit_membership(s: &SymMatrix, s0: &SymMatrix, n0: &SkewMatrix, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("orbit tolerance must be positive"));
    }
    if s.dim() != s0.dim() {
        return Err(Error::DimensionMismatch { expected: s0.dim(), found: s.dim() });
    }
    let a = casimirs(s, n0);
    let b = casimirs(s0, n0);
    Ok(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol))
}

/// Rank (tolerance 1e−8) of the Hamiltonian vector fields
/// `−[sym_{k−ℓ,ℓ}(S,N), N]` over all admissible indices.
pub fn integral_independence_rank(s: &SymMatrix, n: &SkewMatrix) -> Result<usize> {
    let dim = s.dim();
    let sm = s.to_matrix();
    let nm = n.to_matrix();
    let table = SymmetrizerTable::new(&sm, &nm, dim.saturating_sub(1))?;
    let fields = enumerate_indices(dim)
        .into_iter()
        .map(|idx| commutator(&nm, table.get(idx.k - idx.l, idx.l).expect("within degree")))
        .collect::<Result<Vec<_>>>()?;
    numerical_rank(&fields, DEFAULT_RANK_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::CMatrix;
    use crate::matrix::{random_skew_simple, random_sym};

    fn idx(k: usize, l: usize) -> IntegralIndex {
        IntegralIndex::new(k, l).unwrap()
    }

    fn bi(n: usize, seed: u64) -> BILoop {
        BILoop::new(random_sym(n, seed).unwrap(), random_skew_simple(n, seed + 500).unwrap()).unwrap()
    }

    fn j2() -> SkewMatrix {
        SkewMatrix::try_from_matrix(&Matrix::from_row_major(&[0.0, 1.0, -1.0, 0.0]).unwrap(), 0.0).unwrap()
    }

    fn orthogonal(n: usize, seed: u64) -> Matrix {
        let k = random_skew_simple(n, seed).unwrap().to_matrix();
        CMatrix::from_real(&k).expm().real_part()
    }

    #[test]
    fn index_validation() {
        assert!(IntegralIndex::new(0, 0).is_err());
        assert!(IntegralIndex::new(3, 1).is_err());
        assert!(IntegralIndex::new(2, 2).is_err());
        assert!(idx(2, 0).is_admissible(3));
        assert!(!idx(2, 0).is_admissible(2));
        assert!(!idx(5, 4).is_admissible(5));
    }

    #[test]
    fn enumeration_examples_and_count() {
        assert_eq!(enumerate_indices(2), [idx(1, 0)]);
        assert_eq!(enumerate_indices(4), [idx(1, 0), idx(2, 0), idx(3, 0), idx(3, 2)]);
        assert_eq!(enumerate_indices(6).len(), 9);
        for n in 2..=12 {
            let list = enumerate_indices(n);
            assert_eq!(list.len(), n * n / 4, "n = {n}");
            assert!(list.iter().all(|i| i.is_admissible(n)));
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let x = BILoop::new(SymMatrix::diag(&[1.0, 2.0]), j2()).unwrap();
        assert!((hamiltonian(&x, idx(1, 0)).unwrap() - 2.5).abs() < 1e-15);
        assert!((hamiltonian(&x, idx(2, 0)).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_matches_symmetrizer_trace() {
        // [z^ℓ] tr (S+zN)^{k+1} = tr sym_{k+1−ℓ,ℓ}(S,N).
        let x = bi(5, 3);
        let t = SymmetrizerTable::new(&x.s.to_matrix(), &x.n.to_matrix(), 5).unwrap();
        for i in enumerate_indices(5) {
            let expect = t.get(i.k + 1 - i.l, i.l).unwrap().trace() / (i.k + 1) as f64;
            assert!((hamiltonian(&x, i).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_examples() {
        let x = bi(3, 4);
        let s = x.s.to_matrix();
        let n = x.n.to_matrix();
        let g1 = gradient_loop(&x, idx(1, 0)).unwrap();
        let e1 = LaurentLoop::from_coeffs(-1, alloc::vec![s.clone(), n.clone()]).unwrap();
        assert!(g1.max_abs_diff(&e1) < 1e-15);
        let g2 = gradient_loop(&x, idx(2, 0)).unwrap();
        let e2 = LaurentLoop::from_coeffs(-1, alloc::vec![&s * &s, &(&s * &n) + &(&n * &s), &n * &n]).unwrap();
        assert!(g2.max_abs_diff(&e2) < 1e-14);
        assert_eq!(g2.window(), Some((-1, 1)));
        let g32 = gradient_loop(&bi(4, 5), idx(3, 2)).unwrap();
        assert_eq!(g32.window(), Some((-3, 0)));
    }

    #[test]
    fn gradients_are_sigma_fixed() {
        for n in 2..=5 {
            let x = bi(n, 10 + n as u64);
            for i in enumerate_indices(n) {
                assert!(gradient_loop(&x, i).unwrap().is_sigma_fixed(1e-12), "n={n} {i}");
            }
        }
    }

    #[test]
    fn brackets_vanish() {
        let x = bi(4, 6);
        assert_eq!(poisson_bracket(&x, idx(2, 0), idx(2, 0)).unwrap(), 0.0);
        assert!(poisson_bracket(&x, idx(1, 0), idx(3, 2)).unwrap().abs() < 1e-10);
        for seed in 0..10 {
            let x = bi(5, 100 + seed);
            let list = enumerate_indices(5);
            for a in &list {
                for b in &list {
                    let ab = poisson_bracket(&x, *a, *b).unwrap();
                    let ba = poisson_bracket(&x, *b, *a).unwrap();
                    assert!(ab.abs() < 1e-9, "{a} {b}: {ab}");
                    assert!((ab + ba).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn bracket_with_a_linear_function_is_nonzero() {
        // f(X) = tr(A S) has gradient A z⁻¹ and is not a Casimir, so its
        // bracket with H_{1,0} is generically nonzero.
        let x = bi(4, 7);
        let g1 = gradient_loop(&x, idx(1, 0)).unwrap();
        let a = random_sym(4, 77).unwrap().to_matrix();
        let g2 = LaurentLoop::monomial(a, -1);
        let v = pairing(&x.to_loop(), &rbracket(&g1, &g2).unwrap()).unwrap();
        assert!(v.abs() > 1e-6);
    }

    #[test]
    fn hamiltonians_invariant_under_orthogonal_conjugation() {
        let x = bi(5, 8);
        let o = orthogonal(5, 9);
        let ot = o.transpose();
        let s2 = SymMatrix::from_matrix_projected(&(&(&ot * &x.s.to_matrix()) * &o));
        let n2 = SkewMatrix::from_matrix_projected(&(&(&ot * &x.n.to_matrix()) * &o));
        let y = BILoop::new(s2, n2).unwrap();
        for i in enumerate_indices(5) {
            let a = hamiltonian(&x, i).unwrap();
            let b = hamiltonian(&y, i).unwrap();
            assert!((a - b).abs() < 1e-11 * a.abs().max(1.0));
        }
    }

    #[test]
    fn spectral_table_basics() {
        let s = random_sym(4, 20).unwrap();
        let t0 = spectral_coeffs(&s, &SkewMatrix::zeros(4)).unwrap();
        let cp = char_poly(&s.to_matrix());
        for r in 0..=4 {
            assert!((t0.get(r, 0).unwrap() - cp[4 - r]).abs() < 1e-12);
            for k in 1..=r / 2 {
                assert!(t0.get(r, k).unwrap().abs() < 1e-12);
            }
        }
        let n = random_skew_simple(4, 21).unwrap();
        let t = spectral_coeffs(&s, &n).unwrap();
        assert!(t.max_odd() <= 1e-10 * t.scale().max(1.0));
        let t2 = spectral_coeffs(&random_sym(4, 22).unwrap(), &n).unwrap();
        for k in 1..=2 {
            assert!((t.get(2 * k, k).unwrap() - t2.get(2 * k, k).unwrap()).abs() < 1e-10);
        }
        assert_eq!(t.nontrivial().len(), 4);
        assert_eq!(t.get(5, 0), None);
        assert_eq!(t.get(3, 2), None);
    }

    #[test]
    fn spectral_top_coefficients() {
        // w^n coefficient is (−1)^n; det(S + zN) at w^0 has z^n coefficient
        // det N.
        let s = random_sym(3, 23).unwrap();
        let n = random_skew_simple(3, 24).unwrap();
        let t = spectral_coeffs(&s, &n).unwrap();
        assert!((t.get(0, 0).unwrap() + 1.0).abs() < 1e-12);
        assert!(t.raw(3, 3).unwrap().abs() < 1e-12);
        assert!((t.get(3, 0).unwrap() - crate::cmatrix::CMatrix::from_real(&s.to_matrix()).det().re).abs() < 1e-12);
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimirs(&SymMatrix::diag(&[1.0, 2.0]), &j2()), [3.0]);
        let s = random_sym(5, 30).unwrap();
        let n = random_skew_simple(5, 31).unwrap();
        assert_eq!(casimirs(&s, &n).len(), 3);
        let p = random_sym(5, 32).unwrap().to_matrix();
        let moved = SymMatrix::from_matrix_projected(&(&s.to_matrix() + &commutator(&n.to_matrix(), &p).unwrap()));
        let a = casimirs(&s, &n);
        let b = casimirs(&moved, &n);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(orbit_membership(&s, &s, &n, 1e-12).unwrap());
        assert!(orbit_membership(&moved, &s, &n, 1e-10).unwrap());
        let shifted = s.add_scaled(1.0, &SymMatrix::identity(5));
        assert!(!orbit_membership(&shifted, &s, &n, 1e-6).unwrap());
        assert!(orbit_membership(&s, &s, &n, 0.0).is_err());
    }

    #[test]
    fn independence_examples() {
        let x = bi(2, 40);
        assert_eq!(integral_independence_rank(&x.s, &x.n).unwrap(), 1);
        let n4 = random_skew_simple(4, 41).unwrap();
        assert_eq!(integral_independence_rank(&SymMatrix::zeros(4), &n4).unwrap(), 0);
        let full = (0..20).filter(|&seed| {
            let x = bi(4, 200 + seed);
            integral_independence_rank(&x.s, &x.n).unwrap() == 4
        });
        assert!(full.count() >= 19);
    }
}
