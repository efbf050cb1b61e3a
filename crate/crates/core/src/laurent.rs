//! Finite matrix Laurent series `X(z) = Σ_{lo ≤ j ≤ hi} X_j z^j`.
//!
//! Arithmetic is exact on finite windows. Products whose degree span would
//! exceed a cap fail with [`Error::WindowOverflow`] instead of truncating;
//! explicit truncation goes through [`LaurentLoop::mul_window`].

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::matrix::{Matrix, SkewMatrix, SymMatrix};
use crate::{Error, Result};

/// Largest degree span (`hi − lo`) a product may produce by default.
pub const DEFAULT_WINDOW_CAP: i64 = 64;
/// Tolerance for the `g(z) g(−z)ᵀ = I` check in [`loop_inverse_by_symmetry`].
pub const SYMMETRY_TOL: f64 = 1e-10;
const EXP_TERM_TOL: f64 = 1e-14;
const EXP_TERM_CAP: usize = 200;

/// A finite Laurent loop of `n × n` real matrices, trimmed so that the
/// extreme stored coefficients are nonzero (the zero loop stores nothing).
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentLoop {
    n: usize,
    lo: i64,
    coeffs: Vec<Matrix>,
}

impl LaurentLoop {
    pub fn zero(n: usize) -> Self {
        Self { n, lo: 0, coeffs: Vec::new() }
    }

    pub fn constant(m: Matrix) -> Self {
        Self::monomial(m, 0)
    }

    pub fn monomial(m: Matrix, degree: i64) -> Self {
        let n = m.dim();
        Self::from_parts(n, degree, alloc::vec![m])
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Matrix::identity(n))
    }

    /// Builds `Σ coeffs[i] z^{lo+i}`; all coefficients must share a dimension.
    pub fn from_coeffs(lo: i64, coeffs: Vec<Matrix>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument("empty coefficient list; use LaurentLoop::zero"));
        };
        let n = first.dim();
        if let Some(bad) = coeffs.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        Ok(Self::from_parts(n, lo, coeffs))
    }

    fn from_parts(n: usize, lo: i64, mut coeffs: Vec<Matrix>) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero(n);
        }
        while coeffs.last().is_some_and(Matrix::is_zero) {
            coeffs.pop();
        }
        coeffs.drain(..lead);
        Self { n, lo: lo + lead as i64, coeffs }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(lo, hi)` of the trimmed support, `None` for the zero loop.
    pub fn window(&self) -> Option<(i64, i64)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.coeffs.len() as i64 - 1))
        }
    }

    pub fn coeff_ref(&self, j: i64) -> Option<&Matrix> {
        if j < self.lo {
            return None;
        }
        self.coeffs.get((j - self.lo) as usize)
    }

    /// Coefficient of `z^j` (zero outside the support).
    pub fn coeff(&self, j: i64) -> Matrix {
        self.coeff_ref(j).cloned().unwrap_or_else(|| Matrix::zeros(self.n))
    }

    /// `(degree, coefficient)` pairs over the support.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Applies `f` to each coefficient, keeping degrees.
    pub fn map_coeffs(&self, mut f: impl FnMut(i64, &Matrix) -> Matrix) -> Self {
        let coeffs = self.terms().map(|(j, c)| f(j, c)).collect();
        Self::from_parts(self.n, self.lo, coeffs)
    }

    /// Restriction to degrees in `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        if lo > hi {
            return Self::zero(self.n);
        }
        let coeffs = (lo..=hi).map(|j| self.coeff(j)).collect();
        Self::from_parts(self.n, lo, coeffs)
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let (lo, hi) = match (self.window(), other.window()) {
            (None, None) => return Ok(Self::zero(self.n)),
            (Some(w), None) | (None, Some(w)) => w,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        };
        let coeffs = (lo..=hi)
            .map(|j| match (self.coeff_ref(j), other.coeff_ref(j)) {
                (Some(a), Some(b)) => a.add_scaled(s, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.scale(s),
                (None, None) => Matrix::zeros(self.n),
            })
            .collect();
        Ok(Self::from_parts(self.n, lo, coeffs))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|_, c| c.scale(s))
    }

    /// Cauchy product with the default window cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, DEFAULT_WINDOW_CAP)
    }

    /// Cauchy product; fails if the result's degree span exceeds `cap`.
    pub fn mul_capped(&self, other: &Self, cap: i64) -> Result<Self> {
        self.check_dim(other)?;
        let (Some((alo, ahi)), Some((blo, bhi))) = (self.window(), other.window()) else {
            return Ok(Self::zero(self.n));
        };
        let (lo, hi) = (alo + blo, ahi + bhi);
        if hi - lo > cap {
            return Err(Error::WindowOverflow { span: hi - lo, cap });
        }
        Ok(self.mul_window(other, lo, hi))
    }

    /// Coefficients `lo..=hi` of the product, computing nothing outside.
    pub fn mul_window(&self, other: &Self, lo: i64, hi: i64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let (Some((alo, ahi)), Some((blo, bhi))) = (self.window(), other.window()) else {
            return Self::zero(n);
        };
        let lo = lo.max(alo + blo);
        let hi = hi.min(ahi + bhi);
        if lo > hi {
            return Self::zero(n);
        }
        let coeffs = (lo..=hi)
            .map(|m| {
                let mut acc = Matrix::zeros(n);
                let jlo = alo.max(m - bhi);
                let jhi = ahi.min(m - blo);
                for j in jlo..=jhi {
                    acc += &(&self.coeffs[(j - alo) as usize] * &other.coeffs[(m - j - blo) as usize]);
                }
                acc
            })
            .collect();
        Self::from_parts(n, lo, coeffs)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Loop commutator `XY − YX`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Degrees `≥ 0`.
    pub fn proj_plus(&self) -> Self {
        match self.window() {
            Some((_, hi)) if hi >= 0 => self.restrict(0, hi),
            _ => Self::zero(self.n),
        }
    }

    /// Degrees `< 0`.
    pub fn proj_minus(&self) -> Self {
        match self.window() {
            Some((lo, _)) if lo < 0 => self.restrict(lo, -1),
            _ => Self::zero(self.n),
        }
    }

    /// `R = Π₊ − Π₋`.
    pub fn r_operator(&self) -> Self {
        self.map_coeffs(|j, c| if j >= 0 { c.clone() } else { c.scale(-1.0) })
    }

    /// `(σX)(z) = −X(−z)ᵀ`: coefficient `j` becomes `(−1)^{j+1} X_jᵀ`.
    pub fn sigma(&self) -> Self {
        self.map_coeffs(|j, c| {
            let t = c.transpose();
            if j.rem_euclid(2) == 0 {
                t.scale(-1.0)
            } else {
                t
            }
        })
    }

    /// `z ↦ X(−z)ᵀ`: coefficient `j` becomes `(−1)^j X_jᵀ`.
    pub fn reflect_transpose(&self) -> Self {
        self.map_coeffs(|j, c| {
            let t = c.transpose();
            if j.rem_euclid(2) == 0 {
                t
            } else {
                t.scale(-1.0)
            }
        })
    }

    /// Lie algebra of the twisted loop group: even coefficients skew, odd
    /// coefficients symmetric (equivalently `σX = X`).
    pub fn is_sigma_fixed(&self, tol: f64) -> bool {
        self.terms().all(|(j, c)| if j.rem_euclid(2) == 0 { c.skewness_defect() <= tol } else { c.asymmetry() <= tol })
    }

    /// Dual parity: even coefficients symmetric, odd coefficients skew.
    pub fn is_sigma_star(&self, tol: f64) -> bool {
        self.terms().all(|(j, c)| if j.rem_euclid(2) == 0 { c.asymmetry() <= tol } else { c.skewness_defect() <= tol })
    }

    /// Evaluates `X(z)` at a complex point.
    pub fn eval(&self, z: Complex64) -> CMatrix {
        let mut out = CMatrix::zeros(self.n);
        for (j, c) in self.terms() {
            out.add_assign_scaled(z.powi(j as i32), &CMatrix::from_real(c));
        }
        out
    }

    /// Largest coefficient-wise entry difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }
}

/// The point `S + zN` of the dual, with `S` symmetric and `N` skew.
#[derive(Clone, Debug, PartialEq)]
pub struct BILoop {
    pub s: SymMatrix,
    pub n: SkewMatrix,
}

impl BILoop {
    pub fn new(s: SymMatrix, n: SkewMatrix) -> Result<Self> {
        if s.dim() != n.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), found: n.dim() });
        }
        Ok(Self { s, n })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn to_loop(&self) -> LaurentLoop {
        LaurentLoop::from_parts(self.dim(), 0, alloc::vec![self.s.to_matrix(), self.n.to_matrix()])
    }
}

/// `(X, Y) = Σ_j tr(X_j Y_{−j−1})`, the residue of `tr(X(z)Y(z))`.
pub fn pairing(x: &LaurentLoop, y: &LaurentLoop) -> Result<f64> {
    x.check_dim(y)?;
    Ok(x.terms().filter_map(|(j, xj)| y.coeff_ref(-j - 1).map(|yk| xj.trace_product(yk))).sum())
}

/// `[X, Y]_R = [Π₊X, Π₊Y] − [Π₋X, Π₋Y]`.
pub fn rbracket(x: &LaurentLoop, y: &LaurentLoop) -> Result<LaurentLoop> {
    x.check_dim(y)?;
    let plus = x.proj_plus().commutator(&y.proj_plus())?;
    let minus = x.proj_minus().commutator(&y.proj_minus())?;
    plus.sub(&minus)
}

/// The same bracket through the r-matrix: `½([RX, Y] + [X, RY])`.
pub fn rbracket_via_r(x: &LaurentLoop, y: &LaurentLoop) -> Result<LaurentLoop> {
    let a = x.r_operator().commutator(y)?;
    let b = x.commutator(&y.r_operator())?;
    Ok(a.add(&b)?.scale(0.5))
}

/// Largest coefficient entry of `[RX,RY] − R([RX,Y] + [X,RY]) + [X,Y]`,
/// which vanishes when `R` solves the modified Yang–Baxter equation.
pub fn mybe_residual(x: &LaurentLoop, y: &LaurentLoop) -> Result<f64> {
    let rx = x.r_operator();
    let ry = y.r_operator();
    let lhs = rx.commutator(&ry)?;
    let inner = rx.commutator(y)?.add(&x.commutator(&ry)?)?.r_operator();
    let total = lhs.sub(&inner)?.add(&x.commutator(y)?)?;
    Ok(total.max_abs())
}

/// Partial sums of `exp(X)` restricted to degrees `lo..=hi` (`lo ≤ 0 ≤ hi`).
///
/// `X` must be one-sided (all degrees negative, or all nonnegative) so that
/// each restricted power is exact in the window. Summation stops once the
/// next term is below `1e−14` in the window.
pub fn exp_truncated(x: &LaurentLoop, lo: i64, hi: i64) -> Result<LaurentLoop> {
    if lo > 0 || hi < 0 {
        return Err(Error::InvalidArgument("exp window must contain degree 0"));
    }
    if let Some((xlo, xhi)) = x.window() {
        if xlo < 0 && xhi >= 0 {
            return Err(Error::InvalidArgument("exp_truncated needs a one-sided loop"));
        }
    }
    let n = x.dim();
    let mut sum = LaurentLoop::identity(n);
    let mut term = LaurentLoop::identity(n);
    for m in 1..=EXP_TERM_CAP {
        term = term.mul_window(x, lo, hi).scale(1.0 / m as f64);
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&term)?;
        if term.max_abs() < EXP_TERM_TOL {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence { routine: "exp_truncated", iterations: EXP_TERM_CAP })
}

/// Inverse of a one-sided loop in the twisted group, `g⁻¹(z) = g(−z)ᵀ`.
/// Verifies `g(z) g(−z)ᵀ = I` on the window of `g` to [`SYMMETRY_TOL`].
pub fn loop_inverse_by_symmetry(g: &LaurentLoop) -> Result<LaurentLoop> {
    let inv = g.reflect_transpose();
    let n = g.dim();
    let (lo, hi) = g.window().ok_or(Error::InvalidArgument("zero loop is not invertible"))?;
    let prod = g.mul_window(&inv, lo, hi);
    let defect = prod.sub(&LaurentLoop::identity(n))?.restrict(lo, hi).max_abs();
    if defect > SYMMETRY_TOL {
        return Err(Error::SymmetryViolated { residual: defect });
    }
    Ok(inv)
}

/// Coadjoint action of the factorizable group on the dual,
/// `Π₋(g₊⁻¹ (Π₋X) g₊) + Π₊(g₋⁻¹ (Π₊X) g₋)`.
///
/// `g_plus` has only nonnegative degrees, `g_minus` only nonpositive ones with
/// constant term `I`. Only coefficients inside the window of `X` are formed,
/// so the output window is contained in that of `X`.
pub fn coadjoint(g_plus: &LaurentLoop, g_minus: &LaurentLoop, x: &LaurentLoop) -> Result<LaurentLoop> {
    x.check_dim(g_plus)?;
    x.check_dim(g_minus)?;
    if g_plus.window().is_some_and(|(lo, _)| lo < 0) {
        return Err(Error::InvalidArgument("g_plus must have nonnegative degrees"));
    }
    if g_minus.window().is_some_and(|(_, hi)| hi > 0) {
        return Err(Error::InvalidArgument("g_minus must have nonpositive degrees"));
    }
    let n = x.dim();
    if g_minus.coeff(0).max_abs_diff(&Matrix::identity(n)) > SYMMETRY_TOL {
        return Err(Error::InvalidArgument("g_minus must equal I at infinity"));
    }
    for g in [g_plus, g_minus] {
        if let Some((lo, hi)) = g.window() {
            if hi - lo > DEFAULT_WINDOW_CAP {
                return Err(Error::WindowOverflow { span: hi - lo, cap: DEFAULT_WINDOW_CAP });
            }
        }
    }
    let Some((xlo, xhi)) = x.window() else {
        return Ok(LaurentLoop::zero(n));
    };
    let mut out = LaurentLoop::zero(n);
    if xlo < 0 {
        let gp_inv = loop_inverse_by_symmetry(g_plus)?;
        let hi = -1;
        let left = gp_inv.mul_window(&x.proj_minus(), xlo, hi);
        out = out.add(&left.mul_window(g_plus, xlo, hi))?;
    }
    if xhi >= 0 {
        let gm_inv = loop_inverse_by_symmetry(g_minus)?;
        let left = gm_inv.mul_window(&x.proj_plus(), 0, xhi);
        out = out.add(&left.mul_window(g_minus, 0, xhi))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, random_skew_simple, random_sym};
    use crate::rng::SplitMix64;

    fn rand_matrix(n: usize, rng: &mut SplitMix64) -> Matrix {
        Matrix::from_fn(n, |_, _| rng.uniform(-1.0, 1.0))
    }

    fn rand_loop(n: usize, lo: i64, hi: i64, rng: &mut SplitMix64) -> LaurentLoop {
        LaurentLoop::from_coeffs(lo, (lo..=hi).map(|_| rand_matrix(n, rng)).collect()).unwrap()
    }

    fn bi(n: usize, seed: u64) -> BILoop {
        BILoop::new(random_sym(n, seed).unwrap(), random_skew_simple(n, seed + 1000).unwrap()).unwrap()
    }

    #[test]
    fn trimming_is_canonical() {
        let a = Matrix::identity(2);
        let padded = LaurentLoop::from_coeffs(-2, alloc::vec![Matrix::zeros(2), a.clone(), Matrix::zeros(2)]).unwrap();
        assert_eq!(padded, LaurentLoop::monomial(a, -1));
        assert!(LaurentLoop::from_coeffs(0, alloc::vec![Matrix::zeros(3)]).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let mut rng = SplitMix64::new(1);
        let y = rand_loop(3, -1, 2, &mut rng);
        assert_eq!(LaurentLoop::identity(3).mul(&y).unwrap(), y);
        let a = rand_matrix(3, &mut rng);
        let b = rand_matrix(3, &mut rng);
        let p = LaurentLoop::monomial(a.clone(), 1).mul(&LaurentLoop::monomial(b.clone(), -1)).unwrap();
        assert_eq!(p, LaurentLoop::constant(&a * &b));
        // (S + zN)² = S² + z(SN + NS) + z²N²
        let x = bi(3, 5);
        let (s, n) = (x.s.to_matrix(), x.n.to_matrix());
        let sq = x.to_loop().mul(&x.to_loop()).unwrap();
        assert!(sq.coeff(0).max_abs_diff(&(&s * &s)) < 1e-15);
        assert!(sq.coeff(1).max_abs_diff(&(&(&s * &n) + &(&n * &s))) < 1e-15);
        assert!(sq.coeff(2).max_abs_diff(&(&n * &n)) < 1e-15);
    }

    #[test]
    fn mul_respects_window_cap() {
        let a = LaurentLoop::monomial(Matrix::identity(2), 40);
        let b = LaurentLoop::monomial(Matrix::identity(2), -40);
        let c = LaurentLoop::from_coeffs(0, alloc::vec![Matrix::identity(2); 25]).unwrap();
        assert!(a.mul(&b).is_ok());
        assert!(matches!(c.mul(&c).unwrap().mul(&c), Err(Error::WindowOverflow { .. })));
    }

    #[test]
    fn projections() {
        let mut rng = SplitMix64::new(2);
        let x = rand_loop(2, -1, 1, &mut rng);
        assert_eq!(x.proj_plus(), x.restrict(0, 1));
        assert_eq!(x.proj_minus(), x.restrict(-1, -1));
        assert_eq!(x.proj_plus().add(&x.proj_minus()).unwrap(), x);
        assert!(x.proj_minus().proj_plus().is_zero());
        let neg = rand_loop(2, -3, -1, &mut rng);
        assert!(neg.proj_plus().is_zero());
        // Π₊((S+zN)² z⁻¹) = (SN+NS) + zN²
        let b = bi(3, 9);
        let (s, n) = (b.s.to_matrix(), b.n.to_matrix());
        let sq = b.to_loop().mul(&b.to_loop()).unwrap();
        let gen = sq.mul(&LaurentLoop::monomial(Matrix::identity(3), -1)).unwrap().proj_plus();
        assert_eq!(gen.window(), Some((0, 1)));
        assert!(gen.coeff(0).max_abs_diff(&(&(&s * &n) + &(&n * &s))) < 1e-15);
        assert!(gen.coeff(1).max_abs_diff(&(&n * &n)) < 1e-15);
    }

    #[test]
    fn sigma_examples() {
        let k = random_skew_simple(3, 1).unwrap().to_matrix();
        let p = random_sym(3, 2).unwrap().to_matrix();
        let xk = LaurentLoop::constant(k.clone());
        assert_eq!(xk.sigma(), xk);
        let xp = LaurentLoop::monomial(p.clone(), 1);
        assert_eq!(xp.sigma(), xp);
        assert_eq!(LaurentLoop::constant(p.clone()).sigma(), LaurentLoop::constant(p.scale(-1.0)));
        let fixed = LaurentLoop::from_coeffs(0, alloc::vec![k, p]).unwrap();
        assert!(fixed.is_sigma_fixed(0.0));
        let b = bi(3, 3).to_loop();
        assert!(b.is_sigma_star(0.0));
        assert!(!b.is_sigma_fixed(1e-12));
    }

    #[test]
    fn pairing_examples_and_adjointness() {
        let mut rng = SplitMix64::new(4);
        let a = rand_matrix(3, &mut rng);
        let b = rand_matrix(3, &mut rng);
        let v = pairing(&LaurentLoop::constant(a.clone()), &LaurentLoop::monomial(b.clone(), -1)).unwrap();
        assert!((v - (&a * &b).trace()).abs() < 1e-15);
        assert_eq!(pairing(&LaurentLoop::constant(a), &LaurentLoop::constant(b)).unwrap(), 0.0);
        // (Π₊X, Y) = (X, Π₋Y)
        let x = rand_loop(3, -3, 3, &mut rng);
        let y = rand_loop(3, -3, 3, &mut rng);
        let l = pairing(&x.proj_plus(), &y).unwrap();
        let r = pairing(&x, &y.proj_minus()).unwrap();
        assert!((l - r).abs() < 1e-13);
    }

    #[test]
    fn pairing_is_ad_invariant() {
        let mut rng = SplitMix64::new(6);
        for _ in 0..10 {
            let x = rand_loop(3, -2, 2, &mut rng);
            let y = rand_loop(3, -2, 1, &mut rng);
            let z = rand_loop(3, -1, 1, &mut rng);
            let v = pairing(&z.commutator(&x).unwrap(), &y).unwrap() + pairing(&x, &z.commutator(&y).unwrap()).unwrap();
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn rbracket_cases() {
        let mut rng = SplitMix64::new(7);
        let xp = rand_loop(2, 0, 2, &mut rng);
        let yp = rand_loop(2, 0, 1, &mut rng);
        assert!(rbracket(&xp, &yp).unwrap().max_abs_diff(&xp.commutator(&yp).unwrap()) < 1e-15);
        let ym = rand_loop(2, -2, -1, &mut rng);
        assert!(rbracket(&xp, &ym).unwrap().is_zero());
        for _ in 0..10 {
            let x = rand_loop(3, -2, 2, &mut rng);
            let y = rand_loop(3, -3, 1, &mut rng);
            let a = rbracket(&x, &y).unwrap();
            let b = rbracket_via_r(&x, &y).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
            assert!(mybe_residual(&x, &y).unwrap() < 1e-12);
        }
    }

    #[test]
    fn exp_truncated_cases() {
        let p = random_sym(3, 8).unwrap().to_matrix();
        assert_eq!(exp_truncated(&LaurentLoop::zero(3), -4, 0).unwrap(), LaurentLoop::identity(3));
        let x = LaurentLoop::monomial(p.clone(), -1);
        let g = exp_truncated(&x, -1, 0).unwrap();
        let expect = LaurentLoop::identity(3).add(&x).unwrap();
        assert!(g.max_abs_diff(&expect) < 1e-15);
        // σ-fixed generator ⇒ g(z) g(−z)ᵀ = I in the window.
        let k = random_skew_simple(3, 9).unwrap().to_matrix();
        let gen = LaurentLoop::from_coeffs(-2, alloc::vec![k, p]).unwrap().scale(0.7);
        assert!(gen.is_sigma_fixed(0.0));
        let g = exp_truncated(&gen, -10, 0).unwrap();
        let prod = g.mul(&g.reflect_transpose()).unwrap().restrict(-10, 0);
        assert!(prod.max_abs_diff(&LaurentLoop::identity(3)) < 1e-12);
        assert!(
            exp_truncated(&LaurentLoop::from_coeffs(-1, alloc::vec![Matrix::identity(2); 2]).unwrap(), -2, 2).is_err()
        );
    }

    #[test]
    fn symmetry_inverse() {
        assert_eq!(loop_inverse_by_symmetry(&LaurentLoop::identity(2)).unwrap(), LaurentLoop::identity(2));
        let p = random_sym(3, 10).unwrap().to_matrix();
        // Window [−1, 0]: I + Pz⁻¹ has inverse I − Pz⁻¹ + P²z⁻² − …, which
        // restricted to the window is g(−z)ᵀ = I − Pz⁻¹.
        let g = LaurentLoop::from_coeffs(-1, alloc::vec![p.clone(), Matrix::identity(3)]).unwrap();
        let inv = loop_inverse_by_symmetry(&g).unwrap();
        assert!(
            inv.max_abs_diff(&LaurentLoop::from_coeffs(-1, alloc::vec![p.scale(-1.0), Matrix::identity(3)]).unwrap())
                == 0.0
        );
        // A skew z⁻¹ coefficient breaks the symmetry.
        let k = random_skew_simple(3, 11).unwrap().to_matrix();
        let bad = LaurentLoop::from_coeffs(-1, alloc::vec![k, Matrix::identity(3)]).unwrap();
        assert!(matches!(loop_inverse_by_symmetry(&bad), Err(Error::SymmetryViolated { .. })));
        let k2 = random_skew_simple(3, 12).unwrap().to_matrix();
        let gen = LaurentLoop::from_coeffs(-3, alloc::vec![p.scale(0.3), k2.scale(0.5), p.scale(0.4)]).unwrap();
        let g = exp_truncated(&gen, -12, 0).unwrap();
        let inv = loop_inverse_by_symmetry(&g).unwrap();
        let prod = g.mul(&inv).unwrap().restrict(-12, 0);
        assert!(prod.max_abs_diff(&LaurentLoop::identity(3)) < 1e-12);
    }

    #[test]
    fn coadjoint_cases() {
        let x = bi(3, 21);
        let xl = x.to_loop();
        let id = LaurentLoop::identity(3);
        assert_eq!(coadjoint(&id, &id, &xl).unwrap(), xl);
        // g₋ = exp(Pz⁻¹ + Kz⁻²): z⁰ output is exactly S + [N, P], z¹ is N.
        let p = random_sym(3, 22).unwrap().to_matrix().scale(0.5);
        let k = random_skew_simple(3, 23).unwrap().to_matrix().scale(0.3);
        let gm = exp_truncated(&LaurentLoop::from_coeffs(-2, alloc::vec![k, p.clone()]).unwrap(), -8, 0).unwrap();
        let gp = exp_truncated(
            &LaurentLoop::from_coeffs(
                0,
                alloc::vec![random_skew_simple(3, 24).unwrap().to_matrix().scale(0.4), p.scale(0.2)],
            )
            .unwrap(),
            0,
            8,
        )
        .unwrap();
        let out = coadjoint(&gp, &gm, &xl).unwrap();
        let (s, n) = (x.s.to_matrix(), x.n.to_matrix());
        let expect0 = &s + &commutator(&n, &p).unwrap();
        assert!(out.coeff(0).max_abs_diff(&expect0) < 1e-14);
        assert!(out.coeff(1).max_abs_diff(&n) < 1e-15);
        let (lo, hi) = out.window().unwrap();
        assert!(lo >= 0 && hi <= 1);
        assert!(out.is_sigma_star(1e-14));
    }
}
