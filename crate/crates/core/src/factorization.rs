//! Birkhoff factorization of `γ(t, z) = exp(−t f(X₀(z), z))` on the unit
//! circle, and the resulting closed-form solution of the hierarchy flows.
//!
//! The loop is sampled at `M` roots of unity and its Fourier coefficients
//! `Γ_j` taken by FFT. The minus factor `g₋ = I + Σ_{j=1..J} c_j z^{−j}` solves
//! the block-Toeplitz system `Σ_j Γ_{m+j} c_j = −Γ_m`, `m = −1..−J`, which is
//! `Π₋(γ g₋) = 0`; then `g₊ = Π₊(γ g₋)` and `γ = g₊ g₋⁻¹`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cmatrix::{solve_dense, CMatrix};
use crate::fft::fft;
use crate::invariants::{gradient_loop, IntegralIndex};
use crate::laurent::{BILoop, LaurentLoop};
use crate::matrix::{Matrix, SymMatrix};
use crate::{Error, Result};

/// Largest tolerated top-band Fourier coefficient.
pub const ALIASING_TOL: f64 = 1e-10;
/// Largest tolerated imaginary part of a Fourier coefficient or `c_j`.
pub const REALITY_TOL: f64 = 1e-10;
/// Largest tolerated `‖γ − g₊g₋⁻¹‖` on the samples.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Largest tolerated `‖g(z)g(−z)ᵀ − I‖` for either factor.
pub const FACTOR_SYMMETRY_TOL: f64 = 1e-8;
/// Tail criterion `‖c_J‖` for [`birkhoff_adaptive`].
pub const TAIL_TOL: f64 = 1e-10;
/// Cap on `J` for [`birkhoff_adaptive`].
pub const J_CAP: usize = 256;

/// The flow generator `f_{kℓ}(X₀(z), z) = X₀(z)^k z^{−(ℓ+1)}`.
pub fn generator(x0: &BILoop, idx: IntegralIndex) -> Result<LaurentLoop> {
    gradient_loop(x0, idx)
}

/// [`generator`] from raw indices; odd `ℓ` is rejected since the loop would
/// leave the twisted algebra.
pub fn generator_raw(x0: &BILoop, k: usize, l: usize) -> Result<LaurentLoop> {
    if l % 2 == 1 {
        return Err(Error::InvalidArgument("generator needs even l"));
    }
    generator(x0, IntegralIndex::new(k, l)?)
}

/// Largest coefficient of `δ(z) + δ(−z)ᵀ`; zero for loops in the twisted
/// algebra.
pub fn antisymmetry_residual(delta: &LaurentLoop) -> f64 {
    delta.add(&delta.reflect_transpose()).map(|s| s.max_abs()).unwrap_or(f64::INFINITY)
}

/// Samples of a loop on the `M`-th roots of unity with its Fourier
/// coefficients.
#[derive(Clone, Debug)]
pub struct FourierLoop {
    m: usize,
    samples: Vec<CMatrix>,
    /// Real parts of `Γ_j`, stored at `j mod M`.
    coeffs: Vec<Matrix>,
    max_imag: f64,
    aliasing: f64,
}

impl FourierLoop {
    /// Builds the loop from samples at `z_m = e^{2πim/M}`.
    pub fn from_samples(samples: Vec<CMatrix>) -> Result<Self> {
        let m = samples.len();
        if m < 4 || !m.is_power_of_two() {
            return Err(Error::InvalidArgument("sample count must be a power of two >= 4"));
        }
        let n = samples[0].dim();
        if let Some(bad) = samples.iter().find(|s| s.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
        }
        let mut coeffs = alloc::vec![Matrix::zeros(n); m];
        let mut max_imag: f64 = 0.0;
        let mut buf = alloc::vec![Complex64::new(0.0, 0.0); m];
        for r in 0..n {
            for c in 0..n {
                for (b, s) in buf.iter_mut().zip(&samples) {
                    *b = s[(r, c)];
                }
                fft(&mut buf);
                for (j, v) in buf.iter().enumerate() {
                    let v = v / m as f64;
                    coeffs[j][(r, c)] = v.re;
                    max_imag = max_imag.max(v.im.abs());
                }
            }
        }
        // Top eighth of the band, both signs.
        let band = (m / 16).max(1);
        let aliasing = (m / 2 - band..=m / 2 + band).map(|j| coeffs[j % m].norm()).fold(0.0, f64::max);
        Ok(Self { m, samples, coeffs, max_imag, aliasing })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn samples(&self) -> &[CMatrix] {
        &self.samples
    }

    /// `z_m = e^{2πim/M}`.
    pub fn node(&self, m: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * m as f64 / self.m as f64)
    }

    /// `Γ_j` for any integer `j` (periodic in `M`).
    pub fn gamma(&self, j: i64) -> &Matrix {
        &self.coeffs[j.rem_euclid(self.m as i64) as usize]
    }

    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }

    /// Largest Frobenius norm among the Fourier coefficients near `±M/2`.
    pub fn aliasing(&self) -> f64 {
        self.aliasing
    }

    /// `max_m ‖γ(z_m) γ(−z_m)ᵀ − I‖`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim();
        let half = self.m / 2;
        (0..self.m)
            .map(|i| {
                let opp = &self.samples[(i + half) % self.m];
                self.samples[i].matmul(&opp.transpose()).max_abs_diff(&CMatrix::identity(n))
            })
            .fold(0.0, f64::max)
    }

    /// Winding number of `det γ` around the circle.
    pub fn winding_number(&self) -> i64 {
        let dets: Vec<Complex64> = self.samples.iter().map(CMatrix::det).collect();
        let mut total = 0.0;
        for i in 0..self.m {
            let ratio = dets[(i + 1) % self.m] / dets[i];
            total += ratio.arg();
        }
        libm::round(total / (2.0 * core::f64::consts::PI)) as i64
    }
}

fn span(gen: &LaurentLoop) -> i64 {
    gen.window().map(|(lo, hi)| hi - lo).unwrap_or(0)
}

/// Smallest admissible sample count for [`sample_exp`]:
/// `4 · span · max(1, t · max_j ‖gen_j‖)`.
pub fn min_samples(gen: &LaurentLoop, t: f64) -> usize {
    let size = gen.terms().map(|(_, m)| m.norm()).fold(0.0, f64::max);
    let floor = 4.0 * span(gen).max(1) as f64 * (t.abs() * size).max(1.0);
    libm::ceil(floor) as usize
}

/// Samples `γ(z) = exp(−t · gen(z))` at `M` roots of unity.
pub fn sample_exp(gen: &LaurentLoop, t: f64, m: usize) -> Result<FourierLoop> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument("time must be finite"));
    }
    if !m.is_power_of_two() || m < 4 {
        return Err(Error::InvalidArgument("sample count must be a power of two >= 4"));
    }
    if m < min_samples(gen, t) {
        return Err(Error::InvalidArgument("sample count below 4 * span * max(1, t * |gen|)"));
    }
    let step = 2.0 * core::f64::consts::PI / m as f64;
    let samples = (0..m)
        .map(|i| gen.eval(Complex64::from_polar(1.0, step * i as f64)).scale(Complex64::new(-t, 0.0)).expm())
        .collect();
    let fl = FourierLoop::from_samples(samples)?;
    if fl.aliasing > ALIASING_TOL {
        return Err(Error::Aliasing { estimate: fl.aliasing, tol: ALIASING_TOL });
    }
    if fl.max_imag > REALITY_TOL {
        return Err(Error::InconsistentSolution {
            what: "fourier coefficients not real",
            defect: fl.max_imag,
            tol: REALITY_TOL,
        });
    }
    Ok(fl)
}

/// Factors `γ = g₊ g₋⁻¹` with trivial diagonal part.
#[derive(Clone, Debug)]
pub struct BirkhoffFactors {
    pub g_minus: LaurentLoop,
    pub g_plus: LaurentLoop,
    /// `J` actually used.
    pub j: usize,
    /// `max_m ‖γ(z_m) − g₊(z_m) g₋(z_m)⁻¹‖`.
    pub residual: f64,
    /// `‖c_J‖`, the last minus coefficient.
    pub tail: f64,
    /// Largest imaginary part among the solved `c_j`.
    pub max_imag: f64,
    /// Larger of the two `‖g(z)g(−z)ᵀ − I‖` sample maxima.
    pub symmetry_defect: f64,
}

impl BirkhoffFactors {
    /// `c_j`, the coefficient of `z^{−j}` in `g₋`.
    pub fn c(&self, j: usize) -> Matrix {
        self.g_minus.coeff(-(j as i64))
    }
}

fn loop_symmetry_defect(g: &LaurentLoop, gamma: &FourierLoop) -> f64 {
    let n = g.dim();
    (0..gamma.len())
        .map(|i| {
            let z = gamma.node(i);
            g.eval(z).matmul(&g.eval(-z).transpose()).max_abs_diff(&CMatrix::identity(n))
        })
        .fold(0.0, f64::max)
}

/// Solves for `g₋` with exactly `J` coefficients and forms `g₊` up to degree
/// `M/2 − J`. Fails if the reconstruction residual exceeds 1e−8.
pub fn birkhoff(gamma: &FourierLoop, j_count: usize) -> Result<BirkhoffFactors> {
    check_residual(factor(gamma, j_count)?)
}

fn check_residual(f: BirkhoffFactors) -> Result<BirkhoffFactors> {
    if f.residual > RESIDUAL_TOL {
        return Err(Error::ResidualTooLarge { routine: "birkhoff", residual: f.residual, tol: RESIDUAL_TOL });
    }
    Ok(f)
}

fn factor(gamma: &FourierLoop, j_count: usize) -> Result<BirkhoffFactors> {
    let m = gamma.len();
    if j_count == 0 || 2 * j_count >= m {
        return Err(Error::InvalidArgument("need 1 <= J < M/2"));
    }
    if gamma.winding_number() != 0 {
        return Err(Error::InvalidArgument("det of the loop winds around zero"));
    }
    let n = gamma.dim();
    let jn = j_count * n;
    // Row block r ↔ m = −(r+1); column block c ↔ c_{c+1}.
    let mut a = alloc::vec![Complex64::new(0.0, 0.0); jn * jn];
    let mut b = alloc::vec![Complex64::new(0.0, 0.0); jn * n];
    for r in 0..j_count {
        let mm = -(r as i64 + 1);
        for c in 0..j_count {
            let g = gamma.gamma(mm + c as i64 + 1);
            for p in 0..n {
                for q in 0..n {
                    a[(r * n + p) * jn + c * n + q] = Complex64::new(g[(p, q)], 0.0);
                }
            }
        }
        let g = gamma.gamma(mm);
        for p in 0..n {
            for q in 0..n {
                b[(r * n + p) * n + q] = Complex64::new(-g[(p, q)], 0.0);
            }
        }
    }
    solve_dense(&mut a, jn, &mut b, n)?;
    let max_imag = b.iter().fold(0.0f64, |s, z| s.max(z.im.abs()));
    let cs: Vec<Matrix> = (0..j_count).map(|c| Matrix::from_fn(n, |p, q| b[(c * n + p) * n + q].re)).collect();
    let tail = cs[j_count - 1].norm();
    // g₋ = I + Σ c_j z^{−j}, stored from degree −J.
    let mut minus: Vec<Matrix> = cs.iter().rev().cloned().collect();
    minus.push(Matrix::identity(n));
    let g_minus = LaurentLoop::from_coeffs(-(j_count as i64), minus)?;
    let j_plus = m / 2 - j_count;
    let plus: Vec<Matrix> = (0..=j_plus as i64)
        .map(|deg| {
            let mut acc = gamma.gamma(deg).clone();
            for (c, cj) in cs.iter().enumerate() {
                acc += &(gamma.gamma(deg + c as i64 + 1) * cj);
            }
            acc
        })
        .collect();
    let g_plus = LaurentLoop::from_coeffs(0, plus)?;
    let mut residual: f64 = 0.0;
    for (i, sample) in gamma.samples().iter().enumerate() {
        let z = gamma.node(i);
        let rebuilt = g_plus.eval(z).matmul(&g_minus.eval(z).inverse()?);
        residual = residual.max(sample.add_scaled(Complex64::new(-1.0, 0.0), &rebuilt).norm());
    }
    let symmetry_defect = loop_symmetry_defect(&g_minus, gamma).max(loop_symmetry_defect(&g_plus, gamma));
    Ok(BirkhoffFactors { g_minus, g_plus, j: j_count, residual, tail, max_imag, symmetry_defect })
}

/// [`birkhoff`] starting from `J`, doubling while `‖c_J‖ > 1e−10` or the
/// residual is too large (up to `J = 256` and `J < M/2`).
pub fn birkhoff_adaptive(gamma: &FourierLoop, j_start: usize) -> Result<BirkhoffFactors> {
    let limit = J_CAP.min(gamma.len() / 2 - 1);
    let mut j = j_start.clamp(1, limit);
    loop {
        let f = factor(gamma, j)?;
        if (f.tail <= TAIL_TOL && f.residual <= RESIDUAL_TOL) || j >= limit {
            return check_residual(f);
        }
        j = (2 * j).min(limit);
    }
}

/// Diagnostics of one factorization solve.
#[derive(Clone, Debug)]
pub struct FactorizationOutcome {
    /// `S(t)` from `g₋⁻¹ X₀ g₋`.
    pub s: SymMatrix,
    /// `S(t)` from `g₊⁻¹ X₀ g₊`.
    pub s_plus: SymMatrix,
    /// `‖[z¹](g₋⁻¹X₀g₋) − N‖_max`.
    pub n_defect: f64,
    /// Largest coefficient of `g₋⁻¹X₀g₋` outside degrees 0 and 1.
    pub leakage: f64,
    pub factors: BirkhoffFactors,
    pub aliasing: f64,
    pub winding: i64,
}

/// Tolerance on the `z¹` coefficient of the conjugated loop.
pub const N_DEFECT_TOL: f64 = 1e-8;
/// Tolerance between the minus and plus conjugation forms.
pub const FORM_GAP_TOL: f64 = 1e-7;

/// Runs the whole pipeline and returns every diagnostic.
pub fn factorization_outcome(
    x0: &BILoop,
    idx: IntegralIndex,
    t: f64,
    m: usize,
    j: usize,
) -> Result<FactorizationOutcome> {
    let gen = generator(x0, idx)?;
    let gamma = sample_exp(&gen, t, m)?;
    let factors = birkhoff_adaptive(&gamma, j)?;
    if factors.max_imag > REALITY_TOL {
        return Err(Error::InconsistentSolution {
            what: "minus factor not real",
            defect: factors.max_imag,
            tol: REALITY_TOL,
        });
    }
    if factors.symmetry_defect > FACTOR_SYMMETRY_TOL {
        return Err(Error::SymmetryViolated { residual: factors.symmetry_defect });
    }
    let x = x0.to_loop();
    let gm = &factors.g_minus;
    let (lo, _) = gm.window().expect("g_minus contains I");
    let conj = gm.reflect_transpose().mul_window(&x, lo, 1).mul_window(gm, lo, 1);
    let s_mat = conj.coeff(0);
    let n_defect = conj.coeff(1).max_abs_diff(&x0.n.to_matrix());
    let leakage = conj.restrict(lo, -1).max_abs();
    let p0 = factors.g_plus.coeff(0);
    let s_plus = SymMatrix::from_matrix_projected(&(&(&p0.transpose() * &x0.s.to_matrix()) * &p0));
    let s = SymMatrix::from_matrix_projected(&s_mat);
    if n_defect > N_DEFECT_TOL {
        return Err(Error::InconsistentSolution {
            what: "z^1 coefficient differs from N",
            defect: n_defect,
            tol: N_DEFECT_TOL,
        });
    }
    let gap = s.max_abs_diff(&s_plus);
    if gap > FORM_GAP_TOL {
        return Err(Error::InconsistentSolution {
            what: "plus and minus forms disagree",
            defect: gap,
            tol: FORM_GAP_TOL,
        });
    }
    Ok(FactorizationOutcome {
        s,
        s_plus,
        n_defect,
        leakage,
        aliasing: gamma.aliasing(),
        winding: gamma.winding_number(),
        factors,
    })
}

/// `S(t)` for the flow of `idx` from `X₀`, via `X(t) = g₋⁻¹ X₀ g₋`.
pub fn solve_by_factorization(x0: &BILoop, idx: IntegralIndex, t: f64, m: usize, j: usize) -> Result<SymMatrix> {
    factorization_outcome(x0, idx, t, m, j).map(|o| o.s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::flow_endpoint;
    use crate::invariants::orbit_membership;
    use crate::matrix::{random_skew_simple, random_sym};

    fn idx(k: usize, l: usize) -> IntegralIndex {
        IntegralIndex::new(k, l).unwrap()
    }

    fn bi(n: usize, seed: u64) -> BILoop {
        BILoop::new(random_sym(n, seed).unwrap(), random_skew_simple(n, seed + 300).unwrap()).unwrap()
    }

    #[test]
    fn generator_examples() {
        let x = bi(3, 1);
        let (s, n) = (x.s.to_matrix(), x.n.to_matrix());
        let g = generator(&x, idx(1, 0)).unwrap();
        assert!(g.max_abs_diff(&LaurentLoop::from_coeffs(-1, alloc::vec![s.clone(), n.clone()]).unwrap()) == 0.0);
        let g2 = generator(&x, idx(2, 0)).unwrap();
        assert_eq!(g2.window(), Some((-1, 1)));
        assert!(antisymmetry_residual(&g2) < 1e-13);
        assert!(generator_raw(&x, 2, 1).is_err());
        assert!(generator_raw(&x, 2, 0).is_ok());
    }

    #[test]
    fn identity_loop() {
        let x = bi(3, 2);
        let gen = generator(&x, idx(2, 0)).unwrap();
        let gamma = sample_exp(&gen, 0.0, 16).unwrap();
        assert!(gamma.gamma(0).max_abs_diff(&Matrix::identity(3)) < 1e-15);
        assert!((1..16).all(|j| gamma.gamma(j).max_abs() < 1e-15));
        let f = birkhoff(&gamma, 2).unwrap();
        assert!(f.g_minus.max_abs_diff(&LaurentLoop::identity(3)) < 1e-15);
        assert!(f.g_plus.max_abs_diff(&LaurentLoop::identity(3)) < 1e-15);
        assert!(f.residual < 1e-15);
    }

    #[test]
    fn plus_loop_factors_trivially() {
        // γ = exp(−tAz) with A symmetric is already a plus loop in the group.
        let a = random_sym(3, 3).unwrap().to_matrix();
        let gen = LaurentLoop::monomial(a, 1);
        let gamma = sample_exp(&gen, 0.7, 64).unwrap();
        let f = birkhoff(&gamma, 8).unwrap();
        assert!(f.g_minus.max_abs_diff(&LaurentLoop::identity(3)) < 1e-12);
        for (i, s) in gamma.samples().iter().enumerate() {
            assert!(f.g_plus.eval(gamma.node(i)).max_abs_diff(s) < 1e-12);
        }
    }

    #[test]
    fn sample_properties() {
        let x = bi(3, 4);
        let gen = generator(&x, idx(2, 0)).unwrap();
        let gamma = sample_exp(&gen, 0.5, 64).unwrap();
        assert!(gamma.symmetry_defect() < 1e-10);
        assert_eq!(gamma.winding_number(), 0);
        assert!(gamma.max_imag() < 1e-12);
        assert!(sample_exp(&gen, 0.5, 48).is_err());
        assert!(sample_exp(&gen, 0.5, 4).is_err());
    }

    #[test]
    fn undersampling_is_reported() {
        let x = bi(3, 5);
        let gen = generator(&x, idx(2, 0)).unwrap().scale(4.0);
        let m = min_samples(&gen, 2.0).next_power_of_two();
        assert!(matches!(sample_exp(&gen, 2.0, m), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn factorization_of_bi_generator() {
        let x = bi(3, 6);
        let gen = generator(&x, idx(2, 0)).unwrap();
        let gamma = sample_exp(&gen, 0.5, 256).unwrap();
        let f = birkhoff(&gamma, 40).unwrap();
        assert!(f.residual < 1e-8);
        assert!(f.tail < 1e-10);
        assert!(f.symmetry_defect < 1e-8);
        assert!(f.max_imag < 1e-10);
        let g = birkhoff(&gamma, 48).unwrap();
        for j in 1..=36 {
            assert!(f.c(j).max_abs_diff(&g.c(j)) < 1e-9);
        }
    }

    #[test]
    fn matches_rk4() {
        let x = bi(3, 7);
        for t in [0.25, 0.5, 1.0] {
            let out = factorization_outcome(&x, idx(2, 0), t, 256, 40).unwrap();
            let rk = flow_endpoint(&x.s, &x.n, idx(2, 0), t, 1e-4).unwrap();
            assert!(out.s.max_abs_diff(&rk) < 1e-6, "t = {t}");
            assert!(out.n_defect < 1e-8);
            assert!(out.leakage < 1e-8);
            assert!(orbit_membership(&out.s, &x.s, &x.n, 1e-7).unwrap());
        }
    }

    #[test]
    fn other_flows_match_rk4() {
        let x = bi(4, 8);
        for i in [idx(1, 0), idx(3, 0), idx(3, 2)] {
            let s = solve_by_factorization(&x, i, 0.5, 256, 40).unwrap();
            let rk = flow_endpoint(&x.s, &x.n, i, 0.5, 1e-3).unwrap();
            assert!(s.max_abs_diff(&rk) < 1e-8, "{i}");
        }
    }

    #[test]
    fn trivial_solutions() {
        let x = bi(3, 9);
        assert!(solve_by_factorization(&x, idx(2, 0), 0.0, 64, 4).unwrap().max_abs_diff(&x.s) < 1e-14);
        let n = random_skew_simple(4, 10).unwrap();
        let s = SymMatrix::from_matrix_projected(&(&n.to_matrix() * &n.to_matrix()));
        let fixed = BILoop::new(s.clone(), n).unwrap();
        assert!(solve_by_factorization(&fixed, idx(2, 0), 0.8, 256, 16).unwrap().max_abs_diff(&s) < 1e-10);
    }

    #[test]
    fn rejects_bad_j() {
        let x = bi(3, 11);
        let gamma = sample_exp(&generator(&x, idx(1, 0)).unwrap(), 0.3, 32).unwrap();
        assert!(birkhoff(&gamma, 0).is_err());
        assert!(birkhoff(&gamma, 16).is_err());
    }
}
