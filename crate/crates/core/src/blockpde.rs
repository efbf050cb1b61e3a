//! Reductions of `Ṡ = [N, S²]` and `Ṡ = [N, S³]` for the rank-two skew
//! matrix `N = E₁₂ − E₂₁`, with `S` split as
//!
//! ```text
//! S = | a  b  uᵀ |
//!     | b  c  vᵀ |
//!     | u  v  B  |
//! ```
//!
//! On the slice `a = b = c = 0` the cubic flow closes on `(u, v)`; with
//! `B² = −∂ₓ²` on `[0, 2π)` that reduced system becomes the
//! integro-differential system handled by [`PdeState`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::fft;
use crate::matrix::{Matrix, SkewMatrix, SymMatrix};
use crate::ode::{integrate_with, rk4_step, step_plan, OdeState, BLOWUP_LIMIT};
use crate::{Error, Result};

/// Block data of a symmetric matrix of size `m + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub big_b: SymMatrix,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

fn matvec(m: &Matrix, x: &[f64]) -> Vec<f64> {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)] * x[j]).sum()).collect()
}

/// `Σ cᵢ xᵢ` over equally long vectors.
fn combo(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let len = terms[0].1.len();
    let mut out = vec![0.0; len];
    for (c, x) in terms {
        for (o, xi) in out.iter_mut().zip(x.iter()) {
            *o += c * xi;
        }
    }
    out
}

impl BlockState {
    pub fn zeros(m: usize) -> Self {
        Self { a: 0.0, b: 0.0, c: 0.0, u: vec![0.0; m], v: vec![0.0; m], big_b: SymMatrix::zeros(m) }
    }

    pub fn new(a: f64, b: f64, c: f64, u: Vec<f64>, v: Vec<f64>, big_b: SymMatrix) -> Result<Self> {
        let m = big_b.dim();
        for len in [u.len(), v.len()] {
            if len != m {
                return Err(Error::DimensionMismatch { expected: m, found: len });
            }
        }
        Ok(Self { a, b, c, u, v, big_b })
    }

    /// Size `m = n − 2` of the lower block.
    pub fn inner_dim(&self) -> usize {
        self.u.len()
    }

    /// Size `n` of the embedded matrix.
    pub fn dim(&self) -> usize {
        self.u.len() + 2
    }
}

impl OdeState for BlockState {
    fn add_scaled(&self, s: f64, o: &Self) -> Self {
        Self {
            a: self.a + s * o.a,
            b: self.b + s * o.b,
            c: self.c + s * o.c,
            u: combo(&[(1.0, &self.u), (s, &o.u)]),
            v: combo(&[(1.0, &self.v), (s, &o.v)]),
            big_b: self.big_b.add_scaled(s, &o.big_b),
        }
    }

    fn is_finite(&self) -> bool {
        [self.a, self.b, self.c].iter().chain(&self.u).chain(&self.v).all(|x| x.is_finite()) && self.big_b.is_finite()
    }

    fn magnitude(&self) -> f64 {
        [self.a, self.b, self.c].iter().chain(&self.u).chain(&self.v).fold(self.big_b.max_abs(), |m, x| m.max(x.abs()))
    }
}

/// Assembles the symmetric matrix from its blocks.
pub fn embed(bs: &BlockState) -> SymMatrix {
    let n = bs.dim();
    let mut s = SymMatrix::zeros(n);
    s.set(0, 0, bs.a);
    s.set(1, 0, bs.b);
    s.set(1, 1, bs.c);
    for i in 0..bs.inner_dim() {
        s.set(i + 2, 0, bs.u[i]);
        s.set(i + 2, 1, bs.v[i]);
        for j in 0..=i {
            s.set(i + 2, j + 2, bs.big_b.get(i, j));
        }
    }
    s
}

/// Reads the blocks back; inverse of [`embed`].
pub fn extract(s: &SymMatrix) -> Result<BlockState> {
    let n = s.dim();
    if n < 3 {
        return Err(Error::InvalidArgument("block split needs n >= 3"));
    }
    let m = n - 2;
    let mut big_b = SymMatrix::zeros(m);
    for i in 0..m {
        for j in 0..=i {
            big_b.set(i, j, s.get(i + 2, j + 2));
        }
    }
    Ok(BlockState {
        a: s.get(0, 0),
        b: s.get(1, 0),
        c: s.get(1, 1),
        u: (0..m).map(|i| s.get(i + 2, 0)).collect(),
        v: (0..m).map(|i| s.get(i + 2, 1)).collect(),
        big_b,
    })
}

/// `N` with `N₁₂ = 1`, `N₂₁ = −1` and zeros elsewhere.
pub fn n0(n: usize) -> Result<SkewMatrix> {
    if n < 3 {
        return Err(Error::InvalidArgument("block split needs n >= 3"));
    }
    let mut k = SkewMatrix::zeros(n);
    k.set(0, 1, 1.0);
    Ok(k)
}

/// Block form of `Ṡ = [N, S²]`.
pub fn rhs_quadratic(bs: &BlockState) -> BlockState {
    let (a, b, c) = (bs.a, bs.b, bs.c);
    let (u, v) = (&bs.u, &bs.v);
    let uv = dot(u, v);
    let da = 2.0 * (a * b + b * c + uv);
    let bm = bs.big_b.to_matrix();
    let bu = matvec(&bm, u);
    let bv = matvec(&bm, v);
    BlockState {
        a: da,
        b: c * c - a * a + dot(v, v) - dot(u, u),
        c: -da,
        u: combo(&[(1.0, &bv), (b, u), (c, v)]),
        v: combo(&[(-1.0, &bu), (-a, u), (-b, v)]),
        big_b: SymMatrix::zeros(bs.inner_dim()),
    }
}

/// Block form of `Ṡ = [N, S³]`.
pub fn rhs_cubic(bs: &BlockState) -> BlockState {
    let (a, b, c) = (bs.a, bs.b, bs.c);
    let (u, v) = (&bs.u, &bs.v);
    let (uu, uv, vv) = (dot(u, u), dot(u, v), dot(v, v));
    let bm = bs.big_b.to_matrix();
    let bu = matvec(&bm, u);
    let bv = matvec(&bm, v);
    let bbu = matvec(&bm, &bu);
    let bbv = matvec(&bm, &bv);
    let da = 2.0 * (dot(u, &bv) + a * a * b + a * b * c + a * uv + b * b * b + b * c * c + b * (uu + vv) + c * uv);
    let db = dot(v, &bv) - dot(u, &bu) - a * a * a - a * b * b - 2.0 * a * uu + b * b * c + c * c * c + 2.0 * c * vv;
    BlockState {
        a: da,
        b: db,
        c: -da,
        u: combo(&[(1.0, &bbv), (b, &bu), (c, &bv), (a * b + b * c + uv, u), (b * b + c * c + vv, v)]),
        v: combo(&[(-1.0, &bbu), (-a, &bu), (-b, &bv), (-(a * a + b * b + uu), u), (-(a * b + b * c + uv), v)]),
        big_b: SymMatrix::zeros(bs.inner_dim()),
    }
}

/// Sign of the `⟨u,u⟩u` term in `v̇` for the reduced systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReducedSign {
    /// `v̇ ∋ −⟨u,u⟩u`, the restriction of the cubic block flow; conserves
    /// `⟨u,u⟩ + ⟨v,v⟩`.
    #[default]
    Restricted,
    /// `v̇ ∋ +⟨u,u⟩u`; not a restriction of the matrix flow and does not
    /// conserve `⟨u,u⟩ + ⟨v,v⟩`.
    Flipped,
}

impl ReducedSign {
    fn factor(self) -> f64 {
        match self {
            ReducedSign::Restricted => -1.0,
            ReducedSign::Flipped => 1.0,
        }
    }
}

/// `u̇ = ⟨u,v⟩u + ⟨v,v⟩v + B²v`, `v̇ = ∓⟨u,u⟩u − ⟨u,v⟩v − B²u`.
pub fn rhs_reduced(u: &[f64], v: &[f64], big_b: &SymMatrix, sign: ReducedSign) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = big_b.dim();
    for len in [u.len(), v.len()] {
        if len != m {
            return Err(Error::DimensionMismatch { expected: m, found: len });
        }
    }
    let bm = big_b.to_matrix();
    let b2 = &bm * &bm;
    let (uu, uv, vv) = (dot(u, u), dot(u, v), dot(v, v));
    let du = combo(&[(uv, u), (vv, v), (1.0, &matvec(&b2, v))]);
    let dv = combo(&[(sign.factor() * uu, u), (-uv, v), (-1.0, &matvec(&b2, u))]);
    Ok((du, dv))
}

/// Which block flow to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockFlow {
    Quadratic,
    Cubic,
}

/// States of a block or PDE integration at each step.
#[derive(Clone, Debug)]
pub struct Path<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Path<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("paths are nonempty")
    }
}

/// RK4 for a block flow, recording every step.
pub fn integrate_block(bs: &BlockState, flow: BlockFlow, t_final: f64, h: f64) -> Result<Path<BlockState>> {
    let rhs = match flow {
        BlockFlow::Quadratic => rhs_quadratic,
        BlockFlow::Cubic => rhs_cubic,
    };
    let mut path = Path { times: Vec::new(), states: Vec::new() };
    integrate_with(
        bs,
        t_final,
        h,
        |s| Ok(rhs(s)),
        |t, s| {
            path.times.push(t);
            path.states.push(s.clone());
        },
    )?;
    Ok(path)
}

/// Cosine or sine sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Fractional band below which modes must vanish: `|k| ≤ K/3`.
pub const BAND_TOL: f64 = 1e-12;

/// Fourier coefficients of real `u(x)`, `v(x)` on `[0, 2π)`.
///
/// Coefficients are stored in FFT order (`k = 0, 1, …, K/2 − 1, −K/2, …, −1`)
/// and normalized so that `u(x) = Σ û_k e^{ikx}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeState {
    pub u_hat: Vec<Complex64>,
    pub v_hat: Vec<Complex64>,
    pub parity: Option<Parity>,
}

fn wavenumber(j: usize, k: usize) -> i64 {
    if j < k / 2 {
        j as i64
    } else {
        j as i64 - k as i64
    }
}

fn coeffs_of(samples: &[f64]) -> Vec<Complex64> {
    let k = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft(&mut buf);
    buf.iter().map(|z| z / k as f64).collect()
}

/// Averages `ĉ_k` with `conj(ĉ_{−k})` so the field is exactly real.
fn project_real(c: &mut [Complex64]) {
    let k = c.len();
    c[0].im = 0.0;
    c[k / 2].im = 0.0;
    for j in 1..k / 2 {
        let avg = 0.5 * (c[j] + c[k - j].conj());
        c[j] = avg;
        c[k - j] = avg.conj();
    }
}

impl PdeState {
    /// Samples `u`, `v` at `x_j = 2πj/K`; `K` must be a power of two ≥ 8.
    pub fn from_fn(k: usize, u: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64, parity: Option<Parity>) -> Result<Self> {
        if k < 8 || !k.is_power_of_two() {
            return Err(Error::InvalidArgument("mode count must be a power of two >= 8"));
        }
        let xs: Vec<f64> = (0..k).map(|j| 2.0 * core::f64::consts::PI * j as f64 / k as f64).collect();
        let us: Vec<f64> = xs.iter().map(|&x| u(x)).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| v(x)).collect();
        let mut st = Self { u_hat: coeffs_of(&us), v_hat: coeffs_of(&vs), parity };
        st.project();
        Ok(st)
    }

    pub fn modes(&self) -> usize {
        self.u_hat.len()
    }

    /// Enforces reality and, if set, the parity sector.
    pub fn project(&mut self) {
        for c in [&mut self.u_hat, &mut self.v_hat] {
            project_real(c);
            match self.parity {
                Some(Parity::Even) => c.iter_mut().for_each(|z| z.im = 0.0),
                Some(Parity::Odd) => c.iter_mut().for_each(|z| z.re = 0.0),
                None => {}
            }
        }
    }

    /// Largest `|ĉ_k − conj(ĉ_{−k})|` over both fields.
    pub fn reality_defect(&self) -> f64 {
        let k = self.modes();
        [&self.u_hat, &self.v_hat]
            .iter()
            .flat_map(|c| (0..k).map(move |j| (c[j] - c[(k - j) % k].conj()).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest coefficient of the opposite parity sector: the odd part for
    /// [`Parity::Even`], the even part for [`Parity::Odd`].
    pub fn parity_leakage(&self, parity: Parity) -> f64 {
        let k = self.modes();
        let s = match parity {
            Parity::Even => -1.0,
            Parity::Odd => 1.0,
        };
        [&self.u_hat, &self.v_hat]
            .iter()
            .flat_map(|c| (0..k).map(move |j| 0.5 * (c[j] + c[(k - j) % k] * s).norm()))
            .fold(0.0, f64::max)
    }

    /// `∫₀^{2π} f g dx` for two of the stored fields, by Parseval.
    fn inner(f: &[Complex64], g: &[Complex64]) -> f64 {
        2.0 * core::f64::consts::PI * f.iter().zip(g).map(|(a, b)| (a * b.conj()).re).sum::<f64>()
    }

    /// `⟨u,u⟩ + ⟨v,v⟩` in `L²(0, 2π)`.
    pub fn l2(&self) -> f64 {
        Self::inner(&self.u_hat, &self.u_hat) + Self::inner(&self.v_hat, &self.v_hat)
    }

    /// Largest coefficient with `|k| > K/3`.
    pub fn out_of_band(&self) -> f64 {
        let k = self.modes();
        (0..k)
            .filter(|&j| 3 * wavenumber(j, k).unsigned_abs() as usize > k)
            .map(|j| self.u_hat[j].norm().max(self.v_hat[j].norm()))
            .fold(0.0, f64::max)
    }

    /// Values of `u` and `v` on the grid.
    pub fn to_physical(&self) -> (Vec<f64>, Vec<f64>) {
        let k = self.modes();
        let eval = |c: &[Complex64]| -> Vec<f64> {
            let mut buf: Vec<Complex64> = c.iter().map(|z| z * k as f64).collect();
            crate::fft::ifft(&mut buf);
            buf.iter().map(|z| z.re).collect()
        };
        (eval(&self.u_hat), eval(&self.v_hat))
    }
}

impl OdeState for PdeState {
    fn add_scaled(&self, s: f64, o: &Self) -> Self {
        let mix = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(a, b)| a + b * s).collect();
        Self { u_hat: mix(&self.u_hat, &o.u_hat), v_hat: mix(&self.v_hat, &o.v_hat), parity: self.parity }
    }

    fn is_finite(&self) -> bool {
        self.u_hat.iter().chain(&self.v_hat).all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn magnitude(&self) -> f64 {
        self.u_hat.iter().chain(&self.v_hat).fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// `u_t = ⟨u,v⟩u + ⟨v,v⟩v − v_xx`, `v_t = ∓⟨u,u⟩u − ⟨u,v⟩v + u_xx`.
///
/// Fails with [`Error::Aliasing`] when a mode with `|k| > K/3` exceeds
/// `1e−12 · max(1, ‖state‖)`; inside that band every inner product is exact
/// on the grid.
pub fn pde_rhs(st: &PdeState, sign: ReducedSign) -> Result<PdeState> {
    let k = st.modes();
    let estimate = st.out_of_band();
    let tol = BAND_TOL * st.magnitude().max(1.0);
    if estimate > tol {
        return Err(Error::Aliasing { estimate, tol });
    }
    let uu = PdeState::inner(&st.u_hat, &st.u_hat);
    let uv = PdeState::inner(&st.u_hat, &st.v_hat);
    let vv = PdeState::inner(&st.v_hat, &st.v_hat);
    let f = sign.factor();
    let mut du = Vec::with_capacity(k);
    let mut dv = Vec::with_capacity(k);
    for j in 0..k {
        let w = wavenumber(j, k) as f64;
        let (u, v) = (st.u_hat[j], st.v_hat[j]);
        du.push(u * uv + v * (vv + w * w));
        dv.push(u * (f * uu - w * w) - v * uv);
    }
    Ok(PdeState { u_hat: du, v_hat: dv, parity: st.parity })
}

/// RK4 for the PDE, projecting onto real fields (and the parity sector when
/// set) after every step.
pub fn integrate_pde(st: &PdeState, sign: ReducedSign, t_final: f64, h: f64) -> Result<Path<PdeState>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument("step size must be positive"));
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::InvalidArgument("final time must be nonnegative"));
    }
    let (steps, h) = step_plan(t_final, h);
    let mut path = Path { times: vec![0.0], states: vec![st.clone()] };
    let mut y = st.clone();
    let mut failure = None;
    for step in 1..=steps {
        y = rk4_step(&y, h, &mut |x: &PdeState| match pde_rhs(x, sign) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                x.add_scaled(-1.0, x)
            }
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
        y.project();
        if !y.is_finite() || y.magnitude() > BLOWUP_LIMIT {
            return Err(Error::NonFinite { step });
        }
        path.times.push(if step == steps { t_final } else { step as f64 * h });
        path.states.push(y.clone());
    }
    Ok(path)
}
