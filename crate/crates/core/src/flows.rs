//! Hamiltonian vector fields of the hierarchy on `S + zN`, the
//! Bloch–Iserles equation `Ṡ = [N, S²]`, RK4 trajectories and conservation
//! diagnostics.

use alloc::vec;
use alloc::vec::Vec;

use crate::invariants::{casimirs, enumerate_indices, hamiltonian, spectral_coeffs, IntegralIndex};
use crate::laurent::BILoop;
use crate::matrix::{commutator, eigenvalues_sym, Matrix, SkewMatrix, SymMatrix};
use crate::ode::integrate_with;
use crate::symmetrizer::SymmetrizerTable;
use crate::{Error, Result};

fn check_dims(s: &SymMatrix, n: &SkewMatrix) -> Result<()> {
    if s.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: n.dim() });
    }
    Ok(())
}

/// `Ṡ = −[sym_{k−ℓ,ℓ}(S,N), N]`, the flow of `H_{kℓ}`.
pub fn vector_field(s: &SymMatrix, n: &SkewMatrix, idx: IntegralIndex) -> Result<SymMatrix> {
    check_dims(s, n)?;
    let nm = n.to_matrix();
    let t = SymmetrizerTable::new(&s.to_matrix(), &nm, idx.k())?;
    let v = commutator(&nm, t.get(idx.k() - idx.l(), idx.l()).expect("within degree"))?;
    Ok(SymMatrix::from_matrix_projected(&v))
}

/// The same field in its second form, `[sym_{k−ℓ−1,ℓ+1}(S,N), S]`, returned
/// unprojected so the two forms can be compared.
pub fn vector_field_alt(s: &SymMatrix, n: &SkewMatrix, idx: IntegralIndex) -> Result<Matrix> {
    check_dims(s, n)?;
    let sm = s.to_matrix();
    let t = SymmetrizerTable::new(&sm, &n.to_matrix(), idx.k())?;
    commutator(t.get(idx.k() - idx.l() - 1, idx.l() + 1).expect("within degree"), &sm)
}

/// `Ṡ = [NS + SN, S]`.
pub fn bi_rhs(s: &SymMatrix, n: &SkewMatrix) -> Result<SymMatrix> {
    check_dims(s, n)?;
    let sm = s.to_matrix();
    let nm = n.to_matrix();
    let v = commutator(&(&(&nm * &sm) + &(&sm * &nm)), &sm)?;
    Ok(SymMatrix::from_matrix_projected(&v))
}

/// A recorded solution `S(t)` of one Hamiltonian flow with `N` fixed.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SymMatrix>,
    pub n: SkewMatrix,
    pub idx: IntegralIndex,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.n.dim()
    }

    pub fn final_state(&self) -> &SymMatrix {
        self.states.last().expect("trajectories are nonempty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectories are nonempty")
    }
}

/// Fixed-step RK4 for the flow of `idx`, recording every step. The step is
/// shrunk so that an integer number of steps lands on `t_final`.
pub fn integrate(s0: &SymMatrix, n: &SkewMatrix, idx: IntegralIndex, t_final: f64, h: f64) -> Result<Trajectory> {
    check_dims(s0, n)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    integrate_with(
        s0,
        t_final,
        h,
        |s| vector_field(s, n, idx),
        |t, s| {
            times.push(t);
            states.push(s.clone());
        },
    )?;
    Ok(Trajectory { times, states, n: n.clone(), idx })
}

/// Endpoint of the flow of `idx` without recording.
pub fn flow_endpoint(s0: &SymMatrix, n: &SkewMatrix, idx: IntegralIndex, t_final: f64, h: f64) -> Result<SymMatrix> {
    check_dims(s0, n)?;
    integrate_with(s0, t_final, h, |s| vector_field(s, n, idx), |_, _| {})
}

/// Maximum relative drifts from the initial values along a trajectory,
/// each measured as `|v(t) − v(0)| / max(1, |v(0)|)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DriftReport {
    pub hamiltonians: Vec<(IntegralIndex, f64)>,
    pub casimirs: Vec<f64>,
    /// `((r, k), drift)` for every `I_{rk}`.
    pub spectral: Vec<((usize, usize), f64)>,
    /// Sorted eigenvalues of `S`, compared position by position.
    pub eigenvalues: Vec<f64>,
}

impl DriftReport {
    pub fn max_hamiltonian(&self) -> f64 {
        self.hamiltonians.iter().fold(0.0, |m, (_, d)| m.max(*d))
    }

    pub fn max_casimir(&self) -> f64 {
        self.casimirs.iter().fold(0.0, |m, d| m.max(*d))
    }

    pub fn max_spectral(&self) -> f64 {
        self.spectral.iter().fold(0.0, |m, (_, d)| m.max(*d))
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, d| m.max(*d))
    }

    pub fn max(&self) -> f64 {
        self.max_hamiltonian().max(self.max_casimir()).max(self.max_spectral()).max(self.max_eigenvalue())
    }
}

/// All conserved values of one state, in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub hamiltonians: Vec<(IntegralIndex, f64)>,
    pub casimirs: Vec<f64>,
    pub spectral: Vec<((usize, usize), f64)>,
    pub eigenvalues: Vec<f64>,
}

/// Evaluates every admissible `H_{kℓ}`, the Casimirs, all `I_{rk}` and the
/// spectrum of `S`.
pub fn invariants_at(s: &SymMatrix, n: &SkewMatrix) -> Result<Invariants> {
    let x = BILoop::new(s.clone(), n.clone())?;
    let hamiltonians =
        enumerate_indices(s.dim()).into_iter().map(|i| Ok((i, hamiltonian(&x, i)?))).collect::<Result<Vec<_>>>()?;
    let table = spectral_coeffs(s, n)?;
    let mut spectral = Vec::new();
    for r in 0..=s.dim() {
        for k in 0..=r / 2 {
            spectral.push(((r, k), table.get(r, k).expect("in range")));
        }
    }
    Ok(Invariants { hamiltonians, casimirs: casimirs(s, n), spectral, eigenvalues: eigenvalues_sym(s)? })
}

fn rel(v: f64, v0: f64) -> f64 {
    (v - v0).abs() / v0.abs().max(1.0)
}

/// Drift of every conserved quantity along `traj`.
pub fn drift_report(traj: &Trajectory) -> Result<DriftReport> {
    let first = traj.states.first().ok_or(Error::InvalidArgument("empty trajectory"))?;
    let base = invariants_at(first, &traj.n)?;
    let mut report = DriftReport {
        hamiltonians: base.hamiltonians.iter().map(|(i, _)| (*i, 0.0)).collect(),
        casimirs: vec![0.0; base.casimirs.len()],
        spectral: base.spectral.iter().map(|(rk, _)| (*rk, 0.0)).collect(),
        eigenvalues: vec![0.0; base.eigenvalues.len()],
    };
    for s in &traj.states[1..] {
        let cur = invariants_at(s, &traj.n)?;
        for (d, (a, b)) in report.hamiltonians.iter_mut().zip(cur.hamiltonians.iter().zip(&base.hamiltonians)) {
            d.1 = d.1.max(rel(a.1, b.1));
        }
        for (d, (a, b)) in report.casimirs.iter_mut().zip(cur.casimirs.iter().zip(&base.casimirs)) {
            *d = d.max(rel(*a, *b));
        }
        for (d, (a, b)) in report.spectral.iter_mut().zip(cur.spectral.iter().zip(&base.spectral)) {
            d.1 = d.1.max(rel(a.1, b.1));
        }
        for (d, (a, b)) in report.eigenvalues.iter_mut().zip(cur.eigenvalues.iter().zip(&base.eigenvalues)) {
            *d = d.max(rel(*a, *b));
        }
    }
    Ok(report)
}

/// Frobenius norm of `Φ_s^{idx1}(Φ_t^{idx2}(S0)) − Φ_t^{idx2}(Φ_s^{idx1}(S0))`.
pub fn flow_commutation(
    s0: &SymMatrix,
    n: &SkewMatrix,
    idx1: IntegralIndex,
    idx2: IntegralIndex,
    s: f64,
    t: f64,
    h: f64,
) -> Result<f64> {
    let a = flow_endpoint(&flow_endpoint(s0, n, idx2, t, h)?, n, idx1, s, h)?;
    let b = flow_endpoint(&flow_endpoint(s0, n, idx1, s, h)?, n, idx2, t, h)?;
    Ok(a.add_scaled(-1.0, &b).norm())
}

fn m_terms(m: &Matrix) -> Matrix {
    let mt = m.transpose();
    &(&(&mt * m) + &(m * &mt)) + &(&mt * &mt)
}

/// `Ṁ = ¼[M, MᵀM + MMᵀ + (Mᵀ)²]`. With `M = S + N` this is the
/// Bloch–Iserles flow `Ṡ = [N, S²]`, `Ṅ = 0`.
pub fn m_rhs(m: &Matrix) -> Matrix {
    commutator(m, &m_terms(m)).expect("square").scale(0.25)
}

/// `¼[MᵀM + MMᵀ + (Mᵀ)², M]`, the opposite commutator order. It equals
/// `−m_rhs` and generates the time-reversed flow.
pub fn m_rhs_as_printed(m: &Matrix) -> Matrix {
    commutator(&m_terms(m), m).expect("square").scale(0.25)
}

/// RK4 for a matrix ODE, returning the state at every step.
pub fn integrate_matrix(m0: &Matrix, t_final: f64, h: f64, f: impl Fn(&Matrix) -> Matrix) -> Result<Vec<Matrix>> {
    let mut out = Vec::new();
    integrate_with(m0, t_final, h, |m| Ok(f(m)), |_, m| out.push(m.clone()))?;
    Ok(out)
}
