//! The experiments behind each subcommand. Every experiment is a pure
//! function of its configuration.

use std::path::PathBuf;
use std::thread;

use isoflow_core::blockpde::{integrate_pde, Parity, PdeState, ReducedSign};
use isoflow_core::factorization::factorization_outcome;
use isoflow_core::findim::{coadjoint_f, group_mul, induced_flow_rhs, orbit_dimension_f, AlgElem, DualElem};
use isoflow_core::flows::{bi_rhs, drift_report, flow_commutation, flow_endpoint, integrate, invariants_at};
use isoflow_core::invariants::{
    casimirs, enumerate_indices, integral_independence_rank, poisson_bracket, spectral_coeffs,
};
use isoflow_core::matrix::{commutator, random_skew_simple, random_sym};
use isoflow_core::rng::SplitMix64;
use isoflow_core::symmetrizer::{
    cayley_hamilton_dependence, generic_independence, lemma_a_residual, parity_check, symmetrizer_count,
    symmetrizer_rank, witness_pair,
};
use isoflow_core::{BILoop, SkewMatrix, SymMatrix};

use crate::config::{ExperimentConfig, PdeSign};
use crate::error::LabResult;
use crate::output::{write_run, Gate, RunOutput, Summary, Table};

/// A run's output and the files written for it.
pub type Executed = LabResult<(RunOutput, Vec<PathBuf>)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Flow,
    Invariants,
    Commute,
    Factorize,
    Findim,
    Pde,
    Lemma41,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Flow,
        Experiment::Invariants,
        Experiment::Commute,
        Experiment::Factorize,
        Experiment::Findim,
        Experiment::Pde,
        Experiment::Lemma41,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Flow => "flow",
            Experiment::Invariants => "invariants",
            Experiment::Commute => "commute",
            Experiment::Factorize => "factorize",
            Experiment::Findim => "findim",
            Experiment::Pde => "pde",
            Experiment::Lemma41 => "lemma41",
        }
    }

    pub fn run(self, cfg: &ExperimentConfig) -> LabResult<RunOutput> {
        match self {
            Experiment::Flow => flow(cfg),
            Experiment::Invariants => invariants(cfg),
            Experiment::Commute => commute(cfg),
            Experiment::Factorize => factorize(cfg),
            Experiment::Findim => findim(cfg),
            Experiment::Pde => pde(cfg),
            Experiment::Lemma41 => lemma41(cfg),
        }
    }

    /// Runs and writes the artifacts into `cfg.out_dir`.
    pub fn execute(self, cfg: &ExperimentConfig) -> Executed {
        let out = self.run(cfg)?;
        let paths = write_run(&cfg.out_dir, &out)?;
        Ok((out, paths))
    }
}

/// Runs every experiment concurrently, returning results in [`Experiment::ALL`] order.
pub fn execute_all(cfg: &ExperimentConfig) -> Vec<(Experiment, Executed)> {
    thread::scope(|scope| {
        let handles: Vec<_> = Experiment::ALL.iter().map(|&e| (e, scope.spawn(move || e.execute(cfg)))).collect();
        handles.into_iter().map(|(e, h)| (e, h.join().expect("experiment thread panicked"))).collect()
    })
}

/// The random initial data `(S, N)` for a seed.
pub fn system(n: usize, seed: u64) -> LabResult<(SymMatrix, SkewMatrix)> {
    Ok((random_sym(n, seed)?, random_skew_simple(n, seed.wrapping_add(1))?))
}

fn quarter_square(n: usize) -> usize {
    n * n / 4
}

fn flow(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    let (s0, k) = system(cfg.n, cfg.seed)?;
    let idx = cfg.index()?;
    let traj = integrate(&s0, &k, idx, cfg.t_final, cfg.h)?;

    let first = invariants_at(&s0, &k)?;
    let mut columns = vec!["t".to_string()];
    columns.extend(first.hamiltonians.iter().map(|(i, _)| i.to_string()));
    columns.extend((0..cfg.n).map(|i| format!("eig_{i}")));
    columns.extend((0..first.casimirs.len()).map(|i| format!("casimir_{}", 2 * i)));
    let mut table = Table::new(columns);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let inv = invariants_at(s, &k)?;
        let mut row = vec![*t];
        row.extend(inv.hamiltonians.iter().map(|(_, v)| *v));
        row.extend(&inv.eigenvalues);
        row.extend(&inv.casimirs);
        table.push(row);
    }

    let d = drift_report(&traj)?;
    let gates = vec![
        Gate::at_most("hamiltonian_drift", d.max_hamiltonian(), cfg.tol("hamiltonian_drift", 1e-8)),
        Gate::at_most("casimir_drift", d.max_casimir(), cfg.tol("casimir_drift", 1e-8)),
        Gate::at_most("spectral_drift", d.max_spectral(), cfg.tol("spectral_drift", 1e-8)),
        Gate::at_most("eigenvalue_drift", d.max_eigenvalue(), cfg.tol("eigenvalue_drift", 1e-8)),
    ];
    let legend = format!(
        "flow {idx} from seed {}: t, H_k_l = (1/(k+1)) [z^l] tr (S+zN)^(k+1), eig_i ascending eigenvalues of S, casimir_l = tr(S N^l)",
        cfg.seed
    );
    Ok(RunOutput { summary: Summary::new("flow", cfg, gates), table: Some((table, legend)) })
}

fn invariants(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    let n = cfg.n;
    let (s, k) = system(n, cfg.seed)?;
    let count_gap = enumerate_indices(n).len().abs_diff(quarter_square(n)) as f64;

    let table = spectral_coeffs(&s, &k)?;
    let evenness = table.max_odd() / table.scale().max(1.0);

    // Moving S along the orbit, S + [N, P], keeps the Casimirs.
    let (p, _) = system(n, cfg.seed.wrapping_add(2))?;
    let shift = commutator(&k.to_matrix(), &p.to_matrix())?;
    let moved = s.add_scaled(1.0, &SymMatrix::from_matrix_projected(&shift));
    let orbit = casimirs(&s, &k).iter().zip(casimirs(&moved, &k)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    // I_{2k,k} depends on N alone.
    let other = spectral_coeffs(&p, &k)?;
    let n_only = (0..=n / 2)
        .map(|j| (table.get(2 * j, j).unwrap_or(0.0) - other.get(2 * j, j).unwrap_or(0.0)).abs())
        .fold(0.0, f64::max);

    let rank = integral_independence_rank(&s, &k)?;
    let gates = vec![
        Gate::at_most("index_count_gap", count_gap, 0.0),
        Gate::at_most("spectral_odd_part", evenness, cfg.tol("spectral_odd_part", 1e-10)),
        Gate::at_most("casimir_orbit_invariance", orbit, cfg.tol("casimir_orbit_invariance", 1e-12)),
        Gate::at_most("leading_spectral_n_only", n_only, cfg.tol("leading_spectral_n_only", 1e-10)),
        Gate::at_most("independence_deficit", quarter_square(n).saturating_sub(rank) as f64, 0.0),
    ];
    Ok(RunOutput { summary: Summary::new("invariants", cfg, gates), table: None })
}

fn commute(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    let (s, k) = system(cfg.n, cfg.seed)?;
    let base = 1.0 + s.norm() + k.to_matrix().norm();
    let x = BILoop::new(s.clone(), k.clone())?;
    let ids = enumerate_indices(cfg.n);
    let mut bracket = 0.0f64;
    for &a in &ids {
        for &b in &ids {
            let scale = base.powi((a.k() + b.k() + 1) as i32);
            bracket = bracket.max(poisson_bracket(&x, a, b)?.abs() / scale);
        }
    }
    let idx = cfg.index()?;
    let mut flows = 0.0f64;
    for &other in ids.iter().filter(|&&i| i != idx) {
        flows = flows.max(flow_commutation(&s, &k, idx, other, cfg.t_final, cfg.t_final, cfg.h)?);
    }
    let gates = vec![
        Gate::at_most("poisson_bracket", bracket, cfg.tol("poisson_bracket", 1e-10)),
        Gate::at_most("flow_commutation", flows, cfg.tol("flow_commutation", 1e-6)),
    ];
    Ok(RunOutput { summary: Summary::new("commute", cfg, gates), table: None })
}

fn factorize(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    let (s, k) = system(cfg.n, cfg.seed)?;
    let idx = cfg.index()?;
    let x = BILoop::new(s.clone(), k.clone())?;
    let out = factorization_outcome(&x, idx, cfg.t_final, cfg.samples, cfg.coeffs)?;
    let ode = flow_endpoint(&s, &k, idx, cfg.t_final, cfg.h)?;
    let orbit = casimirs(&out.s, &k).iter().zip(casimirs(&s, &k)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let gates = vec![
        Gate::at_most("solution_gap", out.s.max_abs_diff(&ode), cfg.tol("solution_gap", 1e-6)),
        Gate::at_most("birkhoff_residual", out.factors.residual, cfg.tol("birkhoff_residual", 1e-8)),
        Gate::at_most("factor_symmetry", out.factors.symmetry_defect, cfg.tol("factor_symmetry", 1e-8)),
        Gate::at_most("winding", out.winding.unsigned_abs() as f64, 0.0),
        Gate::at_most("casimir_drift", orbit, cfg.tol("casimir_drift", 1e-7)),
    ];
    Ok(RunOutput { summary: Summary::new("factorize", cfg, gates), table: None })
}

fn findim(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    let n = cfg.n;
    let (mut law, mut hom, mut flow) = (0.0f64, 0.0f64, 0.0f64);
    for trial in 0..5u64 {
        let base = cfg.seed.wrapping_add(10 * trial);
        let (t1, m1) = system(n, base)?;
        let (t2, m2) = system(n, base.wrapping_add(3))?;
        let (sa, na) = system(n, base.wrapping_add(6))?;
        let g1 = AlgElem::new(t1, m1)?.exp();
        let g2 = AlgElem::new(t2, m2)?.exp();
        let a = DualElem::new(sa, na)?;
        let prod = group_mul(&g1, &g2)?;
        law = law.max(prod.materialize().max_abs_diff(&(&g1.materialize() * &g2.materialize())));
        let lhs = coadjoint_f(&prod, &a)?;
        let rhs = coadjoint_f(&g1, &coadjoint_f(&g2, &a)?)?;
        hom = hom.max(lhs.s.max_abs_diff(&rhs.s));
        flow = flow.max(induced_flow_rhs(&a).s.max_abs_diff(&bi_rhs(&a.s, &a.n)?));
    }
    let (_, k) = system(n, cfg.seed)?;
    let dim_gap = orbit_dimension_f(&k)?.abs_diff(2 * quarter_square(n)) as f64;
    let gates = vec![
        Gate::at_most("group_law", law, cfg.tol("group_law", 1e-13)),
        Gate::at_most("coadjoint_homomorphism", hom, cfg.tol("coadjoint_homomorphism", 1e-12)),
        Gate::at_most("induced_flow", flow, cfg.tol("induced_flow", 1e-12)),
        Gate::at_most("orbit_dimension_gap", dim_gap, 0.0),
    ];
    Ok(RunOutput { summary: Summary::new("findim", cfg, gates), table: None })
}

fn pde(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    // Even data on the three lowest modes, amplitudes drawn from the seed.
    let mut rng = SplitMix64::new(cfg.seed);
    let mut amps = [0.0; 6];
    for a in &mut amps {
        *a = rng.uniform(-1.0, 1.0);
    }
    let field = |c: [f64; 3]| move |x: f64| c[0] * x.cos() + c[1] * (2.0 * x).cos() + c[2] * (3.0 * x).cos();
    let st = PdeState::from_fn(
        cfg.modes,
        field([amps[0], amps[1], amps[2]]),
        field([amps[3], amps[4], amps[5]]),
        Some(Parity::Even),
    )?;
    let sign = match cfg.pde_sign {
        PdeSign::Restricted => ReducedSign::Restricted,
        PdeSign::Flipped => ReducedSign::Flipped,
    };
    let path = integrate_pde(&st, sign, cfg.t_final, cfg.h)?;
    let l0 = st.l2();
    let mut table = Table::new(vec!["t".into(), "l2".into(), "parity_leakage".into()]);
    let (mut drift, mut leak) = (0.0f64, 0.0f64);
    for (t, s) in path.times.iter().zip(&path.states) {
        let l = s.l2();
        let p = s.parity_leakage(Parity::Even);
        drift = drift.max((l - l0).abs() / l0.max(1.0));
        leak = leak.max(p);
        table.push(vec![*t, l, p]);
    }
    let gates = vec![
        Gate::at_most("l2_drift", drift, cfg.tol("l2_drift", 1e-6)),
        Gate::at_most("parity_leakage", leak, cfg.tol("parity_leakage", 1e-12)),
    ];
    let legend = format!(
        "pde with {} modes from seed {}: t, l2 = |u|^2 + |v|^2 on [0, 2pi), parity_leakage = largest odd Fourier part",
        cfg.modes, cfg.seed
    );
    Ok(RunOutput { summary: Summary::new("pde", cfg, gates), table: Some((table, legend)) })
}

fn lemma41(cfg: &ExperimentConfig) -> LabResult<RunOutput> {
    let n = cfg.n;
    let (s, k) = system(n, cfg.seed)?;
    let (a, _) = system(n, cfg.seed.wrapping_add(2))?;
    let (b, _) = system(n, cfg.seed.wrapping_add(4))?;
    let (am, bm) = (a.to_matrix(), b.to_matrix());
    let mut residual = 0.0f64;
    let mut parity_failures = 0usize;
    for d in 0..=8 {
        for i in 0..=d {
            residual = residual.max(lemma_a_residual(&am, &bm, i, d - i)?);
            if !parity_check(&s, &k, i, d - i)? {
                parity_failures += 1;
            }
        }
    }
    let dependence = cayley_hamilton_dependence(&s.to_matrix(), &k.to_matrix())?;
    let (wa, wb) = witness_pair(n, 2.0)?;
    let count = symmetrizer_count(n);
    let witness_gap = count.saturating_sub(symmetrizer_rank(&wa, &wb)?) as f64;
    let generic_gap = count.saturating_sub(generic_independence(&s, &k)?) as f64;
    let gates = vec![
        Gate::at_most("recursion_residual", residual, cfg.tol("recursion_residual", 1e-12)),
        Gate::at_most("parity_failures", parity_failures as f64, 0.0),
        Gate::at_most("cayley_hamilton_dependence", dependence, cfg.tol("cayley_hamilton_dependence", 1e-8)),
        Gate::at_most("witness_rank_deficit", witness_gap, 0.0),
        Gate::at_most("generic_rank_deficit", generic_gap, 0.0),
    ];
    Ok(RunOutput { summary: Summary::new("lemma41", cfg, gates), table: None })
}
