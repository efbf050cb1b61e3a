//! Numerics for the isospectral flow `Ṡ = [N, S²]` on real symmetric `S`
//! with a fixed skew-symmetric `N`, viewed as a Lie–Poisson system on a
//! coadjoint orbit of a twisted loop group.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`matrix`]: dense real matrices, symmetric/skew storage, Jacobi
//!   eigenvalues, Faddeev–LeVerrier characteristic polynomials, ranks.
//! * [`laurent`]: finite matrix Laurent loops with the `σ` involution, the
//!   `Π±` splitting, the residue pairing, the R-bracket and coadjoint action.
//! * [`symmetrizer`]: the `sym_{ij}(A, B)` word sums and their identities.
//! * [`invariants`]: the commuting Hamiltonians `H_{kℓ}`, Casimirs, the
//!   spectral curve and the Lie–Poisson bracket.
//! * [`flows`]: vector fields of the hierarchy, RK4 trajectories and drift
//!   monitoring.
//! * [`factorization`]: numerical Birkhoff factorization on the unit circle
//!   and the resulting closed-form solution of the flows.
//! * [`findim`]: the `3n × 3n` unipotent group realizing the orbit.
//! * [`blockpde`]: block reductions for rank-two `N` and a pseudospectral
//!   integro-differential limit.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod blockpde;
pub mod cmatrix;
mod error;
pub mod factorization;
pub mod fft;
pub mod findim;
pub mod flows;
pub mod invariants;
pub mod laurent;
pub mod linalg;
pub mod matrix;
pub mod ode;
pub mod rng;
pub mod symmetrizer;

pub use error::{Error, Result};
pub use invariants::IntegralIndex;
pub use laurent::{BILoop, LaurentLoop};
pub use matrix::{Matrix, SkewMatrix, SymMatrix};
