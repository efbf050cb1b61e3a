//! Classical fixed-step RK4 over any state with a linear structure.

use crate::matrix::{Matrix, SymMatrix};
use crate::{Error, Result};

/// States larger than this (max entry) abort an integration.
pub const BLOWUP_LIMIT: f64 = 1e8;

/// States that RK4 can combine linearly.
pub trait OdeState: Clone {
    /// `self + s · other`.
    fn add_scaled(&self, s: f64, other: &Self) -> Self;
    fn is_finite(&self) -> bool;
    /// Size used by blow-up guards.
    fn magnitude(&self) -> f64;
}

impl OdeState for Matrix {
    fn add_scaled(&self, s: f64, other: &Self) -> Self {
        Matrix::add_scaled(self, s, other)
    }
    fn is_finite(&self) -> bool {
        Matrix::is_finite(self)
    }
    fn magnitude(&self) -> f64 {
        self.max_abs()
    }
}

impl OdeState for SymMatrix {
    fn add_scaled(&self, s: f64, other: &Self) -> Self {
        SymMatrix::add_scaled(self, s, other)
    }
    fn is_finite(&self) -> bool {
        SymMatrix::is_finite(self)
    }
    fn magnitude(&self) -> f64 {
        self.max_abs()
    }
}

/// One classical RK4 step of size `h` for `ẏ = f(y)`.
pub fn rk4_step<S, F>(y: &S, h: f64, f: &mut F) -> S
where
    S: OdeState,
    F: FnMut(&S) -> S,
{
    let k1 = f(y);
    let k2 = f(&y.add_scaled(0.5 * h, &k1));
    let k3 = f(&y.add_scaled(0.5 * h, &k2));
    let k4 = f(&y.add_scaled(h, &k3));
    y.add_scaled(h / 6.0, &k1).add_scaled(h / 3.0, &k2).add_scaled(h / 3.0, &k3).add_scaled(h / 6.0, &k4)
}

/// Number of equal steps covering `[0, t_final]` with step at most `h`, and
/// the step actually used.
pub fn step_plan(t_final: f64, h: f64) -> (usize, f64) {
    if t_final == 0.0 {
        return (0, h);
    }
    let steps = libm::ceil(t_final / h - 1e-9).max(1.0) as usize;
    (steps, t_final / steps as f64)
}

/// Fixed-step RK4 on `[0, t_final]` with the step shrunk to land exactly on
/// `t_final`. `record` sees the initial state and every step. Fails on a
/// nonpositive step, an error from `f`, or a state that is non-finite or
/// exceeds [`BLOWUP_LIMIT`].
pub fn integrate_with<S: OdeState>(
    y0: &S,
    t_final: f64,
    h: f64,
    mut f: impl FnMut(&S) -> Result<S>,
    mut record: impl FnMut(f64, &S),
) -> Result<S> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument("step size must be positive"));
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::InvalidArgument("final time must be nonnegative"));
    }
    let (steps, h) = step_plan(t_final, h);
    let mut y = y0.clone();
    record(0.0, &y);
    let mut failure = None;
    for step in 1..=steps {
        y = rk4_step(&y, h, &mut |x: &S| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                x.add_scaled(-1.0, x)
            }
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if !y.is_finite() || y.magnitude() > BLOWUP_LIMIT {
            return Err(Error::NonFinite { step });
        }
        record(if step == steps { t_final } else { step as f64 * h }, &y);
    }
    Ok(y)
}
