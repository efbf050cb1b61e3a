//! Small dense solvers on plain slices: LU with partial pivoting, Householder
//! least squares, and one-sided Jacobi singular values.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const SVD_SWEEP_CAP: usize = 100;

/// Solves `A X = B` in place. `a` is row-major `n × n`; `b` is row-major
/// `n × nrhs` and is overwritten with `X`. Fails when a pivot falls below
/// `1e−14` times the largest entry of `A`.
pub fn lu_solve(a: &mut [f64], n: usize, b: &mut [f64], nrhs: usize) -> Result<()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n * nrhs);
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::SingularSystem { routine: "lu_solve" });
    }
    for col in 0..n {
        let (piv, pmax) =
            (col..n)
                .map(|r| (r, a[r * n + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= 1e-14 * scale {
            return Err(Error::SingularSystem { routine: "lu_solve" });
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            for j in 0..nrhs {
                b.swap(col * nrhs + j, piv * nrhs + j);
            }
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[r * n + j] -= f * a[col * n + j];
            }
            for j in 0..nrhs {
                b[r * nrhs + j] -= f * b[col * nrhs + j];
            }
        }
    }
    for col in (0..n).rev() {
        let d = a[col * n + col];
        for j in 0..nrhs {
            let mut acc = b[col * nrhs + j];
            for k in col + 1..n {
                acc -= a[col * n + k] * b[k * nrhs + j];
            }
            b[col * nrhs + j] = acc / d;
        }
    }
    Ok(())
}

/// Least-squares fit of `rhs` by the given columns (all of equal length
/// `m ≥ columns.len()`), via Householder QR. Returns the coefficients and the
/// residual norm `‖rhs − C x‖`.
pub fn least_squares(columns: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let p = columns.len();
    let m = rhs.len();
    if columns.iter().any(|c| c.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: columns.iter().map(Vec::len).find(|&l| l != m).unwrap_or(m),
        });
    }
    if p > m {
        return Err(Error::InvalidArgument("more columns than rows in least squares"));
    }
    // Column-major working copy.
    let mut a: Vec<Vec<f64>> = columns.to_vec();
    let mut b = rhs.to_vec();
    let mut diag = vec![0.0; p];
    for k in 0..p {
        let norm = libm::sqrt(a[k][k..].iter().map(|x| x * x).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::SingularSystem { routine: "least_squares" });
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        // v = x − alpha e_k, stored in a[k][k..]
        a[k][k] -= alpha;
        let vnorm2: f64 = a[k][k..].iter().map(|x| x * x).sum();
        diag[k] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let v = &head[k][k..];
        for col in tail.iter_mut() {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, x) in col[k..].iter_mut().zip(v) {
                *c -= f * x;
            }
        }
        let dot: f64 = v.iter().zip(&b[k..]).map(|(x, y)| x * y).sum();
        let f = 2.0 * dot / vnorm2;
        for (c, x) in b[k..].iter_mut().zip(v) {
            *c -= f * x;
        }
    }
    let rscale = diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut x = vec![0.0; p];
    for k in (0..p).rev() {
        if diag[k].abs() <= 1e-14 * rscale {
            return Err(Error::SingularSystem { routine: "least_squares" });
        }
        let mut acc = b[k];
        for j in k + 1..p {
            acc -= a[j][k] * x[j];
        }
        x[k] = acc / diag[k];
    }
    let residual = libm::sqrt(b[p..].iter().map(|x| x * x).sum::<f64>());
    Ok((x, residual))
}

/// Singular values of the matrix whose columns are given (one-sided Jacobi,
/// Hestenes). Returned in descending order.
pub fn singular_values(columns: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut cols = columns.to_vec();
    let p = cols.len();
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let (alpha, beta, gamma) = {
                    let (ci, cj) = (&cols[i], &cols[j]);
                    let mut a = 0.0;
                    let mut b = 0.0;
                    let mut g = 0.0;
                    for (x, y) in ci.iter().zip(cj) {
                        a += x * x;
                        b += y * y;
                        g += x * y;
                    }
                    (a, b, g)
                };
                if gamma == 0.0 || gamma.abs() <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(j);
                for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == SVD_SWEEP_CAP {
            return Err(Error::NoConvergence { routine: "one-sided jacobi", iterations: sweeps });
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| libm::sqrt(c.iter().map(|x| x * x).sum::<f64>())).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}
