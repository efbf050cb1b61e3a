//! Cross-checks of the in-crate dense linear algebra against nalgebra.

use isoflow_core::cmatrix::CMatrix;
use isoflow_core::linalg::{lu_solve, singular_values};
use isoflow_core::matrix::{char_poly, eigenvalues_sym, random_sym};
use isoflow_core::rng::SplitMix64;
use isoflow_core::Matrix;
use nalgebra::DMatrix;

fn random_matrix(n: usize, seed: u64) -> Matrix {
    let mut rng = SplitMix64::new(seed);
    Matrix::from_fn(n, |_, _| rng.uniform(-1.0, 1.0))
}

fn to_na(a: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.dim(), a.dim(), a.as_slice())
}

#[test]
fn symmetric_eigenvalues() {
    for n in 2..=8 {
        for seed in 0..5 {
            let s = random_sym(n, 100 * n as u64 + seed).unwrap();
            let ours = eigenvalues_sym(&s).unwrap();
            let mut theirs: Vec<f64> = to_na(&s.to_matrix()).symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn characteristic_polynomial() {
    for n in 1..=7 {
        let a = random_matrix(n, 7 + n as u64);
        let c = char_poly(&a);
        let na = to_na(&a);
        // det(A − wI) at w = 0 and the sign-adjusted trace.
        assert!((c[0] - na.determinant()).abs() < 1e-11, "n={n}");
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        assert!((c[n - 1] - sign * na.trace()).abs() < 1e-12);
        assert_eq!(c[n], if n % 2 == 0 { 1.0 } else { -1.0 });
        for w in [-1.3, 0.4, 2.0] {
            let shifted = &na - DMatrix::<f64>::identity(n, n) * w;
            let p: f64 = c.iter().rev().fold(0.0, |acc, ci| acc * w + ci);
            assert!((p - shifted.determinant()).abs() < 1e-10 * (1.0 + p.abs()));
        }
    }
}

#[test]
fn dense_solve() {
    for n in 1..=8 {
        let a = random_matrix(n, 40 + n as u64);
        let b = random_matrix(n, 60 + n as u64);
        let mut lu = a.as_slice().to_vec();
        let mut x = b.as_slice().to_vec();
        lu_solve(&mut lu, n, &mut x, n).unwrap();
        let theirs = to_na(&a).lu().solve(&to_na(&b)).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((x[i * n + j] - theirs[(i, j)]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn singular_value_decomposition() {
    let cols: Vec<Vec<f64>> = (0..4).map(|j| random_matrix(3, 80 + j).as_slice().to_vec()).collect();
    let mut ours = singular_values(&cols).unwrap();
    ours.sort_by(|a, b| b.total_cmp(a));
    let stacked = DMatrix::from_fn(9, 4, |i, j| cols[j][i]);
    let theirs = stacked.singular_values();
    let mut theirs: Vec<f64> = theirs.iter().copied().collect();
    theirs.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in ours.iter().zip(&theirs) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn matrix_exponential() {
    for n in 2..=5 {
        let a = random_matrix(n, 90 + n as u64).scale(1.5);
        let ours = CMatrix::from_real(&a).expm();
        let theirs = to_na(&a).exp();
        assert!(ours.max_imag() == 0.0);
        let re = ours.real_part();
        for i in 0..n {
            for j in 0..n {
                assert!((re[(i, j)] - theirs[(i, j)]).abs() < 1e-12 * (1.0 + theirs[(i, j)].abs()));
            }
        }
    }
}
