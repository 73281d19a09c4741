//! Krylov solvers and dense Hermitian eigen-analysis on coefficient vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Conjugate gradients for a Hermitian positive definite operator, stopped
/// on the relative residual `∥Ax - b∥ <= tol ∥b∥`. The recurrence residual
/// is checked against a recomputed one before declaring convergence.
pub fn conjugate_gradient(
    mut apply: impl FnMut(&[Complex64]) -> Vec<Complex64>,
    rhs: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<CgOutcome> {
    let n = rhs.len();
    let bnorm = norm(rhs);
    if bnorm == 0.0 {
        return Ok(CgOutcome {
            x: vec![Complex64::new(0.0, 0.0); n],
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    let mut iterations = 0;
    while iterations < max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap).re;
        if pap <= 0.0 {
            return Err(Error::NoConvergence {
                iterations,
                residual: rr.sqrt() / bnorm,
            });
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        iterations += 1;
        let rr_new = dot(&r, &r).re;
        if rr_new.sqrt() <= tol * bnorm {
            let ax = apply(&x);
            let true_res: f64 = norm(&ax.iter().zip(rhs).map(|(a, b)| b - a).collect::<Vec<_>>());
            if true_res <= tol * bnorm {
                return Ok(CgOutcome {
                    x,
                    iterations,
                    relative_residual: true_res / bnorm,
                });
            }
            // restart from the true residual
            r = ax.iter().zip(rhs).map(|(a, b)| b - a).collect();
            p = r.clone();
            rr = dot(&r, &r).re;
            continue;
        }
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + p[i] * beta;
        }
        rr = rr_new;
    }
    Err(Error::NoConvergence {
        iterations,
        residual: rr.sqrt() / bnorm,
    })
}

/// Extreme eigenvalues of a Hermitian operator by Lanczos with full
/// reorthogonalization. After `dim` steps the Ritz values are exact up to
/// rounding.
pub fn lanczos_extremes(
    mut apply: impl FnMut(&[Complex64]) -> Vec<Complex64>,
    start: &[Complex64],
    max_steps: usize,
) -> Result<(f64, f64)> {
    let dim = start.len();
    let steps = max_steps.min(dim).max(1);
    let s0 = norm(start);
    if s0 == 0.0 {
        return Err(Error::InvalidParameter("lanczos start vector is zero".into()));
    }
    let mut basis: Vec<Vec<Complex64>> = vec![start.iter().map(|c| c / s0).collect()];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    for j in 0..steps {
        let mut w = apply(&basis[j]);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // two passes of Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= qi * c);
            }
        }
        let b = norm(&w);
        if j + 1 == steps || b <= 1e-13 * a.abs().max(1e-300) {
            break;
        }
        beta.push(b);
        basis.push(w.into_iter().map(|c| c / b).collect());
    }
    let k = alpha.len();
    let mut tri = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        tri[(i, i)] = alpha[i];
        if i + 1 < k {
            tri[(i, i + 1)] = beta[i];
            tri[(i + 1, i)] = beta[i];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(tri);
    let lo = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(hermitize(m)).eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigen-decomposition of a Hermitian matrix, ascending; eigenvectors are
/// the columns of the returned matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = nalgebra::SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn matvec(m: &CMatrix, x: &[Complex64]) -> Vec<Complex64> {
    let v = m * DVector::from_column_slice(x);
    v.iter().cloned().collect()
}
