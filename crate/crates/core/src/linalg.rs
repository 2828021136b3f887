//! Small dense linear algebra: symmetric eigenvalues and orthonormal
//! nullspaces of constraint systems.

use crate::algebra7::{Matrix7, DIM};
use crate::scalar::Real;

/// Eigenvalues of a symmetric 7×7 matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<T: Real>(m: &Matrix7<T>) -> [T; DIM] {
    let mut a = m.0;
    let eps = T::epsilon();
    for _sweep in 0..64 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..DIM {
            diag = diag + a[i][i] * a[i][i];
            for j in 0..DIM {
                if i != j {
                    off = off + a[i][j] * a[i][j];
                }
            }
        }
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..DIM {
            for q in p + 1..DIM {
                if a[p][q] == T::zero() {
                    continue;
                }
                let two = T::lit(2.0);
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..DIM {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..DIM {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::array::from_fn(|i| a[i][i])
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * *xi;
    }
}

/// Removes from `v` its components along the orthonormal set `basis`,
/// twice ("twice is enough" re-orthogonalization).
pub fn project_out<T: Real>(v: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            axpy(-c, q, v);
        }
    }
}

/// Orthonormal basis of the span of `vectors`, dropping any vector whose
/// residual after projection is below `rel_tol` times the largest input
/// norm. The threshold is global so that rows which vanish up to rounding
/// do not contribute noise directions.
pub fn orthonormal_span<T: Real>(vectors: &[Vec<T>], rel_tol: T) -> Vec<Vec<T>> {
    let scale = vectors.iter().fold(T::zero(), |m, v| m.max(norm(v)));
    let mut basis: Vec<Vec<T>> = Vec::new();
    if scale == T::zero() {
        return basis;
    }
    for v in vectors {
        let mut w = v.clone();
        project_out(&mut w, &basis);
        let n = norm(&w);
        if n > rel_tol * scale {
            for x in w.iter_mut() {
                *x = *x / n;
            }
            basis.push(w);
        }
    }
    basis
}

/// Orthonormal basis of `{x : row · x = 0 for every row}` in `ncols`
/// dimensions.
///
/// The row space is orthonormalized first; the complement is then grown by
/// repeatedly taking the coordinate axis with the largest residual outside
/// the span found so far, which keeps every accepted direction well
/// conditioned.
pub fn orthonormal_nullspace<T: Real>(rows: &[Vec<T>], ncols: usize, rel_tol: T) -> Vec<Vec<T>> {
    let row_basis = orthonormal_span(rows, rel_tol);
    orthonormal_complement(&row_basis, ncols)
}

/// Completes an orthonormal set to an orthonormal basis of the whole space
/// and returns only the added vectors.
pub fn orthonormal_complement<T: Real>(basis: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let target = ncols.saturating_sub(basis.len());
    let mut residual_sq: Vec<T> = (0..ncols)
        .map(|j| {
            let captured = basis.iter().fold(T::zero(), |acc, q| acc + q[j] * q[j]);
            T::one() - captured
        })
        .collect();
    let mut out: Vec<Vec<T>> = Vec::with_capacity(target);
    let mut all: Vec<Vec<T>> = basis.to_vec();
    while out.len() < target {
        let (j, best) = residual_sq
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (j, r)| if *r > acc.1 { (j, *r) } else { acc });
        if best <= T::lit(1e-6) {
            break;
        }
        let mut w = vec![T::zero(); ncols];
        w[j] = T::one();
        project_out(&mut w, &all);
        let n = norm(&w);
        for x in w.iter_mut() {
            *x = *x / n;
        }
        for (r, wk) in residual_sq.iter_mut().zip(&w) {
            *r = *r - *wk * *wk;
        }
        residual_sq[j] = T::zero();
        all.push(w.clone());
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes() {
        let m = Matrix7::<f64>::from_fn(|i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let ev = symmetric_eigenvalues(&m);
        let tr: f64 = ev.iter().sum();
        assert!((tr - m.trace()).abs() < 1e-12);
        // Hilbert-like matrices are positive definite.
        assert!(ev.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn nullspace_of_single_constraint() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 1.0, 1.0]];
        let ns = orthonormal_nullspace(&rows, 3, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(v, &rows[0]).abs() < 1e-14);
            assert!((norm(v) - 1.0).abs() < 1e-14);
        }
        assert!(dot(&ns[0], &ns[1]).abs() < 1e-14);
    }

    #[test]
    fn dependent_rows_do_not_inflate_rank() {
        let rows = vec![vec![1.0, 2.0, 0.0, 0.0], vec![2.0, 4.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, -1.0]];
        assert_eq!(orthonormal_nullspace(&rows, 4, 1e-10).len(), 2);
    }
}
