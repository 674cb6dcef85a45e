//! Full singular value decomposition by one-sided (Hestenes) Jacobi
//! rotations.
//!
//! Columns of a working copy of `A` are rotated pairwise until they are
//! mutually orthogonal; the rotations accumulate into `V`, the column norms
//! are the singular values and the normalized columns give `U`. Left singular
//! vectors belonging to zero singular values, and the extra columns of a tall
//! `U`, are completed with Gram-Schmidt against the standard basis.

use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 80;

/// `A = left * diag(singular_values) * right^T` with square orthogonal
/// factors (`left` is `m x m`, `right` is `n x n`).
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactorization {
    pub left: DMatrix<f64>,
    /// Nonincreasing, length `min(m, n)`.
    pub singular_values: Vec<f64>,
    pub right: DMatrix<f64>,
}

impl SvdFactorization {
    /// `m x n` diagonal matrix of singular values.
    pub fn sigma(&self) -> DMatrix<f64> {
        let (m, n) = (self.left.nrows(), self.right.nrows());
        let mut s = DMatrix::zeros(m, n);
        for (k, v) in self.singular_values.iter().enumerate() {
            s[(k, k)] = *v;
        }
        s
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.left * self.sigma() * self.right.transpose()
    }

    /// Singular values above `max(m, n) * eps * sigma_max`.
    pub fn rank(&self) -> usize {
        let (m, n) = (self.left.nrows(), self.right.nrows());
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        let tol = m.max(n) as f64 * f64::EPSILON * top;
        self.singular_values.iter().filter(|s| **s > tol).count()
    }
}

/// Full SVD of a finite matrix.
pub fn svd(a: &DMatrix<f64>) -> SvdFactorization {
    if a.nrows() < a.ncols() {
        let t = svd_tall(&a.transpose());
        return SvdFactorization {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        };
    }
    svd_tall(a)
}

fn svd_tall(a: &DMatrix<f64>) -> SvdFactorization {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                for r in 0..m {
                    let (x, y) = (w[(r, p)], w[(r, q)]);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq == 0.0 || apq.abs() <= f64::EPSILON * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let top = norms.iter().copied().fold(0.0_f64, f64::max);
    let zero_tol = m.max(n) as f64 * f64::EPSILON * top;

    let mut singular_values = Vec::with_capacity(n);
    let mut right = DMatrix::zeros(n, n);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(m);
    for (dst, &src) in order.iter().enumerate() {
        right.set_column(dst, &v.column(src));
        let s = norms[src];
        singular_values.push(s);
        if s > zero_tol && s > 0.0 {
            columns.push(w.column(src) / s);
        }
    }
    // left vectors of zero singular values come from the completion
    complete_basis(&mut columns, m);
    let mut left = DMatrix::zeros(m, m);
    for (k, col) in columns.iter().enumerate() {
        left.set_column(k, col);
    }
    SvdFactorization {
        left,
        singular_values,
        right,
    }
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let (x, y) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = c * x - s * y;
        m[(r, q)] = s * x + c * y;
    }
}

/// Extends orthonormal `columns` to a basis of R^dim, each time taking the
/// standard basis vector with the largest component outside the current
/// span (at least `sqrt(missing / dim)`).
fn complete_basis(columns: &mut Vec<DVector<f64>>, dim: usize) {
    while columns.len() < dim {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for k in 0..dim {
            let mut x = DVector::zeros(dim);
            x[k] = 1.0;
            for _ in 0..2 {
                for c in columns.iter() {
                    let proj = c.dot(&x);
                    x.axpy(-proj, c, 1.0);
                }
            }
            let norm = x.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, x));
            }
        }
        let (norm, x) = best.expect("dim > 0 inside the loop");
        columns.push(x / norm);
    }
}
