//! Householder QR/LQ and a one-sided Jacobi SVD.
//!
//! All three return thin factors. Rank deficiency is allowed everywhere; the
//! SVD completes orthonormal bases for null directions so `U` and `V` stay
//! orthonormal even for zero inputs.

use super::Matrix;
use crate::error::{Error, Result};

/// Thin Householder QR: `m = q * r` with `q` of shape rows x min(rows, cols)
/// having orthonormal columns and `r` upper triangular.
pub fn qr(m: &Matrix) -> (Matrix, Matrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let k = rows.min(cols);
    if k == 0 {
        return (Matrix::zeros(rows, k), Matrix::zeros(k, cols));
    }
    let mut r = m.clone();
    // Householder vectors stored per reflection.
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v: Vec<f64> = (j..rows).map(|i| r.get(i, j)).collect();
        let below: f64 = v[1..].iter().map(|x| x * x).sum();
        if below == 0.0 && v[0] >= 0.0 {
            // column already in upper-triangular position with a nonnegative
            // pivot; skip the reflection so Q(I) = I
            vs.push(vec![0.0; v.len()]);
            continue;
        }
        let alpha = -v[0].signum() * (v[0] * v[0] + below).sqrt();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            // apply I - 2 v v^T / (v^T v) to the trailing block
            for c in j..cols {
                let mut dot = 0.0;
                for (t, vi) in v.iter().enumerate() {
                    dot += vi * r.get(j + t, c);
                }
                let f = 2.0 * dot / vnorm2;
                for (t, vi) in v.iter().enumerate() {
                    let cur = r.get(j + t, c);
                    r.set(j + t, c, cur - f * vi);
                }
            }
        }
        vs.push(v);
    }
    // q = H_0 H_1 ... H_{k-1} applied to the first k identity columns
    let mut q = Matrix::zeros(rows, k);
    for i in 0..k {
        q.set(i, i, 1.0);
    }
    for j in (0..k).rev() {
        let v = &vs[j];
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in 0..k {
            let mut dot = 0.0;
            for (t, vi) in v.iter().enumerate() {
                dot += vi * q.get(j + t, c);
            }
            let f = 2.0 * dot / vnorm2;
            for (t, vi) in v.iter().enumerate() {
                let cur = q.get(j + t, c);
                q.set(j + t, c, cur - f * vi);
            }
        }
    }
    let mut r_thin = Matrix::zeros(k, cols);
    for i in 0..k {
        for j in i..cols {
            r_thin.set(i, j, r.get(i, j));
        }
    }
    (q, r_thin)
}

/// Thin LQ: `m = l * q` with `l` lower triangular (rows x min) and `q`
/// (min x cols) having orthonormal rows. Computed as the transpose of a QR.
pub fn lq(m: &Matrix) -> (Matrix, Matrix) {
    let (q_t, r_t) = qr(&m.transpose());
    (r_t.transpose(), q_t.transpose())
}

/// Thin singular value decomposition `m = u * diag(s) * v^T`.
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided Jacobi SVD after a QR reduction. `u` is rows x min, `v` is
/// cols x min, singular values are nonincreasing and nonnegative.
pub fn svd(m: &Matrix) -> Result<Svd> {
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        let t = svd_tall(&m.transpose())?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

fn svd_tall(m: &Matrix) -> Result<Svd> {
    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return Ok(Svd {
            u: Matrix::zeros(m.rows(), 0.min(n)),
            s: vec![],
            v: Matrix::zeros(n, 0),
        });
    }
    let (q1, r) = qr(m);
    // one-sided Jacobi on the n x n factor: orthogonalize columns of w = r * v
    let mut w = r;
    let mut v = Matrix::identity(n);
    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0_f64;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let mut aii = 0.0;
                let mut ajj = 0.0;
                let mut aij = 0.0;
                for t in 0..n {
                    let wi = w.get(t, i);
                    let wj = w.get(t, j);
                    aii += wi * wi;
                    ajj += wj * wj;
                    aij += wi * wj;
                }
                let denom = (aii * ajj).sqrt();
                if denom == 0.0 || aij.abs() <= 1e-17 * denom {
                    continue;
                }
                off = off.max(aij.abs() / denom);
                let zeta = (ajj - aii) / (2.0 * aij);
                let t_rot = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t_rot * t_rot).sqrt();
                let s = c * t_rot;
                for t in 0..n {
                    let wi = w.get(t, i);
                    let wj = w.get(t, j);
                    w.set(t, i, c * wi - s * wj);
                    w.set(t, j, s * wi + c * wj);
                    let vi = v.get(t, i);
                    let vj = v.get(t, j);
                    v.set(t, i, c * vi - s * vj);
                    v.set(t, j, s * vi + c * vj);
                }
            }
        }
        if off < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!(
            "Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }
    // column norms are the singular values
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|t| w.get(t, j).powi(2)).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = s.first().copied().unwrap_or(0.0);
    let tiny = smax * (n as f64) * f64::EPSILON;

    let mut u_small = Matrix::zeros(n, n);
    let mut v_sorted = Matrix::zeros(n, n);
    let mut rank = 0;
    for (col, &j) in order.iter().enumerate() {
        for t in 0..n {
            v_sorted.set(t, col, v.get(t, j));
        }
        if norms[j] > tiny && norms[j] > 0.0 {
            for t in 0..n {
                u_small.set(t, col, w.get(t, j) / norms[j]);
            }
            rank = col + 1;
        }
    }
    if rank < n {
        complete_basis(&mut u_small, rank);
    }
    Ok(Svd {
        u: q1.matmul(&u_small),
        s,
        v: v_sorted,
    })
}

/// Fill columns `rank..` of `u` with an orthonormal completion of the first
/// `rank` columns (Gram-Schmidt against unit vectors).
fn complete_basis(u: &mut Matrix, rank: usize) {
    let n = u.rows();
    let total = u.cols();
    let mut next = rank;
    for e in 0..n {
        if next >= total {
            break;
        }
        // candidate: unit vector e, orthogonalized against current columns
        let mut cand = vec![0.0; n];
        cand[e] = 1.0;
        for _ in 0..2 {
            for c in 0..next {
                let mut dot = 0.0;
                for t in 0..n {
                    dot += cand[t] * u.get(t, c);
                }
                for t in 0..n {
                    cand[t] -= dot * u.get(t, c);
                }
            }
        }
        let norm = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for t in 0..n {
                u.set(t, next, cand[t] / norm);
            }
            next += 1;
        }
    }
}
