//! Matrix-free GMRES: Arnoldi with modified Gram-Schmidt, Givens rotations,
//! no restarting.

/// Outcome of a GMRES solve. `residual_history[k]` is the relative residual
/// after `k + 1` iterations.
pub struct GmresResult {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub converged: bool,
}

/// Solve `A x = rhs` given only the action `apply: v -> A v`, to relative
/// residual `tol` or at most `max_iter` iterations. A happy breakdown of the
/// Arnoldi process is treated as convergence; stagnation shows up as
/// `converged = false` with the history attached.
pub fn gmres(
    apply: &mut dyn FnMut(&[f64]) -> Vec<f64>,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> GmresResult {
    let n = rhs.len();
    let bnorm = norm(rhs);
    if bnorm == 0.0 {
        return GmresResult {
            solution: vec![0.0; n],
            iterations: 0,
            residual_history: vec![],
            converged: true,
        };
    }
    let max_iter = max_iter.min(n);
    // x0 = 0, so r0 = rhs
    let mut basis: Vec<Vec<f64>> = vec![rhs.iter().map(|v| v / bnorm).collect()];
    let mut h: Vec<Vec<f64>> = Vec::new(); // h[j] holds column j, length j+2
    let mut cs: Vec<f64> = Vec::new();
    let mut sn: Vec<f64> = Vec::new();
    let mut g = vec![bnorm]; // rotated rhs of the least-squares problem
    let mut history = Vec::new();
    let mut converged = false;
    let mut k_used = 0;

    for j in 0..max_iter {
        let mut w = apply(&basis[j]);
        let mut hcol = vec![0.0; j + 2];
        for (i, q) in basis.iter().enumerate() {
            let hij = dot(&w, q);
            hcol[i] = hij;
            for (wt, qt) in w.iter_mut().zip(q) {
                *wt -= hij * qt;
            }
        }
        let wnorm = norm(&w);
        hcol[j + 1] = wnorm;

        // apply accumulated rotations to the new column
        for i in 0..j {
            let t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
            hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
            hcol[i] = t;
        }
        let (c, s) = givens(hcol[j], hcol[j + 1]);
        let t = c * hcol[j] + s * hcol[j + 1];
        hcol[j + 1] = 0.0;
        hcol[j] = t;
        cs.push(c);
        sn.push(s);
        g.push(-s * g[j]);
        g[j] *= c;
        h.push(hcol);

        let rel = g[j + 1].abs() / bnorm;
        history.push(rel);
        k_used = j + 1;
        if rel <= tol {
            converged = true;
            break;
        }
        if wnorm <= 1e-300 {
            // happy breakdown: the Krylov space is invariant, solution exact
            converged = true;
            break;
        }
        basis.push(w.iter().map(|v| v / wnorm).collect());
    }

    // back substitution on the k_used x k_used triangular system
    let mut y = vec![0.0; k_used];
    for i in (0..k_used).rev() {
        let mut s = g[i];
        for j in i + 1..k_used {
            s -= h[j][i] * y[j];
        }
        y[i] = s / h[i][i];
    }
    let mut x = vec![0.0; n];
    for (j, yj) in y.iter().enumerate() {
        for (xt, qt) in x.iter_mut().zip(&basis[j]) {
            *xt += yj * qt;
        }
    }
    GmresResult {
        solution: x,
        iterations: k_used,
        residual_history: history,
        converged,
    }
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gaussian_matrix, Matrix};

    #[test]
    fn identity_converges_in_one() {
        let rhs = vec![1.0, -2.0, 3.0];
        let out = gmres(&mut |v: &[f64]| v.to_vec(), &rhs, 1e-12, 10);
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        for (a, b) in out.solution.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_plus_rank_one_in_two() {
        let n = 25;
        let u = gaussian_matrix(n, 1, 20);
        let v = gaussian_matrix(1, n, 21);
        let a = Matrix::identity(n).add(&u.matmul(&v));
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let out = gmres(&mut |x: &[f64]| a.matvec(x), &rhs, 1e-12, 30);
        assert!(out.converged);
        assert!(out.iterations <= 2, "iterations = {}", out.iterations);
        let res = a
            .matvec(&out.solution)
            .iter()
            .zip(&rhs)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(res <= 1e-10);
    }

    #[test]
    fn residual_monotone_on_spd() {
        let n = 30;
        let g = gaussian_matrix(n, n, 5);
        let a = g.transpose().matmul(&g).add(&Matrix::identity(n).scale(0.5));
        let rhs: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let out = gmres(&mut |x: &[f64]| a.matvec(x), &rhs, 1e-12, n);
        for w in out.residual_history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        assert!(out.converged);
    }

    #[test]
    fn residual_orthogonal_to_krylov_image() {
        // Galerkin property of the GMRES minimizer: the residual is
        // orthogonal to A * (Krylov basis actually used).
        let n = 12;
        let a = gaussian_matrix(n, n, 8).add(&Matrix::identity(n).scale(4.0));
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).cos()).collect();
        let out = gmres(&mut |x: &[f64]| a.matvec(x), &rhs, 1e-14, 5);
        let ax = a.matvec(&out.solution);
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
        // x lives in K_k(A, b); r must be orthogonal to A K_k. Test against
        // A b and A^2 b (members of A K_k for k >= 2).
        let ab = a.matvec(&rhs);
        let a2b = a.matvec(&ab);
        let rn = norm(&r).max(1e-300);
        assert!(dot(&r, &ab).abs() / (rn * norm(&ab)) <= 1e-10);
        assert!(dot(&r, &a2b).abs() / (rn * norm(&a2b)) <= 1e-10);
    }
}
