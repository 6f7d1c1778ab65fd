//! Dense linear-algebra kernels: the matrix type, factorizations, GMRES,
//! Gauss-Legendre nodes and seeded known-spectrum matrix generation.
//!
//! Everything here is real double precision, single threaded, and
//! deterministic. Matrices are stored row-major; the text file format is
//! `"rows cols"` on the first line followed by whitespace-separated entries
//! in row-major order.

mod factor;
mod gmres;
mod quad;
mod random;

pub use factor::{lq, qr, svd, Svd};
pub use gmres::{gmres, GmresResult};
pub use quad::gauss_legendre;
pub use random::{gaussian_matrix, random_known_spectrum, SpectrumSpec};

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64` entries. Zero-row and zero-column
/// matrices are legal and show up routinely as empty low-rank factors.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{})", self.rows, self.cols)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn entries(&self) -> usize {
        self.rows * self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// `self * other`, cache-friendly i-k-j loop order.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k];
                if aik == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for j in 0..n {
                    out_row[j] += aik * b_row[j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec dimension");
        let mut y = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut s = 0.0;
            for (a, b) in row.iter().zip(x) {
                s += a * b;
            }
            y[i] = s;
        }
        y
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "axpy shape");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "elementwise shape"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Horizontal concatenation `[a | b | ...]`; all blocks share a row count.
    pub fn hcat(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let mut off = 0;
            for b in blocks {
                assert_eq!(b.rows, rows, "hcat row count");
                out.data[i * cols + off..i * cols + off + b.cols].copy_from_slice(b.row(i));
                off += b.cols;
            }
        }
        out
    }

    /// Vertical concatenation; all blocks share a column count.
    pub fn vcat(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vcat column count");
            data.extend_from_slice(&b.data);
        }
        Matrix { rows, cols, data }
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Spectral norm by power iteration on `M^T M` with a fixed start vector;
    /// deterministic, no factorization.
    pub fn norm2(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let n = self.cols;
        let mut v: Vec<f64> = (0..n).map(|j| 1.0 + (j as f64) / (n as f64 + 1.0)).collect();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nv);
        let mut sigma = 0.0_f64;
        for _ in 0..2000 {
            let mv = self.matvec(&v);
            let mut w = vec![0.0; n];
            // w = M^T (M v)
            for i in 0..self.rows {
                let row = self.row(i);
                let s = mv[i];
                for j in 0..n {
                    w[j] += row[j] * s;
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let new_sigma = norm.sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            v = w;
            if (new_sigma - sigma).abs() <= 1e-13 * new_sigma.max(1e-300) {
                return new_sigma;
            }
            sigma = new_sigma;
        }
        sigma
    }

    /// Write in the matrix text format: `"rows cols"` then row-major values,
    /// one row per line, 17 significant digits.
    pub fn write_text(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{:.16e}", v)).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text(path: &Path) -> Result<Matrix> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut tokens = Vec::new();
        for line in f.lines() {
            let line = line?;
            tokens.extend(line.split_whitespace().map(String::from));
        }
        if tokens.len() < 2 {
            return Err(Error::Parse {
                position: 0,
                message: "matrix file needs a 'rows cols' header".into(),
            });
        }
        let rows: usize = tokens[0].parse().map_err(|_| Error::Parse {
            position: 0,
            message: format!("bad row count '{}'", tokens[0]),
        })?;
        let cols: usize = tokens[1].parse().map_err(|_| Error::Parse {
            position: 1,
            message: format!("bad column count '{}'", tokens[1]),
        })?;
        if tokens.len() != 2 + rows * cols {
            return Err(Error::Parse {
                position: tokens.len(),
                message: format!(
                    "expected {} entries for a {}x{} matrix, got {}",
                    rows * cols,
                    rows,
                    cols,
                    tokens.len() - 2
                ),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, t) in tokens[2..].iter().enumerate() {
            data.push(t.parse::<f64>().map_err(|_| Error::Parse {
                position: 2 + i,
                message: format!("bad entry '{}'", t),
            })?);
        }
        Ok(Matrix { rows, cols, data })
    }
}

/// Compensated (Neumaier) summation; keeps long quadrature sums near
/// one-ulp accuracy.
#[derive(Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_identity() {
        let a = Matrix::from_fn(3, 4, |i, j| (i * 4 + j) as f64);
        let id = Matrix::identity(3);
        assert_eq!(id.matmul(&a), a);
    }

    #[test]
    fn cat_and_transpose() {
        let a = Matrix::from_fn(2, 2, |i, j| (i + 2 * j) as f64);
        let b = Matrix::zeros(2, 0);
        let h = Matrix::hcat(&[&a, &b, &a]);
        assert_eq!(h.cols(), 4);
        assert_eq!(h.get(1, 3), a.get(1, 1));
        let v = Matrix::vcat(&[&a, &a]);
        assert_eq!(v.rows(), 4);
        assert_eq!(v.transpose().get(1, 3), a.get(1, 1));
    }

    #[test]
    fn norm2_of_diagonal() {
        let m = Matrix::diagonal(&[3.0, -7.0, 2.0]);
        assert!((m.norm2() - 7.0).abs() < 1e-10);
    }

    #[test]
    fn text_roundtrip() {
        let dir = std::env::temp_dir().join("akhsylv_matrix_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.mat");
        let a = Matrix::from_fn(3, 2, |i, j| (i as f64) * 0.1 + (j as f64) * std::f64::consts::PI);
        a.write_text(&path).unwrap();
        let b = Matrix::read_text(&path).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_matrices() {
        let a = Matrix::zeros(4, 0);
        let b = Matrix::zeros(0, 5);
        let p = a.matmul(&b);
        assert_eq!((p.rows(), p.cols()), (4, 5));
        assert_eq!(p.frob_norm(), 0.0);
    }
}
