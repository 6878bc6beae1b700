//! Dense complex matrices, row-major. Sized for fiber dimensions and secular
//! systems (a few dozen rows at most), so everything is straightforward O(n^3)
//! with partial pivoting.

use alloc::vec;
use alloc::vec::Vec;

use crate::{C64, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from a row-major slice; `data.len()` must equal `rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: &[C64]) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        CMat { rows, cols, data: data.to_vec() }
    }

    /// Real entries, row-major.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        CMat {
            rows,
            cols,
            data: data.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    /// 1x1 matrix, the scalar fiber case.
    pub fn scalar(z: C64) -> Self {
        CMat { rows: 1, cols: 1, data: vec![z] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (p, q) = (other.rows, other.cols);
        let mut out = CMat::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for r in 0..p {
                    for s in 0..q {
                        out[(i * p + r, j * q + s)] = a * other[(r, s)];
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        num_traits::Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Hermitian deviation `max_ij |A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting. Exact zero for singular input
    /// is not guaranteed, only a small value; callers compare against scales.
    pub fn det(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].norm();
            for r in col + 1..n {
                let v = a[r * n + col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in col + 1..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Solves `self * x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        assert!(self.is_square());
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].norm();
            for r in col + 1..n {
                let v = a[r * n + col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(Error::domain("singular matrix in solve"));
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                x.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in col + 1..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
                let xv = x[col];
                x[r] -= f * xv;
            }
        }
        for row in (0..n).rev() {
            let mut acc = x[row];
            for j in row + 1..n {
                acc -= a[row * n + j] * x[j];
            }
            x[row] = acc / a[row * n + row];
        }
        Ok(x)
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn det_2x2_and_3x3() {
        let m = CMat::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert!((m.det() - c(-2.0, 0.0)).norm() < 1e-14);

        // Singular: rows are linearly dependent.
        let s = CMat::from_real(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert!(s.det().norm() < 1e-12);

        let m = CMat::from_rows(
            3,
            3,
            &[
                c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.0),
                c(1.0, 0.0), c(4.0, 2.0), c(0.0, 0.0),
                c(0.0, 5.0), c(1.0, 1.0), c(2.0, -2.0),
            ],
        );
        // Determinant expanded by hand along the first row.
        let a = c(4.0, 2.0) * c(2.0, -2.0) - c(0.0, 0.0) * c(1.0, 1.0);
        let b = c(1.0, 0.0) * c(2.0, -2.0) - c(0.0, 0.0) * c(0.0, 5.0);
        let d = c(1.0, 0.0) * c(1.0, 1.0) - c(4.0, 2.0) * c(0.0, 5.0);
        let expect = c(2.0, 1.0) * a - c(0.0, -1.0) * b + c(3.0, 0.0) * d;
        assert!((m.det() - expect).norm() < 1e-12);
    }

    #[test]
    fn solve_roundtrip() {
        let m = CMat::from_rows(
            3,
            3,
            &[
                c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.0),
                c(1.0, 0.0), c(4.0, 2.0), c(0.0, 0.0),
                c(0.0, 5.0), c(1.0, 1.0), c(2.0, -2.0),
            ],
        );
        let x_true = [c(1.0, -1.0), c(0.5, 0.25), c(-2.0, 3.0)];
        let b = m.matvec(&x_true);
        let x = m.solve(&b).unwrap();
        for (xi, ti) in x.iter().zip(x_true.iter()) {
            assert!((xi - ti).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let s = CMat::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(s.solve(&[c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn kron_shape_and_values() {
        let a = CMat::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = CMat::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert!((k[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((k[(0, 3)] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((k[(4, 1)] - c(3.0, 0.0)).norm() < 1e-15);
        assert!((k[(5, 5)] - c(4.0, 0.0)).norm() < 1e-15);
        assert!(k[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = CMat::from_rows(2, 2, &[c(1.0, 2.0), c(0.0, 1.0), c(3.0, -1.0), c(2.0, 0.0)]);
        let b = CMat::from_rows(2, 2, &[c(0.0, 1.0), c(1.0, 1.0), c(2.0, 2.0), c(-1.0, 0.0)]);
        let lhs = a.mul(&b).adjoint();
        let rhs = b.adjoint().mul(&a.adjoint());
        assert!(lhs.sub(&rhs).max_abs() < 1e-14);
    }
}
