//! Banded complex LU with partial pivoting, for brute-force lattice solves on
//! truncated boxes. Row-major band storage: row `i` keeps columns
//! `i-kl ..= i+ku+kl`; the extra `kl` on the right absorbs pivot fill-in.

use alloc::vec;
use alloc::vec::Vec;

use crate::{C64, Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C64>,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, width, data: vec![C64::new(0.0, 0.0); n * width] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        let off = j as isize - i as isize + self.kl as isize;
        debug_assert!(
            off >= 0 && (off as usize) < self.width,
            "entry ({i},{j}) outside band"
        );
        i * self.width + off as usize
    }

    /// Within-band entries only; out-of-band writes panic.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "set({i},{j}) outside declared band (kl={}, ku={})",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "add_to outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if j + self.kl + self.ku >= i && j <= i + self.ku + self.kl {
            let off = j as isize - i as isize + self.kl as isize;
            if off >= 0 && (off as usize) < self.width {
                return self.data[self.slot(i, j)];
            }
        }
        C64::new(0.0, 0.0)
    }

    /// LU factorization with partial pivoting; consumes the matrix.
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, kl) = (self.n, self.kl);
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            let r_hi = (col + kl).min(n - 1);
            let mut piv = col;
            let mut best = self.data[self.slot(col, col)].norm();
            for r in col + 1..=r_hi {
                let v = self.data[self.slot(r, col)].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(Error::domain("banded factor: singular matrix"));
            }
            pivots[col] = piv;
            // Rows col and piv both have support only in [col, col+ku+kl] now.
            if piv != col {
                let j_hi = (col + self.ku + kl).min(n - 1);
                for j in col..=j_hi {
                    let a = self.slot(col, j);
                    let b = self.slot(piv, j);
                    self.data.swap(a, b);
                }
            }
            let d = self.data[self.slot(col, col)];
            let j_hi = (col + self.ku + kl).min(n - 1);
            for r in col + 1..=r_hi {
                let f = self.data[self.slot(r, col)] / d;
                let fs = self.slot(r, col);
                self.data[fs] = f; // L factor kept in place
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in col + 1..=j_hi {
                    let src = self.slot(col, j);
                    let dst = self.slot(r, j);
                    let v = self.data[src];
                    self.data[dst] -= f * v;
                }
            }
        }
        Ok(BandedLu { m: self, pivots })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    m: BandedMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.m.n;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for col in 0..n {
            x.swap(col, self.pivots[col]);
            let r_hi = (col + self.m.kl).min(n - 1);
            let xc = x[col];
            if xc != C64::new(0.0, 0.0) {
                for r in col + 1..=r_hi {
                    let f = self.m.data[self.m.slot(r, col)];
                    x[r] -= f * xc;
                }
            }
        }
        for row in (0..n).rev() {
            let j_hi = (row + self.m.ku + self.m.kl).min(n - 1);
            let mut acc = x[row];
            for j in row + 1..=j_hi {
                acc -= self.m.data[self.m.slot(row, j)] * x[j];
            }
            x[row] = acc / self.m.data[self.m.slot(row, row)];
        }
        x
    }
}
