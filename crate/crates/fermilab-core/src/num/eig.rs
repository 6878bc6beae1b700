//! Hermitian eigendecomposition by the cyclic complex Jacobi method.
//!
//! Adequate and robust for the fiber dimensions used here (m*d <= ~32). Each
//! rotation annihilates one off-diagonal pair; sweeps repeat until the
//! off-diagonal mass is at roundoff level.

use alloc::vec::Vec;

use num_traits::Float;

use crate::num::cmat::CMat;
use crate::{C64, Error, Result};

/// Eigenvalues (descending) and a unitary whose columns are the matching
/// eigenvectors: `a * u = u * diag(lambda)`.
pub fn hermitian_eig(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    assert!(a.is_square());
    let n = a.rows();
    let scale = a.frobenius().max(1e-300);
    if a.hermitian_defect() > 1e-10 * scale.max(1.0) {
        return Err(Error::domain("hermitian_eig: matrix is not Hermitian"));
    }
    let mut m = a.clone();
    let mut v = CMat::identity(n);
    let tol = f64::EPSILON * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[(i, j)].norm_sqr();
                }
            }
        }
        if Float::sqrt(off) <= tol * (n as f64) {
            let mut pairs: Vec<(f64, usize)> =
                (0..n).map(|i| (m[(i, i)].re, i)).collect();
            // Descending eigenvalue order; stable tiebreak keeps determinism.
            pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
            let lambdas: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut u = CMat::zeros(n, n);
            for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
                for r in 0..n {
                    u[(r, new_col)] = v[(r, old_col)];
                }
            }
            return Ok((lambdas, u));
        }

        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                let babs = b.norm();
                if babs <= tol {
                    continue;
                }
                let phi = C64::new(b.re / babs, b.im / babs); // e^{i arg b}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * babs);
                let t = {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    -s / (Float::abs(theta) + Float::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = t * c;
                // Columns p,q of M and V (right-multiplication by the rotation).
                for i in 0..n {
                    let mp = m[(i, p)];
                    let mq = m[(i, q)];
                    m[(i, p)] = mp * c + mq * s * phi.conj();
                    m[(i, q)] = mq * c - mp * s * phi;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c + vq * s * phi.conj();
                    v[(i, q)] = vq * c - vp * s * phi;
                }
                // Rows p,q of M (left-multiplication by the adjoint rotation).
                for j in 0..n {
                    let mp = m[(p, j)];
                    let mq = m[(q, j)];
                    m[(p, j)] = mp * c + mq * s * phi;
                    m[(q, j)] = mq * c - mp * s * phi.conj();
                }
            }
        }
    }
    Err(Error::convergence("hermitian_eig: Jacobi sweeps did not settle"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::SplitMix64;

    fn eig_residual(a: &CMat, lam: &[f64], u: &CMat) -> f64 {
        let n = a.rows();
        let mut d = CMat::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = C64::new(lam[i], 0.0);
        }
        a.mul(u).sub(&u.mul(&d)).max_abs()
    }

    #[test]
    fn diagonal_input_is_fixed_point() {
        let a = CMat::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let (lam, u) = hermitian_eig(&a).unwrap();
        assert_eq!(lam, vec![1.0, -1.0]);
        assert!(u.sub(&CMat::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn swap_matrix() {
        let a = CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (lam, u) = hermitian_eig(&a).unwrap();
        assert!((lam[0] - 1.0).abs() < 1e-14 && (lam[1] + 1.0).abs() < 1e-14);
        assert!(eig_residual(&a, &lam, &u) < 1e-14);
        assert!(u.adjoint().mul(&u).sub(&CMat::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_matrices() {
        let mut rng = SplitMix64::new(0x5eed);
        for n in [2usize, 3, 5, 8, 12] {
            for _ in 0..20 {
                let mut a = CMat::zeros(n, n);
                for i in 0..n {
                    a[(i, i)] = C64::new(rng.next_signed(), 0.0);
                    for j in i + 1..n {
                        let z = C64::new(rng.next_signed(), rng.next_signed());
                        a[(i, j)] = z;
                        a[(j, i)] = z.conj();
                    }
                }
                let (lam, u) = hermitian_eig(&a).unwrap();
                let scale = a.frobenius().max(1.0);
                assert!(eig_residual(&a, &lam, &u) < 1e-12 * scale);
                assert!(
                    u.adjoint().mul(&u).sub(&CMat::identity(n)).max_abs() < 1e-12,
                    "eigenvector matrix must be unitary"
                );
                for w in lam.windows(2) {
                    assert!(w[0] >= w[1] - 1e-12, "descending order violated");
                }
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMat::from_real(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(hermitian_eig(&a).is_err());
    }
}
