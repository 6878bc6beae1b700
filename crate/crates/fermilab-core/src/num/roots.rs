//! Polynomial root finding.
//!
//! `branch_pair` solves the reciprocal quadratic z^2 - w z + 1 = 0 that shows
//! up whenever a nearest-neighbor direction is frozen; `companion_roots` finds
//! all roots of a general polynomial as eigenvalues of its companion matrix,
//! computed by explicitly shifted QR iteration. Degrees here stay small (a few
//! dozen), so each QR step works on a dense copy of the active block.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::{C64, Error, Result};

/// Roots of `z^2 - w z + 1 = 0` as `(smaller, larger)` by modulus. The product
/// of the two is exactly 1, so the small root is computed as the reciprocal of
/// the large one, which avoids cancellation. At `w = ±2` both equal `±1`.
pub fn branch_pair(w: C64) -> (C64, C64) {
    let half = w * 0.5;
    let mut s = (half * half - C64::new(1.0, 0.0)).sqrt();
    // Choose the sign that enlarges |half + s|.
    if half.re * s.re + half.im * s.im < 0.0 {
        s = -s;
    }
    let large = half + s;
    if large.norm() == 0.0 {
        // Only possible for w = 0: roots are +-i.
        return (C64::new(0.0, 1.0), C64::new(0.0, -1.0));
    }
    let small = large.finv();
    (small, large)
}

/// Evaluates `sum_i coeffs[i] z^i` by Horner's rule.
pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All roots of the polynomial with ascending `coeffs` (the leading entry must
/// be nonzero). Returned sorted by `(modulus, re, im)` for determinism.
pub fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(Error::domain("companion_roots: zero leading coefficient"));
    }
    // Companion matrix of the monic polynomial, row-major.
    let mut h = vec![C64::new(0.0, 0.0); n * n];
    for i in 1..n {
        h[i * n + (i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        h[i * n + (n - 1)] = -coeffs[i] / lead;
    }
    let mut eigs = hessenberg_eigenvalues(&mut h, n)?;
    eigs.sort_by(|a, b| {
        (a.norm(), a.re, a.im)
            .partial_cmp(&(b.norm(), b.re, b.im))
            .unwrap()
    });
    Ok(eigs)
}

/// Eigenvalues of an upper Hessenberg matrix by explicitly shifted QR with
/// deflation. `h` is row-major n-by-n and is destroyed.
fn hessenberg_eigenvalues(h: &mut [C64], n: usize) -> Result<Vec<C64>> {
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut stalled = 0usize;
    let mut budget = 300 * n.max(1);
    while hi > 0 {
        if budget == 0 {
            return Err(Error::convergence("hessenberg_eigenvalues: QR stalled"));
        }
        budget -= 1;
        if hi == 1 {
            eigs.push(h[0]);
            hi = 0;
            continue;
        }
        // Zero out negligible subdiagonals, then deflate from the bottom.
        for i in 1..hi {
            let sub = h[i * n + (i - 1)].norm();
            let local = h[(i - 1) * n + (i - 1)].norm() + h[i * n + i].norm();
            if sub <= f64::EPSILON * local.max(1e-300) {
                h[i * n + (i - 1)] = C64::new(0.0, 0.0);
            }
        }
        if h[(hi - 1) * n + (hi - 2)].norm() == 0.0 {
            eigs.push(h[(hi - 1) * n + (hi - 1)]);
            hi -= 1;
            stalled = 0;
            continue;
        }
        let mut lo = hi - 1;
        while lo > 0 && h[lo * n + (lo - 1)].norm() != 0.0 {
            lo -= 1;
        }
        stalled += 1;
        let shift = if stalled % 12 == 0 {
            // Exceptional shift to break rare cycling.
            let m = hi - 1;
            C64::new(
                h[m * n + m].re + 1.5 * h[m * n + (m - 1)].norm(),
                h[m * n + m].im,
            )
        } else {
            wilkinson_shift(h, n, hi)
        };
        qr_step(h, n, lo, hi, shift);
    }
    Ok(eigs)
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(h: &[C64], n: usize, hi: usize) -> C64 {
    let m = hi - 1;
    let a = h[(m - 1) * n + (m - 1)];
    let b = h[(m - 1) * n + m];
    let c = h[m * n + (m - 1)];
    let d = h[m * n + m];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let r1 = tr * 0.5 + disc;
    let r2 = tr * 0.5 - disc;
    if (r1 - d).norm() <= (r2 - d).norm() { r1 } else { r2 }
}

/// One explicit QR step with shift on the active block `lo..hi`:
/// `H - sI = QR`, then `H <- RQ + sI`, applied in place.
fn qr_step(h: &mut [C64], n: usize, lo: usize, hi: usize, shift: C64) {
    let m = hi - lo;
    // Dense working copy of the active block, shifted.
    let mut a = vec![C64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            a[i * m + j] = h[(lo + i) * n + (lo + j)];
        }
        a[i * m + i] -= shift;
    }
    // Givens sweep down the subdiagonal: rotations[i] zeroes a[i+1][i].
    let mut rot = Vec::with_capacity(m.saturating_sub(1));
    for i in 0..m - 1 {
        let x = a[i * m + i];
        let y = a[(i + 1) * m + i];
        let nrm = Float::sqrt(x.norm_sqr() + y.norm_sqr());
        let (c, s) = if nrm == 0.0 {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            (x / nrm, y / nrm)
        };
        // Rows i, i+1: [[conj c, conj s], [-s, c]].
        for j in 0..m {
            let u = a[i * m + j];
            let v = a[(i + 1) * m + j];
            a[i * m + j] = c.conj() * u + s.conj() * v;
            a[(i + 1) * m + j] = -s * u + c * v;
        }
        rot.push((c, s));
    }
    // RQ: apply adjoint rotations on the right, columns i, i+1.
    for (i, &(c, s)) in rot.iter().enumerate() {
        for r in 0..m {
            let u = a[r * m + i];
            let v = a[r * m + i + 1];
            a[r * m + i] = c * u + s * v;
            a[r * m + i + 1] = -s.conj() * u + c.conj() * v;
        }
    }
    for i in 0..m {
        a[i * m + i] += shift;
    }
    for i in 0..m {
        for j in 0..m {
            h[(lo + i) * n + (lo + j)] = a[i * m + j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rng::SplitMix64;

    fn expand(roots: &[C64]) -> Vec<C64> {
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        coeffs
    }

    #[test]
    fn branch_pair_identities() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..1000 {
            let w = C64::new(4.0 * rng.next_signed(), 4.0 * rng.next_signed());
            let (zs, zl) = branch_pair(w);
            assert!((zs * zl - C64::new(1.0, 0.0)).norm() < 1e-13);
            assert!((zs + zl - w).norm() < 1e-13);
            assert!(zs.norm() <= zl.norm() + 1e-15);
        }
    }

    #[test]
    fn branch_pair_double_roots() {
        let (a, b) = branch_pair(C64::new(2.0, 0.0));
        assert!((a - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((b - C64::new(1.0, 0.0)).norm() < 1e-15);
        let (a, b) = branch_pair(C64::new(-2.0, 0.0));
        assert!((a + C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((b + C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn branch_pair_real_gap_values() {
        // w = -3 (below a nearest-neighbor band): roots (-3 +- sqrt5)/2.
        let (zs, zl) = branch_pair(C64::new(-3.0, 0.0));
        let expect = (-3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((zs - C64::new(expect, 0.0)).norm() < 1e-14);
        assert!((zl - C64::new(1.0 / expect, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn companion_recovers_separated_roots() {
        let mut rng = SplitMix64::new(7);
        for deg in [1usize, 2, 3, 5, 8, 13] {
            for _ in 0..20 {
                let mut roots: Vec<C64> = Vec::new();
                while roots.len() < deg {
                    let cand =
                        C64::new(2.0 * rng.next_signed(), 2.0 * rng.next_signed());
                    if roots.iter().all(|r| (r - cand).norm() > 0.2) {
                        roots.push(cand);
                    }
                }
                let coeffs = expand(&roots);
                let mut found = companion_roots(&coeffs).unwrap();
                for r in &roots {
                    let (idx, _) = found
                        .iter()
                        .enumerate()
                        .min_by(|a, b| {
                            (a.1 - r).norm().partial_cmp(&(b.1 - r).norm()).unwrap()
                        })
                        .unwrap();
                    assert!(
                        (found[idx] - r).norm() < 1e-8,
                        "root {r} not recovered (deg {deg})"
                    );
                    found.remove(idx);
                }
            }
        }
    }

    #[test]
    fn companion_handles_unit_circle_quartet() {
        // Reciprocal quartic with all roots on the unit circle.
        let w1 = C64::new(-1.0 + (0.5f64).sqrt(), 0.0);
        let w2 = C64::new(-1.0 - (0.5f64).sqrt(), 0.0);
        let (a1, b1) = branch_pair(w1);
        let (a2, b2) = branch_pair(w2);
        let coeffs = expand(&[a1, b1, a2, b2]);
        let roots = companion_roots(&coeffs).unwrap();
        for z in roots {
            assert!((z.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn companion_double_root_stays_near_circle() {
        // (z-1)^2 (z-3)(z-1/3): the double root may split at roundoff scale
        // but must stay within ~1e-7 of the circle.
        let coeffs = expand(&[
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(3.0, 0.0),
            C64::new(1.0 / 3.0, 0.0),
        ]);
        let roots = companion_roots(&coeffs).unwrap();
        let near_one: Vec<_> =
            roots.iter().filter(|z| (*z - C64::new(1.0, 0.0)).norm() < 1e-3).collect();
        assert_eq!(near_one.len(), 2);
        for z in near_one {
            assert!((z.norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_zero_leading_coefficient() {
        let coeffs = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!(companion_roots(&coeffs).is_err());
    }

    #[test]
    fn poly_eval_matches_expansion() {
        let roots = [C64::new(0.5, 0.5), C64::new(-1.0, 2.0)];
        let coeffs = expand(&roots);
        for r in roots {
            assert!(poly_eval(&coeffs, r).norm() < 1e-13);
        }
        let z = C64::new(0.3, -0.7);
        let direct = (z - roots[0]) * (z - roots[1]);
        assert!((poly_eval(&coeffs, z) - direct).norm() < 1e-13);
    }
}
