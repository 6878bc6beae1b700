//! Scalar root bracketing and bisection for real-valued characteristic
//! functions. Deterministic: fixed step counts, no adaptive heuristics.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Bisects `f` on `[lo, hi]`, which must bracket a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain("bisect: endpoints do not bracket a sign change"));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Walks `[lo, hi]` in `steps` uniform increments and bisects every
/// sign-change bracket. Poles are rejected two ways: non-finite samples break
/// brackets, and a converged candidate only counts when `|f|` there is no
/// larger than at the bracket ends (at a pole it blows up instead).
pub fn scan_roots<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    steps: usize,
    tol: f64,
) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (hi - lo) / steps as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=steps {
        let x = lo + h * i as f64;
        let fx = f(x);
        if f_prev.is_finite() && fx.is_finite() {
            if f_prev == 0.0 {
                roots.push(x_prev);
            } else if fx != 0.0 && f_prev.signum() != fx.signum() {
                if let Ok(r) = bisect(&mut f, x_prev, x, tol, 200) {
                    let fr = f(r);
                    if fr.is_finite() && fr.abs() <= f_prev.abs().max(fx.abs()) {
                        roots.push(r);
                    }
                }
            }
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        roots.push(x_prev);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    #[test]
    fn finds_cosine_zeros() {
        let roots = scan_roots(|x: f64| x.cos(), 0.0, 10.0, 1000, 1e-13);
        let expected = [
            core::f64::consts::FRAC_PI_2,
            3.0 * core::f64::consts::FRAC_PI_2,
            5.0 * core::f64::consts::FRAC_PI_2,
        ];
        assert_eq!(roots.len(), expected.len());
        for (r, e) in roots.iter().zip(expected.iter()) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn pole_does_not_fake_a_root() {
        // tan has a pole at pi/2 with a sign change but no root there.
        let f = |x: f64| {
            let t = Float::tan(x);
            if Float::abs(t) > 1e6 {
                f64::NAN
            } else {
                t
            }
        };
        let roots = scan_roots(f, 0.5, 2.5, 4000, 1e-13);
        assert!(roots.is_empty());
    }

    #[test]
    fn rejects_non_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_err());
    }

    #[test]
    fn hits_exact_root() {
        let r = bisect(|x| x - 2.0, 0.0, 4.0, 1e-15, 200).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
    }
}
