//! Quadrature and discrete-transform primitives on the torus. Periodic
//! integrands are averaged over uniform grids, where the trapezoid rule is
//! spectrally accurate; sums are pairwise to keep rounding growth logarithmic.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::C64;

pub const TAU: f64 = core::f64::consts::TAU;

/// Uniform grid `k_j = 2 pi j / n`, `j = 0..n`.
pub fn torus_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_c(xs: &[C64]) -> C64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Mean of `f` over the 1-torus on an `n`-point grid.
pub fn torus_average_1d<F: FnMut(f64) -> C64>(mut f: F, n: usize) -> C64 {
    let vals: Vec<C64> = torus_grid(n).into_iter().map(|k| f(k)).collect();
    pairwise_sum_c(&vals) / n as f64
}

/// Mean of `f` over the 2-torus on an `n x n` grid.
pub fn torus_average_2d<F: FnMut(f64, f64) -> C64>(mut f: F, n: usize) -> C64 {
    let grid = torus_grid(n);
    let mut rows = Vec::with_capacity(n);
    for &k1 in &grid {
        let vals: Vec<C64> = grid.iter().map(|&k2| f(k1, k2)).collect();
        rows.push(pairwise_sum_c(&vals));
    }
    pairwise_sum_c(&rows) / (n * n) as f64
}

/// Phase table `[exp(i 2 pi j x / n)]_{j=0..n}` for one lattice coordinate.
pub fn phase_row(n: usize, x: i64) -> Vec<C64> {
    (0..n)
        .map(|j| {
            let ang = TAU * (j as f64) * (x as f64) / (n as f64);
            C64::new(Float::cos(ang), Float::sin(ang))
        })
        .collect()
}

/// `u(x) = (1/n) sum_j c_j exp(i k_j x)` for each requested site.
pub fn inverse_transform_1d(coeffs: &[C64], sites: &[i64]) -> Vec<C64> {
    let n = coeffs.len();
    sites
        .iter()
        .map(|&x| {
            let ph = phase_row(n, x);
            let terms: Vec<C64> = coeffs.iter().zip(ph.iter()).map(|(c, p)| c * p).collect();
            pairwise_sum_c(&terms) / n as f64
        })
        .collect()
}

/// Separable 2-torus inverse transform of an `n x n` coefficient grid
/// (row-major in `(j1, j2)`) onto arbitrary integer sites.
pub fn inverse_transform_2d(coeffs: &[C64], n: usize, sites: &[(i64, i64)]) -> Vec<C64> {
    assert_eq!(coeffs.len(), n * n);
    let mut out = Vec::with_capacity(sites.len());
    let mut partial = vec![C64::new(0.0, 0.0); n];
    let mut last_x1: Option<i64> = None;
    for &(x1, x2) in sites {
        if last_x1 != Some(x1) {
            // partial_j2 = sum_j1 c_{j1 j2} exp(i k_{j1} x1)
            let ph1 = phase_row(n, x1);
            for j2 in 0..n {
                let col: Vec<C64> =
                    (0..n).map(|j1| coeffs[j1 * n + j2] * ph1[j1]).collect();
                partial[j2] = pairwise_sum_c(&col);
            }
            last_x1 = Some(x1);
        }
        let ph2 = phase_row(n, x2);
        let terms: Vec<C64> = partial.iter().zip(ph2.iter()).map(|(c, p)| c * p).collect();
        out.push(pairwise_sum_c(&terms) / (n * n) as f64);
    }
    out
}

/// Deterministic low-discrepancy points on the `dim`-torus (Kronecker
/// sequence with square-root-of-prime increments). Used wherever a check
/// needs "arbitrary" quasimomenta without runtime randomness.
pub fn torus_points(dim: usize, count: usize) -> Vec<Vec<f64>> {
    const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    assert!(dim <= PRIMES.len(), "torus_points supports dim <= 8");
    let alphas: Vec<f64> = PRIMES[..dim].iter().map(|&p| Float::fract(Float::sqrt(p))).collect();
    (1..=count)
        .map(|m| {
            alphas
                .iter()
                .map(|&a| TAU * Float::fract(a * m as f64))
                .collect()
        })
        .collect()
}
