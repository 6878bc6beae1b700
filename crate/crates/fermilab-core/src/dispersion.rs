//! Band structure through the Floquet determinant: for 1D operators the
//! spectral multiplicity at an energy is the number of unit-circle roots of
//! `z^D det(symbol(z) - lambda)`, and band intervals follow from tracking it.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::lattice::PeriodicStencil;
use crate::num::eig::hermitian_eig;
use crate::num::quad::TAU;
use crate::num::roots::companion_roots;
use crate::{C64, Error, Result};

/// Multiplicity verdict at one energy. `Edge` marks a coalescing root pair on
/// the unit circle (band edge or band crossing), where the count is not
/// stable under perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mult {
    Count(u32),
    Edge,
}

/// Multiplicity sampled on an energy grid plus the derived constant-
/// multiplicity intervals `(lo, hi, mult)`.
#[derive(Debug, Clone)]
pub struct BandReport {
    pub lambda_grid: Vec<f64>,
    pub multiplicity: Vec<Mult>,
    pub intervals: Vec<(f64, f64, u32)>,
}

/// `det(symbol(z) - lambda I)` at one Laurent point.
pub fn det_symbol(a: &PeriodicStencil, z: &[C64], lambda: f64) -> C64 {
    let mut m = a.symbol_eval(z);
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] -= C64::new(lambda, 0.0);
    }
    m.det()
}

/// Ascending coefficients of `p(z) = z^D det(symbol(z) - lambda)` where
/// `D = degree * fiber`; recovered exactly by sampling `2D + 1` roots of
/// unity (the Laurent powers of the determinant lie in `[-D, D]`).
pub fn laurent_det_coeffs(a: &PeriodicStencil, lambda: f64) -> Result<Vec<C64>> {
    if a.dim() != 1 {
        return Err(Error::domain("Laurent determinant needs a 1D operator"));
    }
    let d = (a.degree() as usize) * a.fiber();
    if d == 0 {
        return Err(Error::domain("operator has no translation part"));
    }
    let m = 2 * d + 1;
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let ang = TAU * j as f64 / m as f64;
        let z = C64::new(Float::cos(ang), Float::sin(ang));
        samples.push(z.powi(d as i32) * det_symbol(a, &[z], lambda));
    }
    let mut coeffs = Vec::with_capacity(m);
    for deg in 0..m {
        let mut acc = C64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let ang = -TAU * (j * deg % m) as f64 / m as f64;
            acc += s * C64::new(Float::cos(ang), Float::sin(ang));
        }
        coeffs.push(acc / m as f64);
    }
    Ok(coeffs)
}

const COEFF_STRIP_REL: f64 = 1e-10;

/// Roots of the Floquet polynomial at `lambda`, spurious `z = 0` and
/// `z = infinity` artifacts (from overestimating the Laurent span) stripped.
pub fn branch_roots(a: &PeriodicStencil, lambda: f64) -> Result<Vec<C64>> {
    let coeffs = laurent_det_coeffs(a, lambda)?;
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::domain("determinant vanishes identically"));
    }
    let keep: Vec<C64> = coeffs
        .iter()
        .map(|&c| if c.norm() <= COEFF_STRIP_REL * scale { C64::new(0.0, 0.0) } else { c })
        .collect();
    let lo = keep.iter().position(|c| c.norm() > 0.0).unwrap();
    let hi = keep.iter().rposition(|c| c.norm() > 0.0).unwrap();
    if lo == hi {
        return Ok(Vec::new());
    }
    companion_roots(&keep[lo..=hi])
}

const CIRCLE_TOL: f64 = 1e-8;
const EDGE_PAIR_TOL: f64 = 1e-6;

/// Spectral multiplicity of `lambda` for a 1D operator: the number of
/// Floquet roots on the unit circle. A near-coincident pair of near-circle
/// roots means a band edge, reported as `Mult::Edge` rather than a count.
pub fn multiplicity_1d(a: &PeriodicStencil, lambda: f64) -> Result<Mult> {
    let roots = branch_roots(a, lambda)?;
    for (i, zi) in roots.iter().enumerate() {
        for zj in roots.iter().skip(i + 1) {
            if (zi - zj).norm() <= EDGE_PAIR_TOL
                && (zi.norm() - 1.0).abs() <= EDGE_PAIR_TOL
                && (zj.norm() - 1.0).abs() <= EDGE_PAIR_TOL
            {
                return Ok(Mult::Edge);
            }
        }
    }
    let count =
        roots.iter().filter(|z| (z.norm() - 1.0).abs() <= CIRCLE_TOL).count() as u32;
    Ok(Mult::Count(count))
}

/// Multiplicity on a uniform energy grid, with constant-count runs collapsed
/// to intervals. `Edge` samples separate runs and join the abutting intervals'
/// endpoints.
pub fn band_report(a: &PeriodicStencil, lo: f64, hi: f64, n: usize) -> Result<BandReport> {
    let mut lambda_grid = Vec::with_capacity(n);
    let mut multiplicity = Vec::with_capacity(n);
    for i in 0..n {
        let lam = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        lambda_grid.push(lam);
        multiplicity.push(multiplicity_1d(a, lam)?);
    }
    let mut intervals: Vec<(f64, f64, u32)> = Vec::new();
    let mut run: Option<(f64, f64, u32)> = None;
    for (i, m) in multiplicity.iter().enumerate() {
        match *m {
            Mult::Count(c) if c > 0 => match run {
                Some((rlo, _, rc)) if rc == c => run = Some((rlo, lambda_grid[i], c)),
                Some(done) => {
                    intervals.push(done);
                    run = Some((lambda_grid[i], lambda_grid[i], c));
                }
                None => run = Some((lambda_grid[i], lambda_grid[i], c)),
            },
            _ => {
                if let Some(done) = run.take() {
                    intervals.push(done);
                }
            }
        }
    }
    if let Some(done) = run.take() {
        intervals.push(done);
    }
    Ok(BandReport { lambda_grid, multiplicity, intervals })
}

/// Exact band decomposition of the two-chain pair with onsite splitting
/// `s = sqrt(b^2 + c^2)`: two cosine bands `[a - 2, a + 2] +- s`, overlapping
/// with multiplicity 4 when `s <= 2`.
pub fn coupled_chain_bands(a: f64, b: f64, c: f64) -> Vec<(f64, f64, u32)> {
    let s = Float::sqrt(b * b + c * c);
    let (lo1, hi1) = (a - 2.0 - s, a + 2.0 - s);
    let (lo2, hi2) = (a - 2.0 + s, a + 2.0 + s);
    if s == 0.0 {
        return vec![(lo1, hi1, 4)];
    }
    if s > 2.0 {
        return vec![(lo1, hi1, 2), (lo2, hi2, 2)];
    }
    let mut out = Vec::new();
    if lo2 > lo1 {
        out.push((lo1, lo2, 2));
    }
    if hi1 > lo2 {
        out.push((lo2, hi1, 4));
    }
    if hi2 > hi1 {
        out.push((hi1, hi2, 2));
    }
    out
}

/// Per-branch eigenvalue ranges of the symbol over a quasimomentum grid
/// (branches sorted descending pointwise; sorted branches are continuous, so
/// their sampled min and max bracket each band). Supports dim 1 and 2.
pub fn band_witness(a: &PeriodicStencil, n_grid: usize) -> Result<Vec<(f64, f64)>> {
    let fiber = a.fiber();
    let mut lo = vec![f64::INFINITY; fiber];
    let mut hi = vec![f64::NEG_INFINITY; fiber];
    let mut visit = |k: &[f64]| -> Result<()> {
        let (lams, _) = hermitian_eig(&a.symbol_at_k(k))?;
        for (b, &l) in lams.iter().enumerate() {
            lo[b] = lo[b].min(l);
            hi[b] = hi[b].max(l);
        }
        Ok(())
    };
    match a.dim() {
        1 => {
            for j in 0..n_grid {
                visit(&[TAU * j as f64 / n_grid as f64])?;
            }
        }
        2 => {
            for j1 in 0..n_grid {
                for j2 in 0..n_grid {
                    visit(&[
                        TAU * j1 as f64 / n_grid as f64,
                        TAU * j2 as f64 / n_grid as f64,
                    ])?;
                }
            }
        }
        d => return Err(Error::Domain(alloc::format!("band witness unsupported for dim {d}"))),
    }
    Ok(lo.into_iter().zip(hi).collect())
}

/// Whether `x` lies within `tol` of one of the witness intervals.
pub fn spectrum_contains(witness: &[(f64, f64)], x: f64, tol: f64) -> bool {
    witness.iter().any(|&(lo, hi)| x >= lo - tol && x <= hi + tol)
}

/// `(k, descending symbol eigenvalues)` on a uniform 1D quasimomentum grid.
pub fn dispersion_samples(a: &PeriodicStencil, n: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    if a.dim() != 1 {
        return Err(Error::domain("dispersion samples need a 1D operator"));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let k = TAU * j as f64 / n as f64;
        let (lams, _) = hermitian_eig(&a.symbol_at_k(&[k]))?;
        out.push((k, lams));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{coupled_chain_pair, fourth_order_chain, nn_chain};
    use crate::num::roots::poly_eval;

    #[test]
    fn laurent_coeffs_reproduce_determinant() {
        let a = fourth_order_chain();
        let lam = 1.3;
        let coeffs = laurent_det_coeffs(&a, lam).unwrap();
        // degree * fiber = 2, so p has degree 4: z^2 (z^2 + 1/z^2 + 2(z + 1/z) - lam)
        assert_eq!(coeffs.len(), 5);
        for z in [C64::new(0.4, 0.7), C64::new(-1.2, 0.1)] {
            let p = poly_eval(&coeffs, z);
            let direct = z.powi(2) * det_symbol(&a, &[z], lam);
            assert!((p - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn coupled_pair_coeffs_are_palindromic() {
        // det factorizes through z + 1/z, so p(z) = z^2 det(..) is palindromic.
        let a = coupled_chain_pair(0.3, 0.8, 0.5);
        let coeffs = laurent_det_coeffs(&a, 0.9).unwrap();
        assert_eq!(coeffs.len(), 5);
        let n = coeffs.len();
        for i in 0..n / 2 {
            assert!((coeffs[i] - coeffs[n - 1 - i]).norm() < 1e-12);
        }
        // monic up to rounding
        assert!((coeffs[n - 1] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fourth_order_chain_multiplicities() {
        let a = fourth_order_chain();
        // multiplicity 4 between -3 and -2, multiplicity 2 between -2 and 6
        for lam in [-2.9, -2.5, -2.05] {
            assert_eq!(multiplicity_1d(&a, lam).unwrap(), Mult::Count(4), "lam={lam}");
        }
        for lam in [-1.9, 0.0, 2.0, 5.9] {
            assert_eq!(multiplicity_1d(&a, lam).unwrap(), Mult::Count(2), "lam={lam}");
        }
        for lam in [-3.2, 6.1, 9.0] {
            assert_eq!(multiplicity_1d(&a, lam).unwrap(), Mult::Count(0), "lam={lam}");
        }
        // band edges and the interior multiplicity step are flagged
        for lam in [-3.0, -2.0, 6.0] {
            assert_eq!(multiplicity_1d(&a, lam).unwrap(), Mult::Edge, "lam={lam}");
        }
        // just off the step the counts are stable
        assert_eq!(multiplicity_1d(&a, -2.0 - 1e-9).unwrap(), Mult::Count(4));
        assert_eq!(multiplicity_1d(&a, -2.0 + 1e-9).unwrap(), Mult::Count(2));
    }

    #[test]
    fn nn_chain_multiplicities() {
        let a = nn_chain();
        assert_eq!(multiplicity_1d(&a, 0.0).unwrap(), Mult::Count(2));
        assert_eq!(multiplicity_1d(&a, -3.0).unwrap(), Mult::Count(0));
        assert_eq!(multiplicity_1d(&a, 2.0).unwrap(), Mult::Edge);
    }

    #[test]
    fn band_report_recovers_intervals() {
        let a = fourth_order_chain();
        let report = band_report(&a, -4.0, 7.0, 221).unwrap();
        // grid step 0.05: intervals within a step of the exact ones
        assert_eq!(report.intervals.len(), 2);
        let (lo1, hi1, m1) = report.intervals[0];
        let (lo2, hi2, m2) = report.intervals[1];
        assert_eq!((m1, m2), (4, 2));
        assert!((lo1 + 3.0).abs() < 0.06 && (hi1 + 2.0).abs() < 0.06);
        assert!((lo2 + 2.0).abs() < 0.06 && (hi2 - 6.0).abs() < 0.06);
    }

    #[test]
    fn coupled_bands_match_sampled_multiplicity() {
        for (a, b, c) in [(0.0, 0.5, 0.5), (1.0, 2.1, 1.2), (-0.3, 0.001, 0.0)] {
            let s = coupled_chain_pair(a, b, c);
            let bands = coupled_chain_bands(a, b, c);
            for &(lo, hi, mult) in &bands {
                for t in [0.2, 0.5, 0.8] {
                    let lam = lo + (hi - lo) * t;
                    match multiplicity_1d(&s, lam).unwrap() {
                        Mult::Count(m) => assert_eq!(m, mult, "abc=({a},{b},{c}) lam={lam}"),
                        Mult::Edge => panic!("unexpected edge at {lam}"),
                    }
                }
            }
            // strictly outside every band: nothing
            let top = bands.last().unwrap().1 + 0.5;
            assert_eq!(multiplicity_1d(&s, top).unwrap(), Mult::Count(0));
        }
        // Fully coincident branches make every interior circle root a double
        // root, indistinguishable from a band-edge tangency by root data.
        let degenerate = coupled_chain_pair(-0.3, 0.0, 0.0);
        assert_eq!(multiplicity_1d(&degenerate, -1.5).unwrap(), Mult::Edge);
    }

    #[test]
    fn band_witness_brackets_spectrum() {
        let s = coupled_chain_pair(0.4, 1.0, 0.3);
        let w = band_witness(&s, 720).unwrap();
        let split = Float::sqrt(1.0f64 * 1.0 + 0.09);
        // descending branches: upper band first
        assert!((w[0].0 - (0.4 - 2.0 + split)).abs() < 1e-4);
        assert!((w[0].1 - (0.4 + 2.0 + split)).abs() < 1e-4);
        assert!((w[1].0 - (0.4 - 2.0 - split)).abs() < 1e-4);
        assert!((w[1].1 - (0.4 + 2.0 - split)).abs() < 1e-4);
        assert!(spectrum_contains(&w, 0.4, 1e-6));
        assert!(!spectrum_contains(&w, 5.0, 1e-6));
    }
}
