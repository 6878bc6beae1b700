//! Log-linear decay-rate estimation from shell amplitudes of a lattice field.

use alloc::vec::Vec;

use num_traits::Float;

use crate::{Error, Result};

/// Exponential decay fit of shell maxima `amp(r) ~ C exp(-alpha r)`.
///
/// `alpha` is fit over every usable shell, `alpha_tail` over the outer half
/// only (the tail is past the preasymptotic region, so it is the better rate
/// estimate on small boxes). `r2` is the coefficient of determination of the
/// all-shell fit.
#[derive(Debug, Clone)]
pub struct DecayFit {
    pub alpha: f64,
    pub alpha_tail: f64,
    pub r2: f64,
    pub shells: Vec<(f64, f64)>,
}

const AMPLITUDE_FLOOR_REL: f64 = 1e-14;

/// `shells`: (radius, max amplitude on shell). Shells at or below the
/// relative floor are excluded as rounding noise; at least 3 must survive.
pub fn fit_exponential_decay(shells: &[(f64, f64)]) -> Result<DecayFit> {
    let peak = shells.iter().map(|&(_, a)| a).fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::domain("decay fit: field is identically zero"));
    }
    let floor = AMPLITUDE_FLOOR_REL * peak;
    let usable: Vec<(f64, f64)> =
        shells.iter().copied().filter(|&(_, a)| a > floor).collect();
    if usable.len() < 3 {
        return Err(Error::domain("decay fit: fewer than 3 shells above noise floor"));
    }
    let pts: Vec<(f64, f64)> =
        usable.iter().map(|&(r, a)| (r, Float::ln(a))).collect();
    let (slope, _, r2) = linfit(&pts);
    let tail_start = usable.len() / 2;
    let tail = if usable.len() - tail_start >= 3 { &pts[tail_start..] } else { &pts[..] };
    let (slope_tail, _, _) = linfit(tail);
    Ok(DecayFit { alpha: -slope, alpha_tail: -slope_tail, r2, shells: usable })
}

/// Least squares line through `(x, y)` points: (slope, intercept, r2).
pub fn linfit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (0.0, my, 0.0);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn recovers_exact_exponential() {
        let alpha = 0.7;
        let shells: Vec<(f64, f64)> =
            (0..20).map(|r| (r as f64, 3.0 * (-alpha * r as f64).exp())).collect();
        let fit = fit_exponential_decay(&shells).unwrap();
        assert!((fit.alpha - alpha).abs() < 1e-12);
        assert!((fit.alpha_tail - alpha).abs() < 1e-12);
        assert!(fit.r2 > 1.0 - 1e-12);
    }

    #[test]
    fn floor_shells_are_dropped() {
        let mut shells: Vec<(f64, f64)> =
            (0..10).map(|r| (r as f64, (-2.0 * r as f64).exp())).collect();
        shells.push((10.0, 1e-30));
        shells.push((11.0, 1e-30));
        let fit = fit_exponential_decay(&shells).unwrap();
        assert_eq!(fit.shells.len(), 10);
        assert!((fit.alpha - 2.0).abs() < 1e-10);
    }

    #[test]
    fn too_few_shells_is_domain_error() {
        assert!(fit_exponential_decay(&[(0.0, 1.0), (1.0, 0.5)]).is_err());
        assert!(fit_exponential_decay(&[]).is_err());
    }

    #[test]
    fn tail_rate_ignores_slow_head() {
        // Head decays at 0.2, tail at 1.0; the tail estimate should track 1.0.
        let mut shells = Vec::new();
        for r in 0..6 {
            shells.push((r as f64, (-0.2 * r as f64).exp()));
        }
        let head_end = (-0.2 * 5.0f64).exp();
        for r in 6..14 {
            shells.push((r as f64, head_end * (-(r - 5) as f64).exp()));
        }
        let fit = fit_exponential_decay(&shells).unwrap();
        assert!((fit.alpha_tail - 1.0).abs() < 0.05);
        assert!(fit.alpha < fit.alpha_tail);
    }
}
