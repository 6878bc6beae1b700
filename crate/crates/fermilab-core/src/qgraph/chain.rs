//! Ladder of unit edges: two parallel chains joined by rungs at the integers,
//! folded by the mirror that swaps the chains. The half graph is a single
//! chain with a dangling half-rung at every vertex; the rung through the
//! origin carries the defect potential.
//!
//! Fields on rail edges use the basis `c*cos(mu x) + d*sin(mu x)`, so `d` is
//! `u'(0)/mu`. Rung half-edges use `r*sin(mu y)` (odd class) measured from the
//! midpoint, `r*sin(nu y)` on the defect rung.

use alloc::vec::Vec;

use num_traits::Float;

use crate::num::bisect::scan_roots;
use crate::num::cmat::CMat;
use crate::qgraph::{Bc, SecularEval};
use crate::{C64, Error, Result};

/// Reduced dispersion parameter: on-shell quasimomentum satisfies
/// `z + 1/z = w`. `Bc::Dirichlet` is the odd (defect-carrying) class,
/// `Bc::Neumann` the even one.
pub fn chain_w(mu: f64, class: Bc) -> f64 {
    match class {
        Bc::Dirichlet => 3.0 * Float::cos(mu) + 1.0,
        Bc::Neumann => 3.0 * Float::cos(mu) - 1.0,
    }
}

/// Whether `mu` lies in a propagating band of the given symmetry class.
pub fn chain_in_band(mu: f64, class: Bc) -> bool {
    Float::abs(chain_w(mu, class)) <= 2.0
}

/// The band interval (in `mu`) containing `mu`, if any. Bands of the even
/// class are centered at even multiples of pi, odd-class bands at odd ones.
pub fn chain_band_interval(mu: f64, class: Bc) -> Option<(f64, f64)> {
    if !chain_in_band(mu, class) {
        return None;
    }
    let tau = 2.0 * core::f64::consts::PI;
    let half = match class {
        Bc::Neumann => Float::acos(-1.0 / 3.0),
        Bc::Dirichlet => core::f64::consts::PI - Float::acos(1.0 / 3.0),
    };
    let center = match class {
        Bc::Neumann => Float::round(mu / tau) * tau,
        Bc::Dirichlet => {
            let ell = Float::round((mu - core::f64::consts::PI) / tau);
            ell * tau + core::f64::consts::PI
        }
    };
    Some((center - half, center + half))
}

/// Vertex-matching system of the half ladder at spectral value `mu^2` and
/// Bloch multiplier `z`, acting on the coefficient vector
/// `[rung, rail_c, rail_d]`. Its determinant vanishes exactly on the
/// dispersion relation `z + 1/z = chain_w(mu, class)`.
pub fn chain_secular(mu: f64, z: C64, class: Bc) -> SecularEval {
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let (ch, sh) = (Float::cos(mu / 2.0), Float::sin(mu / 2.0));
    // Value and derivative of the rung basis function at the vertex end.
    let (a, b) = match class {
        Bc::Dirichlet => (sh, -mu * ch),
        Bc::Neumann => (ch, mu * sh),
    };
    let r = |x: f64| C64::new(x, 0.0);
    let matrix = CMat::from_rows(
        3,
        3,
        &[
            r(-a),
            z,
            r(0.0),
            r(-a),
            r(cm),
            r(sm),
            r(b),
            r(mu * sm),
            (z - cm) * mu,
        ],
    );
    let det = matrix.det();
    SecularEval {
        mu,
        k: Vec::new(),
        matrix,
        det,
        a,
        b,
        c: 0.0,
        d: 0.0,
    }
}

/// Factored determinant of [`chain_secular`]; agreement is a test invariant.
pub fn chain_det_closed(mu: f64, z: C64, class: Bc) -> C64 {
    let w = chain_w(mu, class);
    let quad = z * z - z * w + C64::new(1.0, 0.0);
    let front = match class {
        Bc::Dirichlet => mu * Float::sin(mu / 2.0),
        Bc::Neumann => mu * Float::cos(mu / 2.0),
    };
    quad * front
}

/// Decaying Bloch multiplier of the odd class: the root of `z + 1/z = w`
/// inside the unit disk, `w = 3 cos(mu) + 1`. Exists only off the odd-class
/// bands (`|w| > 2`); there the pair of roots is real with product 1.
pub fn chain_decay_root(mu: f64) -> Result<f64> {
    let w = chain_w(mu, Bc::Dirichlet);
    if Float::abs(w) <= 2.0 {
        return Err(Error::domain(
            "no decaying branch: mu lies in an odd-class band",
        ));
    }
    let z = Float::signum(w) * (Float::abs(w) - Float::sqrt(w * w - 4.0)) / 2.0;
    debug_assert!(Float::abs(z + 1.0 / z - w) <= 1e-12 * (1.0 + Float::abs(w)));
    Ok(z)
}

/// Right-hand side of the defect-rung flux condition `nu cot(nu/2) = T`.
pub fn chain_flux_target(mu: f64) -> Result<f64> {
    let z = chain_decay_root(mu)?;
    let sm = Float::sin(mu);
    if Float::abs(sm) <= 1e-6 {
        return Err(Error::domain("sin(mu) too small: flux target undefined"));
    }
    Ok(2.0 * mu * (z - Float::cos(mu)) / sm)
}

/// Defect frequency: the `branch`-th positive solution of
/// `nu cot(nu/2) = T` with `T` from [`chain_flux_target`], found on
/// `(0, 12]`. Solutions colliding with `mu` itself are skipped.
pub fn chain_defect_nu(mu: f64, branch: usize) -> Result<f64> {
    let t = chain_flux_target(mu)?;
    // Pole-free form: same zeros, no cotangent blowups between them.
    let h = |nu: f64| nu * Float::cos(nu / 2.0) - t * Float::sin(nu / 2.0);
    let roots: Vec<f64> = scan_roots(h, 1e-3, 12.0, 24_000, 1e-14)
        .into_iter()
        .filter(|&nu| Float::abs(nu - mu) > 1e-6)
        .collect();
    let mut nu = *roots
        .get(branch)
        .ok_or_else(|| Error::domain("requested defect branch not found below nu = 12"))?;
    // Newton polish; h is smooth and simple-rooted here.
    for _ in 0..12 {
        let hv = h(nu);
        let hd = Float::cos(nu / 2.0) - (nu / 2.0) * Float::sin(nu / 2.0)
            - (t / 2.0) * Float::cos(nu / 2.0);
        if hd == 0.0 {
            break;
        }
        let step = hv / hd;
        nu -= step;
        if Float::abs(step) < 1e-15 * (1.0 + Float::abs(nu)) {
            break;
        }
    }
    let sn = Float::sin(nu / 2.0);
    if Float::abs(sn) < 1e-9 {
        return Err(Error::convergence("defect root landed on a cotangent pole"));
    }
    let resid = Float::abs(nu * Float::cos(nu / 2.0) / sn - t);
    if resid > 1e-12 * (1.0 + Float::abs(t)) {
        return Err(Error::convergence("defect root did not polish to tolerance"));
    }
    Ok(nu)
}

/// Defect potential strength for the first branch: `V0 = mu^2 - nu^2`.
pub fn chain_defect_v0(mu: f64) -> Result<f64> {
    let nu = chain_defect_nu(mu, 0)?;
    Ok(mu * mu - nu * nu)
}

/// Coefficients of one rail cell. Cell `g >= 0` spans vertices `g..g+1`;
/// the left half of the ladder is the mirror image. `rung` multiplies
/// `sin(mu y)` on the half-rung at vertex `g` (`sin(nu y)` for `g = 0`).
#[derive(Debug, Clone, Copy)]
pub struct ChainCell {
    pub g: i64,
    pub c: f64,
    pub d: f64,
    pub rung: f64,
}

/// A defect bound state on the folded ladder, with every vertex condition
/// rechecked numerically on both halves.
#[derive(Debug, Clone)]
pub struct ChainBoundState {
    pub mu: f64,
    /// Energy `mu^2`; embedded when the even class still propagates there.
    pub lambda: f64,
    pub z: f64,
    pub nu: f64,
    pub v0: f64,
    pub cells: Vec<ChainCell>,
    /// `(vertex index, worst matching residual there)`, both halves.
    pub per_vertex: Vec<(i64, f64)>,
    pub max_vertex_residual: f64,
    /// Flux mismatch at the defect rung alone; the quantity the defect
    /// frequency was tuned to kill.
    pub defect_flux_residual: f64,
    /// Measured cell-to-cell amplitude ratio; equals `z` for a true solution.
    pub decay_ratio: f64,
    pub embedded: bool,
    pub band_interval: Option<(f64, f64)>,
}

/// Builds the bound state at the first defect branch and rechecks it.
pub fn chain_bound_state(mu: f64, cells: usize) -> Result<ChainBoundState> {
    let nu = chain_defect_nu(mu, 0)?;
    build_chain_state(mu, nu, cells)
}

/// Same construction with a caller-supplied defect frequency. Intended for
/// negative controls: a detuned `nu` must blow up the defect flux residual.
pub fn chain_bound_state_with_nu(mu: f64, nu: f64, cells: usize) -> Result<ChainBoundState> {
    build_chain_state(mu, nu, cells)
}

fn build_chain_state(mu: f64, nu: f64, cells: usize) -> Result<ChainBoundState> {
    if cells < 2 {
        return Err(Error::domain("need at least two cells per side"));
    }
    let z = chain_decay_root(mu)?;
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let (ch, sh) = (Float::cos(mu / 2.0), Float::sin(mu / 2.0));
    if Float::abs(sm) <= 1e-6 || Float::abs(sh) <= 1e-6 {
        return Err(Error::domain("mu too close to a rail or rung resonance"));
    }
    let (cnh, snh) = (Float::cos(nu / 2.0), Float::sin(nu / 2.0));
    if Float::abs(snh) <= 1e-6 {
        return Err(Error::domain("nu too close to a defect-rung resonance"));
    }

    // Tail cell shape, amplitude 1 at the defect vertex.
    let c1 = 1.0;
    let d1 = (z - cm) / sm;
    let rung_amp = 1.0 / sh;
    let defect_amp = 1.0 / snh;

    // Rail field per unit cell: value/derivative at both ends.
    let u0 = c1;
    let du0 = mu * d1;
    let u1 = c1 * cm + d1 * sm;
    let du1 = mu * (-c1 * sm + d1 * cm);

    let n = cells as i64;
    let mut cells_out = Vec::with_capacity(cells + 1);
    for g in 0..=n {
        let amp = Float::powi(z, g as i32);
        cells_out.push(ChainCell {
            g,
            c: c1 * amp,
            d: d1 * amp,
            rung: if g == 0 { defect_amp } else { rung_amp * amp },
        });
    }

    let mut per_vertex = Vec::new();
    let mut max_res: f64 = 0.0;
    // Ordinary vertices, right half then mirrored left half. Left-edge fields
    // are reflections x -> 1-x, which flips the sign of every derivative.
    for g in 1..n {
        let zg = Float::powi(z, g as i32);
        let zgm = Float::powi(z, g as i32 - 1);
        let rail = Float::abs(u1 * zgm - u0 * zg);
        let rung = Float::abs(rung_amp * sh * zg - u0 * zg);
        let flux = Float::abs(du0 * zg - du1 * zgm - rung_amp * mu * ch * zg);
        let worst = Float::max(rail, Float::max(rung, flux));
        per_vertex.push((g, worst));
        max_res = Float::max(max_res, worst);

        let rail_l = Float::abs(u0 * zg - u1 * zgm);
        let flux_l = Float::abs(-du1 * zgm + du0 * zg - rung_amp * mu * ch * zg);
        let worst_l = Float::max(rail_l, Float::max(rung, flux_l));
        per_vertex.push((-g, worst_l));
        max_res = Float::max(max_res, worst_l);
    }
    // Defect vertex: both rail edges leave it outward; the nu-rung closes it.
    let defect_val = Float::abs(defect_amp * snh - u0);
    let defect_flux = Float::abs(2.0 * du0 - defect_amp * nu * cnh);
    let worst0 = Float::max(defect_val, defect_flux);
    per_vertex.push((0, worst0));
    max_res = Float::max(max_res, worst0);

    let decay_ratio = cells_out[2].c / cells_out[1].c;
    Ok(ChainBoundState {
        mu,
        lambda: mu * mu,
        z,
        nu,
        v0: mu * mu - nu * nu,
        cells: cells_out,
        per_vertex,
        max_vertex_residual: max_res,
        defect_flux_residual: defect_flux,
        decay_ratio,
        embedded: chain_in_band(mu, Bc::Neumann),
        band_interval: chain_band_interval(mu, Bc::Neumann),
    })
}

/// Rail field of `state` on cell `g >= 0` at local coordinate `x in [0,1]`.
/// By mirror symmetry this is also the field on cell `-g-1` at `1-x`.
pub fn chain_rail_value(state: &ChainBoundState, g: usize, x: f64) -> f64 {
    let amp = Float::powi(state.z, g as i32);
    let cm = Float::cos(state.mu * x);
    let sm = Float::sin(state.mu * x);
    let d1 = (state.z - Float::cos(state.mu)) / Float::sin(state.mu);
    amp * (cm + d1 * sm)
}
