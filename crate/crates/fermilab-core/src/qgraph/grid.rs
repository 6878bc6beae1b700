//! Doubled square grid: two copies of the planar unit-edge grid joined by a
//! rung at every vertex, folded by the layer-swap mirror. The half graph is
//! the grid itself with a dangling half edge per vertex; the half edge at the
//! origin carries the defect potential.
//!
//! Horizontal edges use the basis `C cos(mu x) + D sin(mu x)/mu`, so `D` is
//! the derivative at the left vertex. A dangling half edge has one free
//! coefficient `K` multiplying the basis that already satisfies the mirror
//! condition at its free end: `cos(mu x)` for the even class (`Bc::Neumann`),
//! `sin(mu x)/mu` for the odd one (`Bc::Dirichlet`). The defect half edge
//! adds the inhomogeneous response `f_nu(x)/(nu^2 - mu^2)` in the same class.

use alloc::vec::Vec;

use num_traits::Float;

use crate::lattice::LatticeField;
use crate::num::bisect::scan_roots;
use crate::num::cmat::CMat;
use crate::num::fit::DecayFit;
use crate::num::quad::{inverse_transform_2d, pairwise_sum, torus_grid, TAU};
use crate::qgraph::{Bc, SecularEval};
use crate::{C64, Error, Result};

/// Value and derivative at `x = 1/2` of the unit-coefficient half-edge basis
/// at frequency `freq`: `cos(freq x)` for `Bc::Neumann`, `sin(freq x)/freq`
/// for `Bc::Dirichlet`.
pub fn bc_constants(bc: Bc, freq: f64) -> (f64, f64) {
    let half = freq / 2.0;
    match bc {
        Bc::Neumann => (Float::cos(half), -freq * Float::sin(half)),
        Bc::Dirichlet => (Float::sin(half) / freq, Float::cos(half)),
    }
}

/// Lattice denominator of the given symmetry class at quasimomentum `k`.
/// Its zero set in `k` is the Floquet variety of the class at energy `mu^2`.
pub fn grid_denominator(bc: Bc, mu: f64, k1: f64, k2: f64) -> f64 {
    let sig = match bc {
        Bc::Neumann => -1.0,
        Bc::Dirichlet => 1.0,
    };
    5.0 * Float::cos(mu) + sig - 2.0 * (Float::cos(k1) + Float::cos(k2))
}

/// Whether `mu` lies in a propagating band of the class.
pub fn grid_in_band(bc: Bc, mu: f64) -> bool {
    let c = Float::cos(mu);
    match bc {
        Bc::Neumann => c >= -0.6,
        Bc::Dirichlet => c <= 0.6,
    }
}

/// Half-width of every band interval in `mu`.
pub fn grid_band_edge() -> f64 {
    Float::acos(-0.6)
}

/// The band interval (in `mu > 0`) containing `mu`, if any. Even-class bands
/// are centered at even multiples of pi, odd-class bands at odd ones.
pub fn grid_band_interval(bc: Bc, mu: f64) -> Option<(f64, f64)> {
    if !grid_in_band(bc, mu) {
        return None;
    }
    let half = grid_band_edge();
    let pi = core::f64::consts::PI;
    let center = match bc {
        Bc::Neumann => Float::round(mu / TAU) * TAU,
        Bc::Dirichlet => Float::round((mu - pi) / TAU) * TAU + pi,
    };
    Some((center - half, center + half))
}

/// Companion class: the one whose bands witness the embedding.
pub fn companion(bc: Bc) -> Bc {
    match bc {
        Bc::Neumann => Bc::Dirichlet,
        Bc::Dirichlet => Bc::Neumann,
    }
}

/// Vertex-matching system at quasimomentum `(k1, k2)` acting on
/// `[K, C1, D1, C2, D2]`: the dangling coefficient and the two horizontal
/// edge pairs leaving the vertex. `nu` only enters the right-hand side
/// (see [`grid_defect_rhs`]); the matrix itself is defect-free.
pub fn grid_secular(bc: Bc, mu: f64, nu: f64, k1: f64, k2: f64) -> SecularEval {
    let (a, b) = bc_constants(bc, mu);
    let (c, d) = bc_constants(bc, nu);
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let z1 = C64::new(Float::cos(k1), -Float::sin(k1));
    let z2 = C64::new(Float::cos(k2), -Float::sin(k2));
    let r = |x: f64| C64::new(x, 0.0);
    let o = C64::new(0.0, 0.0);
    let matrix = CMat::from_rows(
        5,
        5,
        &[
            r(a), r(-1.0), o, o, o,
            r(a), -z1 * cm, -z1 * (sm / mu), o, o,
            r(a), o, o, r(-1.0), o,
            r(a), o, o, -z2 * cm, -z2 * (sm / mu),
            r(b), -z1 * (mu * sm), z1 * cm - 1.0, -z2 * (mu * sm), z2 * cm - 1.0,
        ],
    );
    let det = matrix.det();
    SecularEval {
        mu,
        k: alloc::vec![k1, k2],
        matrix,
        det,
        a,
        b,
        c,
        d,
    }
}

/// Right-hand side carrying the defect edge's inhomogeneous response.
pub fn grid_defect_rhs(bc: Bc, mu: f64, nu: f64) -> [C64; 5] {
    let (c, d) = bc_constants(bc, nu);
    let s = -1.0 / (nu * nu - mu * mu);
    [
        C64::new(c * s, 0.0),
        C64::new(c * s, 0.0),
        C64::new(c * s, 0.0),
        C64::new(c * s, 0.0),
        C64::new(d * s, 0.0),
    ]
}

/// Factored determinant of [`grid_secular`]; agreement is a test invariant.
pub fn grid_det_closed(bc: Bc, mu: f64, k1: f64, k2: f64) -> C64 {
    let (a, b) = bc_constants(bc, mu);
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let phase = C64::new(Float::cos(k1 + k2), -Float::sin(k1 + k2));
    let bracket =
        4.0 * a * cm + b * sm / mu - 2.0 * a * (Float::cos(k1) + Float::cos(k2));
    phase * (sm / mu) * bracket
}

/// Mean of `1/denominator` over the `n x n` quasimomentum grid. Defined only
/// off the class's bands, where the denominator is sign-definite.
pub fn gap_inverse_mean(bc: Bc, mu: f64, n: usize) -> Result<f64> {
    if grid_in_band(bc, mu) {
        return Err(Error::domain(
            "inverse denominator mean requested inside a band",
        ));
    }
    let ks = torus_grid(n);
    let mut rows = Vec::with_capacity(n);
    for &k1 in &ks {
        let row: Vec<f64> = ks
            .iter()
            .map(|&k2| 1.0 / grid_denominator(bc, mu, k1, k2))
            .collect();
        rows.push(pairwise_sum(&row));
    }
    Ok(pairwise_sum(&rows) / (n * n) as f64)
}

/// Odd-class lattice Green's value at the origin, as a function of `mu` in an
/// odd-class gap: the torus average of `1/denominator`. Checked by doubling
/// the grid; the trapezoid rule converges geometrically here.
pub fn r_integral(mu: f64, quad_n: usize) -> Result<f64> {
    if quad_n < 8 {
        return Err(Error::domain("quadrature grid too small"));
    }
    let coarse = gap_inverse_mean(Bc::Dirichlet, mu, quad_n)?;
    let fine = gap_inverse_mean(Bc::Dirichlet, mu, 2 * quad_n)?;
    if Float::abs(fine - coarse) > 1e-9 * Float::max(1.0, Float::abs(fine)) {
        return Err(Error::convergence(
            "lattice Green's value did not settle under grid doubling",
        ));
    }
    Ok(coarse)
}

/// Right-hand side of the defect flux condition: `nu cot(nu/2) = T` for the
/// odd class, `nu tan(nu/2) = T` for the even one.
pub fn grid_flux_target(bc: Bc, mu: f64, quad_n: usize) -> Result<f64> {
    let sm = Float::sin(mu);
    if Float::abs(sm) <= 1e-6 {
        return Err(Error::domain("sin(mu) too small: flux target undefined"));
    }
    let cm = Float::cos(mu);
    match bc {
        Bc::Dirichlet => {
            let r = r_integral(mu, quad_n)?;
            Ok(mu / sm * (1.0 + cm - 1.0 / r))
        }
        Bc::Neumann => {
            // The even-class inverse mean is minus the odd-class one a half
            // period away; both signs cancel in the final expression.
            let r = r_integral(mu + core::f64::consts::PI, quad_n)?;
            Ok(mu / sm * (1.0 - cm - 1.0 / r))
        }
    }
}

/// Defect frequency: the `branch`-th positive solution of the flux condition
/// on `(0, 12]`, polished by Newton. Solutions colliding with `mu` are
/// skipped; a root within 1e-8 of `mu` would make the defect trivial.
pub fn grid_nu_root(bc: Bc, mu: f64, quad_n: usize, branch: usize) -> Result<f64> {
    let t = grid_flux_target(bc, mu, quad_n)?;
    let h = |nu: f64| match bc {
        Bc::Dirichlet => nu * Float::cos(nu / 2.0) - t * Float::sin(nu / 2.0),
        Bc::Neumann => nu * Float::sin(nu / 2.0) - t * Float::cos(nu / 2.0),
    };
    let roots: Vec<f64> = scan_roots(&h, 1e-3, 12.0, 24_000, 1e-14)
        .into_iter()
        .filter(|&nu| Float::abs(nu - mu) > 1e-6)
        .collect();
    let mut nu = *roots
        .get(branch)
        .ok_or_else(|| Error::domain("requested defect branch not found below nu = 12"))?;
    for _ in 0..12 {
        let hv = h(nu);
        let hd = match bc {
            Bc::Dirichlet => {
                Float::cos(nu / 2.0) - (nu / 2.0) * Float::sin(nu / 2.0)
                    - (t / 2.0) * Float::cos(nu / 2.0)
            }
            Bc::Neumann => {
                Float::sin(nu / 2.0) + (nu / 2.0) * Float::cos(nu / 2.0)
                    + (t / 2.0) * Float::sin(nu / 2.0)
            }
        };
        if hd == 0.0 {
            break;
        }
        let step = hv / hd;
        nu -= step;
        if Float::abs(step) < 1e-15 * (1.0 + Float::abs(nu)) {
            break;
        }
    }
    if Float::abs(nu - mu) < 1e-8 {
        return Err(Error::domain("defect frequency degenerate with mu"));
    }
    let (half_trig, resid) = match bc {
        Bc::Dirichlet => {
            let s = Float::sin(nu / 2.0);
            (s, Float::abs(nu * Float::cos(nu / 2.0) / s - t))
        }
        Bc::Neumann => {
            let c = Float::cos(nu / 2.0);
            (c, Float::abs(nu * Float::sin(nu / 2.0) / c - t))
        }
    };
    if Float::abs(half_trig) < 1e-9 {
        return Err(Error::convergence("defect root landed on a trigonometric pole"));
    }
    if resid > 1e-12 * (1.0 + Float::abs(t)) {
        return Err(Error::convergence("defect root did not polish to tolerance"));
    }
    Ok(nu)
}

/// Torus average of the dangling coefficient at the defect vertex, in closed
/// form through [`r_integral`]. The defect frequency is its zero.
pub fn grid_defect_coupling(bc: Bc, mu: f64, nu: f64, quad_n: usize) -> Result<f64> {
    let gap = nu * nu - mu * mu;
    if Float::abs(gap) < 1e-9 {
        return Err(Error::domain("defect frequency degenerate with mu"));
    }
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let (cn, sn) = (Float::cos(nu / 2.0), Float::sin(nu / 2.0));
    match bc {
        Bc::Dirichlet => {
            let sh = Float::sin(mu / 2.0);
            if Float::abs(sh) < 1e-9 {
                return Err(Error::domain("odd-class basis degenerates at this mu"));
            }
            let r = r_integral(mu, quad_n)?;
            let pref = -mu / (gap * sh);
            Ok(pref * ((cn / mu) * sm * r + (sn / nu) * (1.0 - (1.0 + cm) * r)))
        }
        Bc::Neumann => {
            let ch = Float::cos(mu / 2.0);
            if Float::abs(ch) < 1e-9 {
                return Err(Error::domain("even-class basis degenerates at this mu"));
            }
            let r = r_integral(mu + core::f64::consts::PI, quad_n)?;
            let pref = -1.0 / (gap * ch);
            Ok(pref * ((nu / mu) * sn * sm * r + cn * (1.0 - (1.0 - cm) * r)))
        }
    }
}

/// Pointwise dangling coefficient at quasimomentum `(k1, k2)`, closed form.
/// Undefined on the Floquet variety of the class.
pub fn grid_khat(bc: Bc, mu: f64, nu: f64, k1: f64, k2: f64) -> Result<f64> {
    let gap = nu * nu - mu * mu;
    if Float::abs(gap) < 1e-9 {
        return Err(Error::domain("defect frequency degenerate with mu"));
    }
    let den = grid_denominator(bc, mu, k1, k2);
    if Float::abs(den) < 1e-10 {
        return Err(Error::domain("quasimomentum lies on the singular surface"));
    }
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let (cn, sn) = (Float::cos(nu / 2.0), Float::sin(nu / 2.0));
    match bc {
        Bc::Dirichlet => {
            let sh = Float::sin(mu / 2.0);
            if Float::abs(sh) < 1e-9 {
                return Err(Error::domain("odd-class basis degenerates at this mu"));
            }
            let pref = -mu / (gap * sh);
            Ok(pref * ((cn / mu) * sm / den + (sn / nu) * (1.0 - (1.0 + cm) / den)))
        }
        Bc::Neumann => {
            let ch = Float::cos(mu / 2.0);
            if Float::abs(ch) < 1e-9 {
                return Err(Error::domain("even-class basis degenerates at this mu"));
            }
            let pref = -1.0 / (gap * ch);
            Ok(pref * (-(nu / mu) * sn * sm / den + cn * (1.0 + (1.0 - cm) / den)))
        }
    }
}

/// Same coefficient straight from the linear system, for cross-checking the
/// closed form.
pub fn grid_khat_solved(bc: Bc, mu: f64, nu: f64, k1: f64, k2: f64) -> Result<C64> {
    let eval = grid_secular(bc, mu, nu, k1, k2);
    let rhs = grid_defect_rhs(bc, mu, nu);
    let sol = eval.matrix.solve(&rhs)?;
    Ok(sol[0])
}

/// A defect bound state on the folded doubled grid.
#[derive(Debug, Clone)]
pub struct GridBoundState {
    pub bc: Bc,
    pub mu: f64,
    /// Energy `mu^2`; embedded when the companion class propagates there.
    pub lambda: f64,
    pub nu: f64,
    pub v0: f64,
    pub quad_n: usize,
    /// Dangling-edge coefficients per vertex.
    pub k_field: LatticeField,
    /// Horizontal edge coefficients per vertex and direction.
    pub c1: LatticeField,
    pub d1: LatticeField,
    pub c2: LatticeField,
    pub d2: LatticeField,
    /// Largest imaginary part across all coefficient fields, relative to the
    /// peak; the synthesis is real up to quadrature noise.
    pub imag_peak_rel: f64,
    pub per_vertex: Vec<((i64, i64), f64)>,
    pub max_vertex_residual: f64,
    /// Amplitude of the stray homogeneous term on the defect edge. Zero at a
    /// true defect frequency; the sharpest detector of a detuned `nu`.
    pub defect_ode_residual: f64,
    /// Worst of the vertex and defect-edge mismatches.
    pub residual: f64,
    pub decay: DecayFit,
    /// Decay rate of the nearest Bloch branch of the class, the expected
    /// asymptotic rate of the tail.
    pub alpha_predicted: f64,
    /// `(radius, numeric support radius)` on nested sub-boxes.
    pub support: Vec<(i64, i64)>,
    pub tail_grows: bool,
    pub embedded: bool,
    pub band_interval: Option<(f64, f64)>,
}

/// Builds the bound state at the first defect branch and rechecks every
/// vertex condition in the box.
pub fn grid_bound_state(
    bc: Bc,
    mu: f64,
    half_width: i64,
    quad_n: usize,
) -> Result<GridBoundState> {
    let nu = grid_nu_root(bc, mu, quad_n, 0)?;
    build_grid_state(bc, mu, nu, half_width, quad_n)
}

/// Same construction with a caller-supplied defect frequency, for negative
/// controls.
pub fn grid_bound_state_with_nu(
    bc: Bc,
    mu: f64,
    nu: f64,
    half_width: i64,
    quad_n: usize,
) -> Result<GridBoundState> {
    build_grid_state(bc, mu, nu, half_width, quad_n)
}

fn build_grid_state(
    bc: Bc,
    mu: f64,
    nu: f64,
    half_width: i64,
    quad_n: usize,
) -> Result<GridBoundState> {
    if half_width < 2 {
        return Err(Error::domain("synthesis box too small"));
    }
    if quad_n < 8 {
        return Err(Error::domain("quadrature grid too small"));
    }
    if grid_in_band(bc, mu) {
        return Err(Error::domain(
            "mu lies in a band of the defect class; no decaying state",
        ));
    }
    let gap = nu * nu - mu * mu;
    if Float::abs(gap) < 1e-9 {
        return Err(Error::domain("defect frequency degenerate with mu"));
    }

    let n = quad_n;
    let ks = torus_grid(n);
    let rhs = grid_defect_rhs(bc, mu, nu);
    let mut coeffs: [Vec<C64>; 5] = [
        Vec::with_capacity(n * n),
        Vec::with_capacity(n * n),
        Vec::with_capacity(n * n),
        Vec::with_capacity(n * n),
        Vec::with_capacity(n * n),
    ];
    for &k1 in &ks {
        for &k2 in &ks {
            let eval = grid_secular(bc, mu, nu, k1, k2);
            let sol = eval.matrix.solve(&rhs)?;
            for (store, value) in coeffs.iter_mut().zip(sol.iter()) {
                store.push(*value);
            }
        }
    }

    // One site list in x1-major order; the transform caches per-x1 sums.
    let side = 2 * half_width + 1;
    let mut sites = Vec::with_capacity((side * side) as usize);
    for x1 in -half_width..=half_width {
        for x2 in -half_width..=half_width {
            sites.push((x1, x2));
        }
    }
    let mut fields = Vec::with_capacity(5);
    let mut peak = 0.0f64;
    let mut imag_peak = 0.0f64;
    for store in coeffs.iter() {
        let values = inverse_transform_2d(store, n, &sites);
        let mut field = LatticeField::zeros(2, 1, half_width);
        for (&(x1, x2), v) in sites.iter().zip(values.iter()) {
            field.set(&[x1, x2], 0, *v);
            peak = Float::max(peak, v.norm());
            imag_peak = Float::max(imag_peak, Float::abs(v.im));
        }
        fields.push(field);
    }
    if peak == 0.0 {
        return Err(Error::convergence("synthesized field vanished"));
    }
    let imag_peak_rel = imag_peak / peak;
    if imag_peak_rel > 1e-12 {
        return Err(Error::convergence(
            "synthesized field has a non-negligible imaginary part",
        ));
    }
    let mut it = fields.into_iter();
    let k_field = it.next().unwrap();
    let c1 = it.next().unwrap();
    let d1 = it.next().unwrap();
    let c2 = it.next().unwrap();
    let d2 = it.next().unwrap();

    // Vertex recheck on the interior: continuity of the dangling edge against
    // all four horizontal edge ends, plus Kirchhoff flux.
    let (a, b) = bc_constants(bc, mu);
    let (cdef, ddef) = bc_constants(bc, nu);
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let re = |f: &LatticeField, x1: i64, x2: i64| f.get(&[x1, x2], 0).re;
    let mut per_vertex = Vec::new();
    let mut max_res = 0.0f64;
    for g1 in -(half_width - 1)..=(half_width - 1) {
        for g2 in -(half_width - 1)..=(half_width - 1) {
            let at_defect = g1 == 0 && g2 == 0;
            let k = re(&k_field, g1, g2);
            let mut uk = k * a;
            let mut duk = k * b;
            if at_defect {
                uk += cdef / gap;
                duk += ddef / gap;
            }
            let u10 = re(&c1, g1, g2);
            let du10 = re(&d1, g1, g2);
            let u20 = re(&c2, g1, g2);
            let du20 = re(&d2, g1, g2);
            let u11 = re(&c1, g1 - 1, g2) * cm + re(&d1, g1 - 1, g2) * sm / mu;
            let du11 = -re(&c1, g1 - 1, g2) * mu * sm + re(&d1, g1 - 1, g2) * cm;
            let u21 = re(&c2, g1, g2 - 1) * cm + re(&d2, g1, g2 - 1) * sm / mu;
            let du21 = -re(&c2, g1, g2 - 1) * mu * sm + re(&d2, g1, g2 - 1) * cm;
            let worst = Float::max(
                Float::max(
                    Float::max(Float::abs(uk - u10), Float::abs(uk - u11)),
                    Float::max(Float::abs(uk - u20), Float::abs(uk - u21)),
                ),
                Float::abs(duk - du10 - du20 + du11 + du21),
            );
            per_vertex.push(((g1, g2), worst));
            max_res = Float::max(max_res, worst);
        }
    }

    // The defect edge solves its own ODE only if no mu-basis remainder leaks
    // onto it; `K(0,0)` times the basis amplitude measures the leak.
    let basis_amp = match bc {
        Bc::Dirichlet => 1.0 / mu,
        Bc::Neumann => 1.0,
    };
    let v0 = mu * mu - nu * nu;
    let defect_ode_residual = Float::abs(v0) * Float::abs(re(&k_field, 0, 0)) * basis_amp;

    let decay = crate::greens::fit_decay(&k_field)?;
    let w0 = 5.0 * cm
        + match bc {
            Bc::Dirichlet => 1.0,
            Bc::Neumann => -1.0,
        };
    let wmin = Float::abs(w0) - 2.0;
    let alpha_predicted = if wmin > 2.0 {
        Float::ln((wmin + Float::sqrt(wmin * wmin - 4.0)) / 2.0)
    } else {
        0.0
    };

    let shells = k_field.shell_maxima();
    let support_at = |radius: i64| -> i64 {
        shells
            .iter()
            .filter(|&&(r, _)| (r as i64) <= radius)
            .rev()
            .find(|&&(_, amp)| amp > 1e-13)
            .map(|&(r, _)| r as i64)
            .unwrap_or(-1)
    };
    let radii = [
        Float::max(2.0, Float::floor(half_width as f64 / 3.0)) as i64,
        Float::max(3.0, Float::floor(2.0 * half_width as f64 / 3.0)) as i64,
        half_width,
    ];
    let support: Vec<(i64, i64)> = radii.iter().map(|&r| (r, support_at(r))).collect();
    let tail_grows = support.windows(2).all(|w| w[1].1 > w[0].1);

    let comp = companion(bc);
    Ok(GridBoundState {
        bc,
        mu,
        lambda: mu * mu,
        nu,
        v0,
        quad_n,
        k_field,
        c1,
        d1,
        c2,
        d2,
        imag_peak_rel,
        per_vertex,
        max_vertex_residual: max_res,
        defect_ode_residual,
        residual: Float::max(max_res, defect_ode_residual),
        decay,
        alpha_predicted,
        support,
        tail_grows,
        embedded: grid_in_band(comp, mu),
        band_interval: grid_band_interval(comp, mu),
    })
}

/// Rechecks every interior vertex with the rungs treated as full edges of
/// the doubled graph: coordinate `y` runs over `[-1/2, 1/2]` from the
/// midpoint, and the top-layer field is `cos(f y)` (even class) or
/// `sin(f y)/f` (odd class) times the stored coefficient. The bottom layer is
/// the mirror image, so its conditions coincide up to the class sign.
/// Agreement with `max_vertex_residual` confirms the half-edge reduction and
/// its sign conventions.
pub fn lifted_vertex_residual(state: &GridBoundState) -> f64 {
    let (mu, nu) = (state.mu, state.nu);
    let gap = nu * nu - mu * mu;
    let rung_val = |f: f64, coeff: f64| match state.bc {
        Bc::Neumann => coeff * Float::cos(f * 0.5),
        Bc::Dirichlet => coeff * Float::sin(f * 0.5) / f,
    };
    // Derivative away from the top vertex is -(d/dy) at y = 1/2.
    let rung_out = |f: f64, coeff: f64| match state.bc {
        Bc::Neumann => coeff * f * Float::sin(f * 0.5),
        Bc::Dirichlet => -coeff * Float::cos(f * 0.5),
    };
    let (cm, sm) = (Float::cos(mu), Float::sin(mu));
    let b = state.k_field.half_width();
    let re = |f: &LatticeField, x1: i64, x2: i64| f.get(&[x1, x2], 0).re;
    let mut worst = 0.0f64;
    for g1 in -(b - 1)..=(b - 1) {
        for g2 in -(b - 1)..=(b - 1) {
            let at_defect = g1 == 0 && g2 == 0;
            let k = re(&state.k_field, g1, g2);
            let mut uk = rung_val(mu, k);
            let mut duk = -rung_out(mu, k);
            if at_defect {
                uk += rung_val(nu, 1.0 / gap);
                duk -= rung_out(nu, 1.0 / gap);
            }
            let u10 = re(&state.c1, g1, g2);
            let du10 = re(&state.d1, g1, g2);
            let u20 = re(&state.c2, g1, g2);
            let du20 = re(&state.d2, g1, g2);
            let u11 = re(&state.c1, g1 - 1, g2) * cm + re(&state.d1, g1 - 1, g2) * sm / mu;
            let du11 = -re(&state.c1, g1 - 1, g2) * mu * sm + re(&state.d1, g1 - 1, g2) * cm;
            let u21 = re(&state.c2, g1, g2 - 1) * cm + re(&state.d2, g1, g2 - 1) * sm / mu;
            let du21 = -re(&state.c2, g1, g2 - 1) * mu * sm + re(&state.d2, g1, g2 - 1) * cm;
            let here = Float::max(
                Float::max(
                    Float::max(Float::abs(uk - u10), Float::abs(uk - u11)),
                    Float::max(Float::abs(uk - u20), Float::abs(uk - u21)),
                ),
                Float::abs(duk - du10 - du20 + du11 + du21),
            );
            worst = Float::max(worst, here);
        }
    }
    worst
}
