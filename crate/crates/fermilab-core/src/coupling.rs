//! Coupled stacks of identical lattice operators: `m` layers tied together by
//! a Hermitian coefficient matrix K acting through a bounded operator L, the
//! unitary that block-diagonalizes the stack, and the construction that lifts
//! a single-layer defect bound state to an eigenvalue embedded in the coupled
//! operator's continuous spectrum.

use alloc::vec::Vec;

use num_traits::Float;

use crate::dispersion::band_witness;
use crate::lattice::{eigen_residual, LatticeField, PeriodicStencil, SiteDiagonal};
use crate::num::cmat::CMat;
use crate::num::eig::hermitian_eig;
use crate::{C64, Error, Result};

/// Layers `base` (A) coupled through `rabi` (L) with Hermitian `k` (m x m):
/// the stacked operator is `I_m (x) A + K (x) L`.
#[derive(Debug, Clone)]
pub struct CouplingSpec {
    pub base: PeriodicStencil,
    pub rabi: PeriodicStencil,
    pub k: CMat,
}

impl CouplingSpec {
    pub fn new(base: PeriodicStencil, rabi: PeriodicStencil, k: CMat) -> Result<Self> {
        if base.dim() != rabi.dim() || base.fiber() != rabi.fiber() {
            return Err(Error::domain("base and rabi stencils must share dim and fiber"));
        }
        if !k.is_square() || k.rows() < 2 {
            return Err(Error::domain("coupling matrix must be square with m >= 2"));
        }
        if k.hermitian_defect() > 1e-12 * k.max_abs().max(1.0) {
            return Err(Error::domain("coupling matrix must be Hermitian"));
        }
        if !base.check_self_adjoint().ok || !rabi.check_self_adjoint().ok {
            return Err(Error::domain("coupled layers require self-adjoint stencils"));
        }
        Ok(CouplingSpec { base, rabi, k })
    }

    pub fn m(&self) -> usize {
        self.k.rows()
    }
}

/// Mixing angles of the two-layer coupling matrix and the scalar strength
/// used when L is a multiple of the identity.
#[derive(Debug, Clone, Copy)]
pub struct TwoGraphAngles {
    pub theta: f64,
    pub phi: f64,
    pub lambda0: f64,
}

/// `[[cos t, e^{i p} sin t], [e^{-i p} sin t, -cos t]]`: the involutive
/// two-layer coupling matrix (eigenvalues +1 and -1 for every angle).
pub fn two_graph_k(angles: &TwoGraphAngles) -> CMat {
    let (t, p) = (angles.theta, angles.phi);
    let (ct, st) = (Float::cos(t), Float::sin(t));
    let phase = C64::new(Float::cos(p), Float::sin(p));
    CMat::from_rows(
        2,
        2,
        &[
            C64::new(ct, 0.0),
            phase * st,
            phase.conj() * st,
            C64::new(-ct, 0.0),
        ],
    )
}

/// The stacked stencil with fiber `m * d`: coefficient at offset g is
/// `I_m (x) A_g + K (x) L_g`.
pub fn build_coupled(spec: &CouplingSpec) -> Result<PeriodicStencil> {
    let m = spec.m();
    let d = spec.base.fiber();
    let id = CMat::identity(m);
    let zero = CMat::zeros(d, d);
    let mut offsets: Vec<Vec<i64>> = spec.base.coeffs().map(|(g, _)| g.clone()).collect();
    for (g, _) in spec.rabi.coeffs() {
        if !offsets.contains(g) {
            offsets.push(g.clone());
        }
    }
    let mut entries = Vec::with_capacity(offsets.len());
    for g in offsets {
        let a_g = spec
            .base
            .coeffs()
            .find(|(h, _)| **h == g)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| zero.clone());
        let l_g = spec
            .rabi
            .coeffs()
            .find(|(h, _)| **h == g)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| zero.clone());
        entries.push((g, id.kron(&a_g).add(&spec.k.kron(&l_g))));
    }
    PeriodicStencil::new(spec.base.dim(), m * d, entries)
}

/// Eigendecomposition `K U = U diag(spectrum)` of the coupling matrix,
/// eigenvalues descending, `U` unitary.
pub fn hybrid_unitary(k: &CMat) -> Result<(CMat, Vec<f64>)> {
    let (lams, u) = hermitian_eig(k)?;
    Ok((u, lams))
}

/// Max over the sample points of the entrywise norm of
/// `(I (x) A + K (x) L)(U (x) I) - (U (x) I)(I (x) A + Lambda (x) L)`:
/// zero in exact arithmetic for every Hermitian K.
pub fn conjugation_residual(spec: &CouplingSpec, points: &[Vec<f64>]) -> Result<f64> {
    let (u, lams) = hybrid_unitary(&spec.k)?;
    let m = spec.m();
    let d = spec.base.fiber();
    let id_m = CMat::identity(m);
    let id_d = CMat::identity(d);
    let u_lift = u.kron(&id_d);
    let mut lam_diag = CMat::zeros(m, m);
    for (i, &l) in lams.iter().enumerate() {
        lam_diag[(i, i)] = C64::new(l, 0.0);
    }
    let mut worst = 0.0f64;
    for k_pt in points {
        let a_hat = spec.base.symbol_at_k(k_pt);
        let l_hat = spec.rabi.symbol_at_k(k_pt);
        let stacked = id_m.kron(&a_hat).add(&spec.k.kron(&l_hat));
        let diagonalized = id_m.kron(&a_hat).add(&lam_diag.kron(&l_hat));
        let defect = stacked.mul(&u_lift).sub(&u_lift.mul(&diagonalized));
        worst = worst.max(defect.max_abs());
    }
    Ok(worst)
}

/// Relative gap between `det(stacked symbol - lambda)` and the product of the
/// per-eigenvalue layer determinants `prod_i det(A + lam_i L - lambda)`.
pub fn factorization_residual(spec: &CouplingSpec, z: &[C64], lambda: f64) -> Result<f64> {
    let coupled = build_coupled(spec)?;
    let lam = C64::new(lambda, 0.0);
    let mut lhs_m = coupled.symbol_eval(z);
    for i in 0..lhs_m.rows() {
        lhs_m[(i, i)] -= lam;
    }
    let lhs = lhs_m.det();
    let (_, lams) = hybrid_unitary(&spec.k)?;
    let mut rhs = C64::new(1.0, 0.0);
    for &li in &lams {
        let mut block = spec
            .base
            .symbol_eval(z)
            .add(&spec.rabi.symbol_eval(z).scale(C64::new(li, 0.0)));
        for i in 0..block.rows() {
            block[(i, i)] -= lam;
        }
        rhs *= block.det();
    }
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0))
}

/// Defect layout on the stack: `Uniform` repeats V on every layer
/// (`I_m (x) V`); `Projected` concentrates it on the symmetric hybrid
/// (`p p^* (x) V`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectVariant {
    Uniform,
    Projected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Two-layer hybrid field `p (x) u`: the layer pair carrying a single-layer
/// field into the stack along one coupling eigenvector.
#[derive(Debug, Clone)]
pub struct HybridState {
    pub theta: f64,
    pub phi: f64,
    pub branch: Branch,
    /// component weights (p1, p2) of the chosen eigenvector of K
    pub weights: (C64, C64),
    /// first-layer field `p1 * u`
    pub u1: LatticeField,
    /// second-layer field `p2 * u`
    pub u2: LatticeField,
    /// interleaved stacked field with fiber `2 d`
    pub combined: LatticeField,
}

/// Unit eigenvector of the two-layer K: branch Plus has eigenvalue +1,
/// branch Minus -1.
pub fn branch_vector(theta: f64, phi: f64, branch: Branch) -> (C64, C64) {
    let half = theta / 2.0;
    let phase = C64::new(Float::cos(phi), -Float::sin(phi));
    match branch {
        Branch::Plus => (C64::new(Float::cos(half), 0.0), phase * Float::sin(half)),
        Branch::Minus => (C64::new(-Float::sin(half), 0.0), phase * Float::cos(half)),
    }
}

pub fn hybrid_state(u: &LatticeField, theta: f64, phi: f64, branch: Branch) -> HybridState {
    let (p1, p2) = branch_vector(theta, phi, branch);
    let d = u.fiber();
    let mut u1 = LatticeField::zeros(u.dim(), d, u.half_width());
    let mut u2 = LatticeField::zeros(u.dim(), d, u.half_width());
    let mut combined = LatticeField::zeros(u.dim(), 2 * d, u.half_width());
    for x in u.sites() {
        for c in 0..d {
            let v = u.get(&x, c);
            u1.set(&x, c, p1 * v);
            u2.set(&x, c, p2 * v);
            combined.set(&x, c, p1 * v);
            combined.set(&x, d + c, p2 * v);
        }
    }
    HybridState { theta, phi, branch, weights: (p1, p2), u1, u2, combined }
}

pub fn field_norm_sq(u: &LatticeField) -> f64 {
    u.data().iter().map(|z| z.norm_sqr()).sum()
}

/// Defect lifted to the stack per the chosen variant.
pub fn lift_defect(
    v: &SiteDiagonal,
    theta: f64,
    phi: f64,
    variant: DefectVariant,
) -> SiteDiagonal {
    let (p1, p2) = branch_vector(theta, phi, Branch::Plus);
    let outer = match variant {
        DefectVariant::Uniform => CMat::identity(2),
        DefectVariant::Projected => CMat::from_rows(
            2,
            2,
            &[
                p1 * p1.conj(),
                p1 * p2.conj(),
                p2 * p1.conj(),
                p2 * p2.conj(),
            ],
        ),
    };
    let mut out = SiteDiagonal::new();
    for (x, block) in v.entries() {
        out.insert(x.clone(), outer.kron(block));
    }
    out
}

/// Result of lifting a defect eigenpair into the coupled stack.
#[derive(Debug, Clone)]
pub struct EmbeddedPair {
    pub coupled: PeriodicStencil,
    pub defect: SiteDiagonal,
    pub state: HybridState,
    pub eigenvalue: f64,
    /// residual of the single-layer input eigenpair
    pub input_residual: f64,
    /// residual of the stacked eigenpair
    pub residual: f64,
    /// band interval of the single layer that contains `lambda + 2 lambda0`
    pub witness: (f64, f64),
}

const INPUT_RESIDUAL_MAX: f64 = 1e-6;
const WITNESS_GRID_1D: usize = 4096;
const WITNESS_GRID_2D: usize = 256;
const INTERIOR_MARGIN: f64 = 1e-6;

/// Band interval of `a` containing `x` strictly in its interior.
pub fn interior_band_witness(a: &PeriodicStencil, x: f64) -> Result<(f64, f64)> {
    let grid = match a.dim() {
        1 => WITNESS_GRID_1D,
        _ => WITNESS_GRID_2D,
    };
    let bands = band_witness(a, grid)?;
    bands
        .iter()
        .copied()
        .find(|&(lo, hi)| x > lo + INTERIOR_MARGIN && x < hi - INTERIOR_MARGIN)
        .ok_or_else(|| {
            Error::Domain(alloc::format!(
                "embedding failure: {x} is not interior to any band of the layer"
            ))
        })
}

/// Scalar strength placing `lambda + 2 lambda0` at the middle of the layer's
/// spectral hull.
pub fn select_lambda0(a: &PeriodicStencil, lambda: f64) -> Result<f64> {
    let grid = match a.dim() {
        1 => WITNESS_GRID_1D,
        _ => WITNESS_GRID_2D,
    };
    let bands = band_witness(a, grid)?;
    let lo = bands.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let hi = bands.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
    Ok((0.5 * (lo + hi) - lambda) / 2.0)
}

/// Lifts a verified single-layer eigenpair `(A + V) u = lambda u` to the
/// two-layer stack `I (x) A + K (x) lambda0 I` with the defect repeated
/// (`Uniform`) or projected onto the symmetric hybrid (`Projected`). Both
/// give `(stack + defect) (p (x) u) = (lambda + lambda0) (p (x) u)` while
/// `lambda + 2 lambda0` lies inside the layer's continuous spectrum, which is
/// what makes the new eigenvalue embedded.
pub fn embed_bound_state(
    a: &PeriodicStencil,
    v: &SiteDiagonal,
    u: &LatticeField,
    lambda: f64,
    angles: &TwoGraphAngles,
    variant: DefectVariant,
) -> Result<EmbeddedPair> {
    let input_residual = eigen_residual(a, Some(v), u, lambda)?;
    if input_residual > INPUT_RESIDUAL_MAX {
        return Err(Error::Domain(alloc::format!(
            "input eigenpair residual {input_residual:.3e} too large to certify"
        )));
    }
    let witness = interior_band_witness(a, lambda + 2.0 * angles.lambda0)?;
    let rabi = crate::models::identity_stencil(a.dim(), a.fiber(), angles.lambda0);
    let spec = CouplingSpec::new(a.clone(), rabi, two_graph_k(angles))?;
    let coupled = build_coupled(&spec)?;
    let defect = lift_defect(v, angles.theta, angles.phi, variant);
    let state = hybrid_state(u, angles.theta, angles.phi, Branch::Plus);
    let eigenvalue = lambda + angles.lambda0;
    let residual = eigen_residual(&coupled, Some(&defect), &state.combined, eigenvalue)?;
    if residual > 10.0 * input_residual + 1e-13 {
        return Err(Error::Convergence(alloc::format!(
            "stacked residual {residual:.3e} exceeds 10x input {input_residual:.3e}"
        )));
    }
    Ok(EmbeddedPair { coupled, defect, state, eigenvalue, input_residual, residual, witness })
}
