//! Stock operators used across the crate: reference chains, lattices, and the
//! two-band chain pair.

use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::PeriodicStencil;
use crate::num::cmat::CMat;
use crate::C64;

fn real_scalar(v: f64) -> CMat {
    CMat::scalar(C64::new(v, 0.0))
}

/// 1D scalar chain with weights 2 at distance 1 and 1 at distance 2:
/// dispersion `4 cos k + 2 cos 2k`, spectrum `[-3, 6]`, multiplicity 4 on
/// `(-3, -2)` and 2 on `(-2, 6)`.
pub fn fourth_order_chain() -> PeriodicStencil {
    PeriodicStencil::new(
        1,
        1,
        [
            (vec![1], real_scalar(2.0)),
            (vec![-1], real_scalar(2.0)),
            (vec![2], real_scalar(1.0)),
            (vec![-2], real_scalar(1.0)),
        ],
    )
    .expect("mirror-symmetric by construction")
}

/// Nearest-neighbor adjacency on `Z^dim`: dispersion `2 sum_i cos k_i`,
/// spectrum `[-2 dim, 2 dim]`.
pub fn grid_adjacency(dim: usize) -> PeriodicStencil {
    let mut entries: Vec<(Vec<i64>, CMat)> = Vec::new();
    for d in 0..dim {
        for sign in [1i64, -1] {
            let mut g = vec![0i64; dim];
            g[d] = sign;
            entries.push((g, real_scalar(1.0)));
        }
    }
    PeriodicStencil::new(dim, 1, entries).expect("mirror-symmetric by construction")
}

/// Nearest-neighbor chain, shorthand for `grid_adjacency(1)`.
pub fn nn_chain() -> PeriodicStencil {
    grid_adjacency(1)
}

/// Two scalar chains with symbol `(z + 1/z + a) I + [[b, c], [c, -b]]`:
/// a pair of cosine bands centered at `a +- sqrt(b^2 + c^2)`.
pub fn coupled_chain_pair(a: f64, b: f64, c: f64) -> PeriodicStencil {
    let id = CMat::identity(2);
    let onsite = CMat::from_real(2, 2, &[a + b, c, c, a - b]);
    PeriodicStencil::new(
        1,
        2,
        [(vec![1], id.clone()), (vec![-1], id), (vec![0], onsite)],
    )
    .expect("mirror-symmetric by construction")
}

/// `scale * I` at offset zero; the building block for energy shifts.
pub fn identity_stencil(dim: usize, fiber: usize, scale: f64) -> PeriodicStencil {
    PeriodicStencil::new(dim, fiber, [(vec![0i64; dim], CMat::identity(fiber).scale(C64::new(scale, 0.0)))])
        .expect("diagonal real stencil is self-adjoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    #[test]
    fn fourth_order_chain_dispersion() {
        let a = fourth_order_chain();
        for k in [0.0, 0.5, 1.9, 3.1] {
            let lam = a.symbol_at_k(&[k])[(0, 0)];
            let expect = 4.0 * Float::cos(k) + 2.0 * Float::cos(2.0 * k);
            assert!((lam - C64::new(expect, 0.0)).norm() < 1e-14);
        }
        // extremes: 6 at k = 0, -3 at cos k = -1/2
        assert!((a.symbol_at_k(&[0.0])[(0, 0)].re - 6.0).abs() < 1e-14);
        let k_min = Float::acos(-0.5f64);
        assert!((a.symbol_at_k(&[k_min])[(0, 0)].re + 3.0).abs() < 1e-13);
    }

    #[test]
    fn grid_adjacency_dispersion() {
        let a = grid_adjacency(2);
        let (k1, k2) = (0.7, 2.1);
        let lam = a.symbol_at_k(&[k1, k2])[(0, 0)];
        let expect = 2.0 * (Float::cos(k1) + Float::cos(k2));
        assert!((lam - C64::new(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coupled_pair_symbol_eigenvalues() {
        let (a, b, c) = (0.4, 1.2, -0.9);
        let s = coupled_chain_pair(a, b, c);
        let k = 1.3;
        let m = s.symbol_at_k(&[k]);
        let (lams, _) = crate::num::eig::hermitian_eig(&m).unwrap();
        let base = 2.0 * Float::cos(k) + a;
        let split = Float::sqrt(b * b + c * c);
        assert!((lams[0] - (base + split)).abs() < 1e-13);
        assert!((lams[1] - (base - split)).abs() < 1e-13);
    }
}
