//! Metric-graph models: `-d^2/dx^2` on unit edges with Kirchhoff vertex
//! matching, reduced by mirror symmetry to half graphs with a dangling edge
//! of length 1/2. Two concrete geometries live here: a doubled chain
//! (`chain`) and a doubled planar grid (`grid`). In both, a single edge
//! carries a constant potential `V0 = mu^2 - nu^2` chosen so a bound state at
//! the embedded energy `mu^2` exists.

use alloc::vec::Vec;

use crate::num::cmat::CMat;
use crate::C64;

pub mod chain;
pub mod grid;

/// Boundary condition at the free end of the dangling half edge; selects the
/// symmetry class the half graph represents (even or odd through the edge
/// midpoints of the doubled graph).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc {
    Neumann,
    Dirichlet,
}

impl Bc {
    pub fn name(self) -> &'static str {
        match self {
            Bc::Neumann => "neumann",
            Bc::Dirichlet => "dirichlet",
        }
    }
}

/// One evaluation of a secular system: the vertex-matching matrix at fixed
/// spectral parameter and quasimomentum, its determinant, and the
/// boundary-condition constants that entered it.
#[derive(Debug, Clone)]
pub struct SecularEval {
    pub mu: f64,
    pub k: Vec<f64>,
    pub matrix: CMat,
    pub det: C64,
    /// dangling-edge value constant at x = 1/2
    pub a: f64,
    /// dangling-edge derivative constant at x = 1/2
    pub b: f64,
    /// defect-edge value constant at x = 1/2 (in the nu basis)
    pub c: f64,
    /// defect-edge derivative constant at x = 1/2 (in the nu basis)
    pub d: f64,
}
