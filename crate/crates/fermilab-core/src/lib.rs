//! Periodic difference and quantum-graph operators with local defects.
//!
//! The crate builds self-adjoint operators that act on `C^d`-valued functions
//! of the integer lattice `Z^n` by finite translation stencils, computes their
//! Floquet symbols and band structure, and constructs rank-one site defects
//! whose bound states sit at prescribed energies, including energies embedded
//! in the continuous spectrum of a larger coupled operator. A second family of
//! models covers metric graphs (`-d^2/dx^2` on edges with Kirchhoff vertex
//! conditions): a doubled 1D chain and a doubled planar grid, where the defect
//! lives on a single connecting edge.
//!
//! Everything here is `no_std` (with `alloc`); IO lives in the companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

use alloc::string::String;
use core::fmt;

pub mod coupling;
pub mod dispersion;
pub mod greens;
pub mod lattice;
pub mod models;
pub mod num;
pub mod qgraph;

/// Complex double, the scalar type of every operator here.
pub type C64 = num_complex::Complex<f64>;

/// Computation failure. `Domain` means the inputs violate a mathematical
/// precondition (wrong regime, singular configuration); `Convergence` means an
/// iteration or quadrature failed to settle within its budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Domain(String),
    Convergence(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Convergence(m) => write!(f, "convergence error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
