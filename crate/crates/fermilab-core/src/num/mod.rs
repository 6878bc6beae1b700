//! Self-contained numerical kernels: small dense complex matrices, Hermitian
//! eigendecomposition, polynomial roots, banded solves, torus quadrature,
//! bracketed root finding, and exponential-decay fitting.

pub mod banded;
pub mod bisect;
pub mod cmat;
pub mod eig;
pub mod fit;
pub mod quad;
pub mod rng;
pub mod roots;

pub use banded::BandedMatrix;
pub use cmat::CMat;
pub use fit::DecayFit;
