//! Core library: spectral calculus on positive Hermitian forms, Lp/Orlicz
//! Finsler geometry, an exact Legendre-duality oracle for rotation-invariant
//! potentials on the Riemann sphere, and the quantization maps between them.

pub mod error;
pub mod finsler;
pub mod generate;
pub mod quad;
pub mod radial;
pub mod spectral;

pub use error::Error;

/// Complex scalar used throughout the matrix modules.
pub type C64 = num_complex::Complex<f64>;

/// Dynamically sized complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
