//! Calculus of diagonalizable matrices with real spectrum: positive Hermitian
//! forms, relative spectra, matrix functions, trace derivatives, majorization
//! and the Lidskii inequality toolkit.
//!
//! Every spectral computation routes through the Hermitian reduction
//! `h^{-1/2} M h^{-1/2}`; non-normal matrices are never fed to an eigensolver.

mod forms;
mod functions;
mod majorization;

pub use forms::{hermitian_eigen, hermitianize, HermitianForm, RelativeSpectrum, TangentForm};
pub use functions::{matrix_function, trace_derivative_residual};
pub use majorization::{lidskii_gap, majorization_convex_test, majorizes};

pub(crate) use forms::rel_log_spectrum_of_reduction;

use crate::error::Result;

/// Sorted log-eigenvalues of `h0^{-1} h1`, computed through the Hermitian
/// reduction `h0^{-1/2} h1 h0^{-1/2}`.
pub fn rel_log_spectrum(h0: &HermitianForm, h1: &HermitianForm) -> Result<RelativeSpectrum> {
    forms::rel_log_spectrum(h0, h1)
}
