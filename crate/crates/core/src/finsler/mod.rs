//! Lp and Orlicz Finsler geometry on the cone of positive Hermitian forms:
//! norms, geodesics, distances, path lengths, the quantum rooftop envelope
//! and the quantum Pythagorean identity.

mod weight;

pub use weight::YoungWeight;

use crate::error::{Error, Result};
use crate::spectral::{hermitian_eigen, hermitianize, rel_log_spectrum, HermitianForm, TangentForm};
use crate::{C64, CMatrix};

/// Orlicz norm of a list of real eigenvalues: the Minkowski functional
/// `inf { r > 0 : (1/n) sum chi(l_j / r) <= chi(1) }`.
///
/// The power family short-circuits to the closed form; general weights are
/// resolved by bisection on the monotone sublevel function.
pub fn orlicz_norm_of_values(values: &[f64], chi: &YoungWeight) -> Result<f64> {
    let n = values.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let max_abs = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max_abs == 0.0 {
        return Ok(0.0);
    }
    if let Some(p) = chi.power_exponent() {
        let sum: f64 = values.iter().map(|v| v.abs().powf(p)).sum();
        return Ok((sum / n as f64).powf(1.0 / p));
    }
    let target = chi.chi(1.0);
    let level = |r: f64| -> f64 {
        let s: f64 = values.iter().map(|&v| chi.chi(v / r)).sum();
        s / n as f64
    };
    // level(r) is nonincreasing; level(max_abs) <= chi(1) always.
    let mut hi = max_abs;
    let mut lo = max_abs;
    let mut steps = 0;
    while level(lo) <= target {
        hi = lo;
        lo *= 0.5;
        steps += 1;
        if steps > 2000 {
            // chi vanishes on a neighborhood of 0 along the spectrum; the
            // Minkowski functional degenerates to 0.
            return Ok(0.0);
        }
    }
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if level(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Orlicz Finsler norm of a tangent `nu` at the form `h`.
pub fn orlicz_norm(nu: &TangentForm, h: &HermitianForm, chi: &YoungWeight) -> Result<f64> {
    if nu.dim() != h.dim() {
        return Err(Error::DimensionMismatch(nu.dim(), h.dim()));
    }
    // Spectrum of h^{-1} nu equals that of the Hermitian reduction.
    let reduction = hermitianize(&(h.inv_sqrt() * nu.entries() * h.inv_sqrt()));
    let (values, _) = hermitian_eigen(&reduction)?;
    orlicz_norm_of_values(&values, chi)
}

/// The geodesic `h0^{1/2} (h0^{-1/2} h1 h0^{-1/2})^t h0^{1/2}` at time `t`.
///
/// Extension beyond `[0, 1]` is permitted.
pub fn geodesic(h0: &HermitianForm, h1: &HermitianForm, t: f64) -> Result<HermitianForm> {
    if h0.dim() != h1.dim() {
        return Err(Error::DimensionMismatch(h0.dim(), h1.dim()));
    }
    let reduction = hermitianize(&(h0.inv_sqrt() * h1.entries() * h0.inv_sqrt()));
    let (values, vectors) = hermitian_eigen(&reduction)?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        if values[j] <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                min_eig: values[j],
                max_eig: values[n - 1],
            });
        }
        let powered = C64::new((t * values[j].ln()).exp(), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= powered;
        }
    }
    let mt = hermitianize(&(scaled * vectors.adjoint()));
    HermitianForm::new(h0.sqrt() * mt * h0.sqrt())
}

/// Geodesic distance for the weight `chi`: the chi-norm of the constant
/// relative log-spectrum.
pub fn d_chi(h0: &HermitianForm, h1: &HermitianForm, chi: &YoungWeight) -> Result<f64> {
    let spectrum = rel_log_spectrum(h0, h1)?;
    orlicz_norm_of_values(spectrum.lambda(), chi)
}

/// Lp geodesic distance `[(1/n) sum |lambda_j|^p]^{1/p}`.
pub fn d_p(h0: &HermitianForm, h1: &HermitianForm, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    Ok(rel_log_spectrum(h0, h1)?.p_mean(p))
}

/// Length of the piecewise-geodesic interpolant through the samples.
///
/// Each consecutive pair is joined by a geodesic segment, so this is the
/// inscribed-geodesic length of the sampled curve.
pub fn path_length(path: &[(f64, HermitianForm)], chi: &YoungWeight) -> Result<f64> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument(
            "path needs at least two samples".into(),
        ));
    }
    for w in path.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::InvalidArgument(format!(
                "sample times must be strictly increasing: {} then {}",
                w[0].0, w[1].0
            )));
        }
    }
    let mut total = 0.0;
    for w in path.windows(2) {
        total += d_chi(&w[0].1, &w[1].1, chi)?;
    }
    Ok(total)
}

/// Least form dominating both inputs: eigenvalues `e^{max(lambda_j, 0)}` in
/// the basis diagonalizing the pair.
pub fn quantum_rooftop(h0: &HermitianForm, h1: &HermitianForm) -> Result<HermitianForm> {
    if h0.dim() != h1.dim() {
        return Err(Error::DimensionMismatch(h0.dim(), h1.dim()));
    }
    let reduction = hermitianize(&(h0.inv_sqrt() * h1.entries() * h0.inv_sqrt()));
    let (values, vectors) = hermitian_eigen(&reduction)?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let clamped = C64::new(values[j].max(1.0), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= clamped;
        }
    }
    let envelope = hermitianize(&(scaled * vectors.adjoint()));
    HermitianForm::new(h0.sqrt() * envelope * h0.sqrt())
}

/// Defect of the Pythagorean identity
/// `|d_p(h0,h1)^p - d_p(h0,P)^p - d_p(P,h1)^p|` with `P` the rooftop.
pub fn pythagorean_residual(h0: &HermitianForm, h1: &HermitianForm, p: f64) -> Result<f64> {
    let rooftop = quantum_rooftop(h0, h1)?;
    let full = d_p(h0, h1, p)?.powf(p);
    let left = d_p(h0, &rooftop, p)?.powf(p);
    let right = d_p(&rooftop, h1, p)?.powf(p);
    Ok((full - left - right).abs())
}
