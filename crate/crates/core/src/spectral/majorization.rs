use super::forms::{hermitian_eigen, HermitianForm};
use super::rel_log_spectrum;
use crate::error::{Error, Result};
use crate::CMatrix;

/// True iff `x` is majorized by `y`: partial sums of the decreasing
/// rearrangements dominate and the totals agree.
///
/// Tolerance is `1e-10 * n * max|entry|` as an absolute slack on each
/// partial-sum comparison.
pub fn majorizes(y: &[f64], x: &[f64]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(y.len(), x.len()));
    }
    let n = x.len();
    if n == 0 {
        return Ok(true);
    }
    let mut xd = x.to_vec();
    let mut yd = y.to_vec();
    xd.sort_by(|a, b| b.total_cmp(a));
    yd.sort_by(|a, b| b.total_cmp(a));
    let scale = x
        .iter()
        .chain(y.iter())
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let tol = 1e-10 * n as f64 * scale;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for k in 0..n {
        sx += xd[k];
        sy += yd[k];
        if k + 1 < n && sx > sy + tol {
            return Ok(false);
        }
    }
    Ok((sx - sy).abs() <= tol)
}

/// Difference `sum phi(y_j) - sum phi(x_j)` for convex `phi` under the
/// precondition `x ≺ y`; nonnegative up to rounding.
pub fn majorization_convex_test(
    phi: impl Fn(f64) -> f64,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    if !majorizes(y, x)? {
        return Err(Error::NotMajorized(format!(
            "x (len {}) is not majorized by y",
            x.len()
        )));
    }
    let sy: f64 = y.iter().map(|&v| phi(v)).sum();
    let sx: f64 = x.iter().map(|&v| phi(v)).sum();
    Ok(sy - sx)
}

fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m)?;
    Ok(vals[0])
}

/// Loewner-comparison slack: `1e-10 * (1 + spectral scale)`.
fn loewner_tol(scale: f64) -> f64 {
    1e-10 * (1.0 + scale)
}

/// Gap of the reverse-triangle inequality for ordered forms `I <= A <= B`:
///
/// `tr[(log B)^p] - tr[(log A^{-1}B)^p] - tr[(log A)^p]`, nonnegative up to
/// rounding. The middle term uses the relative log-spectrum of the pair.
pub fn lidskii_gap(a: &HermitianForm, b: &HermitianForm, p: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    let n = a.dim();
    let eye = CMatrix::identity(n, n);
    let a_minus_i = a.entries() - &eye;
    let b_minus_a = b.entries() - a.entries();
    let tol_a = loewner_tol(a.spectral_norm());
    let tol_b = loewner_tol(b.spectral_norm());
    let min_ai = min_eigenvalue(&a_minus_i)?;
    if min_ai < -tol_a {
        return Err(Error::NotOrdered(format!(
            "A - I has eigenvalue {min_ai:.3e} below -{tol_a:.3e}"
        )));
    }
    let min_ba = min_eigenvalue(&b_minus_a)?;
    if min_ba < -tol_b {
        return Err(Error::NotOrdered(format!(
            "B - A has eigenvalue {min_ba:.3e} below -{tol_b:.3e}"
        )));
    }

    // All three spectra are >= 1 up to tolerance; clamp tiny negatives of the
    // logs so that fractional powers stay real.
    let pow = |l: f64| l.max(0.0).powf(p);
    let tr_log_b: f64 = b.eigenvalues().iter().map(|&e| pow(e.ln())).sum();
    let tr_log_a: f64 = a.eigenvalues().iter().map(|&e| pow(e.ln())).sum();
    let rel = rel_log_spectrum(a, b)?;
    let tr_rel: f64 = rel.lambda().iter().map(|&l| pow(l)).sum();
    Ok(tr_log_b - tr_rel - tr_log_a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_vector_is_majorized_by_any_probability_vector() {
        let x = vec![0.25; 4];
        let y = vec![0.5, 0.3, 0.15, 0.05];
        assert!(majorizes(&y, &x).unwrap());
        assert!(!majorizes(&x, &y).unwrap());
    }

    #[test]
    fn majorization_is_reflexive() {
        let x = vec![3.0, -1.0, 0.5];
        assert!(majorizes(&x, &x).unwrap());
    }

    #[test]
    fn convex_test_piecewise_linear_equality_case() {
        let x = vec![0.5, 0.5];
        let y = vec![1.0, 0.0];
        let d = majorization_convex_test(f64::abs, &x, &y).unwrap();
        assert!(d.abs() < 1e-14);
        let d2 = majorization_convex_test(|t| t * t, &x, &y).unwrap();
        assert!((d2 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn convex_test_rejects_unordered_input() {
        let x = vec![1.0, 0.0];
        let y = vec![0.5, 0.5];
        assert!(matches!(
            majorization_convex_test(|t| t * t, &x, &y),
            Err(Error::NotMajorized(_))
        ));
    }

    #[test]
    fn lidskii_gap_trivial_cases() {
        let a = HermitianForm::from_diagonal(&[1.0f64.exp(), 2.0f64.exp()]).unwrap();
        for &p in &[1.0, 1.5, 2.0, 3.0] {
            let g = lidskii_gap(&a, &a, p).unwrap();
            assert!(g.abs() < 1e-10, "A=B gap {g} at p={p}");
        }
        let id = HermitianForm::identity(2);
        let b = HermitianForm::from_diagonal(&[1.5, 4.0]).unwrap();
        for &p in &[1.0, 2.0] {
            let g = lidskii_gap(&id, &b, p).unwrap();
            assert!(g.abs() < 1e-10, "A=I gap {g} at p={p}");
        }
    }

    #[test]
    fn lidskii_gap_requires_ordering() {
        let a = HermitianForm::from_diagonal(&[0.5, 2.0]).unwrap();
        let b = HermitianForm::from_diagonal(&[3.0, 3.0]).unwrap();
        assert!(matches!(
            lidskii_gap(&a, &b, 2.0),
            Err(Error::NotOrdered(_))
        ));
    }
}
