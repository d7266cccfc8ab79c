use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Relative tolerance for positive-definiteness at construction.
const PD_REL_TOL: f64 = 1e-12;
/// Relative tolerance accepted for Hermitian symmetry of raw input.
const HERM_REL_TOL: f64 = 1e-10;

/// Force exact Hermitian symmetry by averaging with the conjugate transpose.
///
/// The output satisfies `m[(i,j)] == m[(j,i)].conj()` exactly as stored.
pub fn hermitianize(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    out
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        worst = worst.max(m[(i, i)].im.abs());
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Returns `(values, vectors)` with `m = V diag(values) V*` and unitary `V`.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(n, m.ncols()));
    }
    let defect = hermitian_defect(m);
    let scale = max_abs(m).max(1.0);
    if defect > HERM_REL_TOL * scale {
        return Err(Error::NotHermitian {
            asym: defect,
            tol: HERM_REL_TOL * scale,
        });
    }
    let se = hermitianize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// A positive definite Hermitian n-by-n form.
///
/// The eigendecomposition and the symmetric square roots are computed at
/// construction: they back every downstream spectral operation.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    mat: CMatrix,
    eigenvalues: Vec<f64>,
    sqrt: CMatrix,
    inv_sqrt: CMatrix,
}

impl HermitianForm {
    /// Validate and build a form from a (near-)Hermitian positive definite matrix.
    ///
    /// Symmetry is enforced exactly by averaging; positivity requires the
    /// smallest eigenvalue to exceed `1e-12` relative to the largest.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || n != entries.ncols() {
            return Err(Error::DimensionMismatch(n, entries.ncols()));
        }
        let defect = hermitian_defect(&entries);
        let scale = max_abs(&entries).max(1.0);
        if defect > HERM_REL_TOL * scale {
            return Err(Error::NotHermitian {
                asym: defect,
                tol: HERM_REL_TOL * scale,
            });
        }
        let mat = hermitianize(&entries);
        let (eigenvalues, vectors) = hermitian_eigen(&mat)?;
        let max_eig = eigenvalues[n - 1];
        let min_eig = eigenvalues[0];
        if !(min_eig > PD_REL_TOL * max_eig.max(0.0)) || !min_eig.is_finite() {
            return Err(Error::NotPositiveDefinite { min_eig, max_eig });
        }
        let sqrt = scaled_congruence(&vectors, &eigenvalues, f64::sqrt);
        let inv_sqrt = scaled_congruence(&vectors, &eigenvalues, |l| 1.0 / l.sqrt());
        Ok(Self {
            mat,
            eigenvalues,
            sqrt,
            inv_sqrt,
        })
    }

    /// Real diagonal form; entries must be strictly positive.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self::new(m)
    }

    /// The n-by-n identity form.
    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n]).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Hermitian square root `h^{1/2}`.
    pub fn sqrt(&self) -> &CMatrix {
        &self.sqrt
    }

    /// Hermitian inverse square root `h^{-1/2}`.
    pub fn inv_sqrt(&self) -> &CMatrix {
        &self.inv_sqrt
    }

    /// Spectral norm (largest eigenvalue; the form is positive).
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// Congruence `p* h p` as a new form, for invertible `p`.
    pub fn congruence(&self, p: &CMatrix) -> Result<Self> {
        if p.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), p.nrows()));
        }
        Self::new(p.adjoint() * &self.mat * p)
    }

    /// Scale the form by a positive constant.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Self::new(&self.mat * C64::new(c, 0.0))
    }
}

fn scaled_congruence(vectors: &CMatrix, values: &[f64], f: impl Fn(f64) -> f64) -> CMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let fj = C64::new(f(values[j]), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    hermitianize(&(scaled * vectors.adjoint()))
}

/// A Hermitian (not necessarily positive) tangent at a point of the cone of forms.
#[derive(Clone, Debug)]
pub struct TangentForm {
    mat: CMatrix,
}

impl TangentForm {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || n != entries.ncols() {
            return Err(Error::DimensionMismatch(n, entries.ncols()));
        }
        let defect = hermitian_defect(&entries);
        let scale = max_abs(&entries).max(1.0);
        if defect > HERM_REL_TOL * scale {
            return Err(Error::NotHermitian {
                asym: defect,
                tol: HERM_REL_TOL * scale,
            });
        }
        Ok(Self {
            mat: hermitianize(&entries),
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self { mat: m }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.mat
    }
}

/// The vector of log-eigenvalues of `h0^{-1} h1`, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeSpectrum {
    lambda: Vec<f64>,
}

impl RelativeSpectrum {
    pub(crate) fn from_sorted(lambda: Vec<f64>) -> Self {
        debug_assert!(lambda.windows(2).all(|w| w[0] <= w[1]));
        Self { lambda }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Sorted log-eigenvalues.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// The spectrum of the reversed pair: negate and reverse.
    pub fn reversed(&self) -> Self {
        let mut l: Vec<f64> = self.lambda.iter().map(|v| -v).collect();
        l.reverse();
        Self { lambda: l }
    }

    /// Normalized p-mean `[(1/n) sum |lambda_j|^p]^{1/p}`.
    pub fn p_mean(&self, p: f64) -> f64 {
        let n = self.lambda.len() as f64;
        let sum: f64 = self.lambda.iter().map(|l| l.abs().powf(p)).sum();
        (sum / n).powf(1.0 / p)
    }
}

/// Sorted log-eigenvalues of an already-reduced Hermitian positive matrix.
pub(crate) fn rel_log_spectrum_of_reduction(reduction: &CMatrix) -> Result<RelativeSpectrum> {
    let (values, _) = hermitian_eigen(reduction)?;
    let max_eig = values[values.len() - 1];
    if !(values[0] > PD_REL_TOL * max_eig.max(0.0)) {
        return Err(Error::NotPositiveDefinite {
            min_eig: values[0],
            max_eig,
        });
    }
    let mut lambda: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    lambda.sort_by(f64::total_cmp);
    Ok(RelativeSpectrum::from_sorted(lambda))
}

pub(super) fn rel_log_spectrum(h0: &HermitianForm, h1: &HermitianForm) -> Result<RelativeSpectrum> {
    if h0.dim() != h1.dim() {
        return Err(Error::DimensionMismatch(h0.dim(), h1.dim()));
    }
    let reduction = hermitianize(&(h0.inv_sqrt() * h1.entries() * h0.inv_sqrt()));
    rel_log_spectrum_of_reduction(&reduction)
}

/// Real matrix helper: promote to complex.
pub fn complex_from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| C64::new(v, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(n: usize, vals: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_iterator(n, n, vals.iter().map(|&(re, im)| C64::new(re, im)))
    }

    #[test]
    fn eigen_of_complex_hermitian_matches_known_values() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = cm(2, &[(2.0, 0.0), (0.0, -1.0), (0.0, 1.0), (2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // reconstruct
        let mut d = CMatrix::zeros(2, 2);
        d[(0, 0)] = C64::new(vals[0], 0.0);
        d[(1, 1)] = C64::new(vals[1], 0.0);
        let rec = &vecs * d * vecs.adjoint();
        let err: f64 = (&rec - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "reconstruction error {err}");
    }

    #[test]
    fn sqrt_pair_inverts() {
        let m = cm(
            2,
            &[(4.0, 0.0), (1.0, 1.0), (1.0, -1.0), (3.0, 0.0)],
        );
        let h = HermitianForm::new(m.clone()).unwrap();
        let prod = h.sqrt() * h.sqrt();
        let err = (&prod - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
        let prod2 = h.sqrt() * h.inv_sqrt();
        let eye = CMatrix::identity(2, 2);
        let err2 = (&prod2 - &eye).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err2 < 1e-12);
    }

    #[test]
    fn rejects_non_positive() {
        let m = cm(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-2.0, 0.0)]);
        assert!(matches!(
            HermitianForm::new(m),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = cm(2, &[(1.0, 0.0), (5.0, 0.0), (0.0, 0.0), (2.0, 0.0)]);
        assert!(matches!(
            HermitianForm::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rel_log_spectrum_identity_and_diagonal() {
        let id = HermitianForm::identity(2);
        let s = rel_log_spectrum(&id, &id).unwrap();
        assert!(s.lambda().iter().all(|l| l.abs() < 1e-14));

        let h1 = HermitianForm::from_diagonal(&[(2.0f64).exp(), (-1.0f64).exp()]).unwrap();
        let s = rel_log_spectrum(&id, &h1).unwrap();
        assert!((s.lambda()[0] - (-1.0)).abs() < 1e-12);
        assert!((s.lambda()[1] - 2.0).abs() < 1e-12);
    }
}
