use super::forms::{hermitian_eigen, hermitianize, HermitianForm};
use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// Tolerance factor for the h-self-adjointness check `hA Hermitian`.
const SELF_ADJOINT_REL_TOL: f64 = 1e-10;

fn self_adjoint_reduction(h: &HermitianForm, a: &CMatrix) -> Result<CMatrix> {
    let n = h.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch(n, a.nrows()));
    }
    let ha = h.entries() * a;
    let scale = ha.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut defect: f64 = 0.0;
    for i in 0..n {
        defect = defect.max(ha[(i, i)].im.abs());
        for j in (i + 1)..n {
            defect = defect.max((ha[(i, j)] - ha[(j, i)].conj()).norm());
        }
    }
    if defect > SELF_ADJOINT_REL_TOL * scale {
        return Err(Error::NotSelfAdjoint {
            res: defect,
            tol: SELF_ADJOINT_REL_TOL * scale,
        });
    }
    // h^{1/2} A h^{-1/2} = h^{-1/2} (hA) h^{-1/2} is Hermitian.
    Ok(hermitianize(&(h.inv_sqrt() * ha * h.inv_sqrt())))
}

/// Apply a scalar function to an h-self-adjoint operator `A`.
///
/// Diagonalizes the Hermitian reduction `h^{1/2} A h^{-1/2}` and maps the
/// (real) eigenvalues through `f`; the result is again h-self-adjoint and
/// is independent of the choice of eigenbasis.
pub fn matrix_function(
    f: impl Fn(f64) -> f64,
    h: &HermitianForm,
    a: &CMatrix,
) -> Result<CMatrix> {
    let reduction = self_adjoint_reduction(h, a)?;
    let (values, vectors) = hermitian_eigen(&reduction)?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let fv = f(values[j]);
        if !fv.is_finite() {
            return Err(Error::FunctionUndefined(values[j]));
        }
        let fj = C64::new(fv, 0.0);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    let f_reduction = hermitianize(&(scaled * vectors.adjoint()));
    Ok(h.inv_sqrt() * f_reduction * h.sqrt())
}

/// Trace of `f(A)` for an h-self-adjoint `A` (sum of `f` over the real spectrum).
pub fn trace_function(f: impl Fn(f64) -> f64, h: &HermitianForm, a: &CMatrix) -> Result<f64> {
    let reduction = self_adjoint_reduction(h, a)?;
    let (values, _) = hermitian_eigen(&reduction)?;
    let mut sum = 0.0;
    for v in values {
        let fv = f(v);
        if !fv.is_finite() {
            return Err(Error::FunctionUndefined(v));
        }
        sum += fv;
    }
    Ok(sum)
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    // tr[a b] for matrices whose product has real trace.
    let n = a.nrows();
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            sum += a[(i, k)] * b[(k, i)];
        }
    }
    sum.re
}

/// Finite-difference verifier for the trace-derivative identity
/// `d/dt tr f(A_t) = tr[f'(A_t) Adot_t]`.
///
/// Central differences with step `dt` are used both for the trace and for the
/// tangent `Adot`; the return value is the absolute defect, O(dt^2) for a
/// smooth curve of self-adjoint operators.
pub fn trace_derivative_residual(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    curve: impl Fn(f64) -> (HermitianForm, CMatrix),
    t0: f64,
    dt: f64,
) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let (h_m, a_m) = curve(t0 - dt);
    let (h_0, a_0) = curve(t0);
    let (h_p, a_p) = curve(t0 + dt);

    let tr_p = trace_function(&f, &h_p, &a_p)?;
    let tr_m = trace_function(&f, &h_m, &a_m)?;
    let diff = (tr_p - tr_m) / (2.0 * dt);

    let a_dot = (&a_p - &a_m) / C64::new(2.0 * dt, 0.0);
    let df_a = matrix_function(&df, &h_0, &a_0)?;
    let formula = trace_product(&df_a, &a_dot);

    Ok((diff - formula).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_exponential() {
        let h = HermitianForm::identity(2);
        let mut a = CMatrix::zeros(2, 2);
        a[(1, 1)] = C64::new(1.0, 0.0);
        let e = matrix_function(f64::exp, &h, &a).unwrap();
        assert!((e[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((e[(1, 1)].re - 1.0f64.exp()).abs() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn identity_function_returns_argument() {
        let h = HermitianForm::from_diagonal(&[2.0, 0.5]).unwrap();
        let mut a = CMatrix::zeros(2, 2);
        // hA must be Hermitian: pick A = h^{-1} M with M Hermitian.
        a[(0, 0)] = C64::new(1.0, 0.0);
        a[(0, 1)] = C64::new(0.5, 0.0);
        a[(1, 0)] = C64::new(2.0, 0.0);
        a[(1, 1)] = C64::new(-1.0, 0.0);
        // check hA Hermitian: diag(2,0.5)*A = [[2,1],[1,-0.5]] ok.
        let id = matrix_function(|t| t, &h, &a).unwrap();
        let err = (&id - &a).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "identity defect {err}");
    }

    #[test]
    fn rejects_non_self_adjoint() {
        let h = HermitianForm::identity(2);
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            matrix_function(|t| t, &h, &a),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn polynomial_trace_derivative_is_exact_to_second_order() {
        // A_t = diag(t, 1), h = I, f(t) = t^2: d/dt tr f = 2t.
        let curve = |t: f64| {
            let h = HermitianForm::identity(2);
            let mut a = CMatrix::zeros(2, 2);
            a[(0, 0)] = C64::new(t, 0.0);
            a[(1, 1)] = C64::new(1.0, 0.0);
            (h, a)
        };
        let r =
            trace_derivative_residual(|t| t * t, |t| 2.0 * t, curve, 1.0, 1e-3).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }

    #[test]
    fn constant_curve_residual_vanishes() {
        let curve = |_t: f64| {
            let h = HermitianForm::identity(3);
            let mut a = CMatrix::zeros(3, 3);
            for i in 0..3 {
                a[(i, i)] = C64::new(i as f64, 0.0);
            }
            (h, a)
        };
        let r = trace_derivative_residual(f64::exp, f64::exp, curve, 0.3, 1e-4).unwrap();
        assert!(r < 1e-11, "residual {r}");
    }
}
