//! Deterministic random instance generators for tests and experiments.
//!
//! All sampling is driven by a seeded ChaCha stream so that identical seeds
//! reproduce identical instances on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::{hermitianize, HermitianForm, TangentForm};
use crate::{C64, CMatrix};

/// Seeded generator used across the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-ish random unitary from the QR factorization of a complex Gaussian
/// matrix, with the phases fixed so that R has positive diagonal.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = gaussian_complex(n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random positive form `Q diag(e^mu) Q*` with `mu` uniform in `[log_lo, log_hi]`.
pub fn random_spd(n: usize, log_lo: f64, log_hi: f64, rng: &mut ChaCha8Rng) -> HermitianForm {
    let q = random_unitary(n, rng);
    let mut scaled = q.clone();
    for j in 0..n {
        let mu: f64 = rng.gen_range(log_lo..=log_hi);
        let e = C64::new(mu.exp(), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= e;
        }
    }
    HermitianForm::new(hermitianize(&(scaled * q.adjoint())))
        .expect("spectrum is positive by construction")
}

/// Random Hermitian matrix with Gaussian entries of the given scale.
pub fn random_hermitian(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = gaussian_complex(n, rng) * C64::new(scale, 0.0);
    hermitianize(&g)
}

/// Random tangent at a form (any Hermitian matrix).
pub fn random_tangent(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> TangentForm {
    TangentForm::new(random_hermitian(n, scale, rng)).expect("hermitian by construction")
}

/// Random invertible matrix (complex Gaussian, redrawn while ill-conditioned).
pub fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let g = gaussian_complex(n, rng);
        let svd = g.clone().svd(false, false);
        let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
        let smin = svd.singular_values.iter().fold(f64::MAX, |a, &b| a.min(b));
        if smin > 1e-3 * smax {
            return g;
        }
    }
}

/// Ordered pair `I <= A <= B`: A = I + PSD, B = A + PSD.
pub fn random_ordered_pair(
    n: usize,
    bump: f64,
    rng: &mut ChaCha8Rng,
) -> (HermitianForm, HermitianForm) {
    let a_mat = CMatrix::identity(n, n) + random_psd(n, bump, rng);
    let b_mat = &a_mat + random_psd(n, bump, rng);
    let a = HermitianForm::new(a_mat).expect("positive by construction");
    let b = HermitianForm::new(b_mat).expect("positive by construction");
    (a, b)
}

/// Ordered triple `U <= V <= W` of positive forms.
pub fn random_ordered_triple(
    n: usize,
    bump: f64,
    rng: &mut ChaCha8Rng,
) -> (HermitianForm, HermitianForm, HermitianForm) {
    let u_mat = CMatrix::identity(n, n) * C64::new(rng.gen_range(0.25..2.0), 0.0)
        + random_psd(n, bump, rng);
    let v_mat = &u_mat + random_psd(n, bump, rng);
    let w_mat = &v_mat + random_psd(n, bump, rng);
    (
        HermitianForm::new(u_mat).expect("positive"),
        HermitianForm::new(v_mat).expect("positive"),
        HermitianForm::new(w_mat).expect("positive"),
    )
}

fn random_psd(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = gaussian_complex(n, rng) * C64::new(scale / (n as f64).sqrt(), 0.0);
    hermitianize(&(&g * g.adjoint()))
}

/// Doubly stochastic matrix as a convex combination of random permutations.
pub fn random_doubly_stochastic(
    n: usize,
    n_perms: usize,
    rng: &mut ChaCha8Rng,
) -> nalgebra::DMatrix<f64> {
    let mut weights: Vec<f64> = (0..n_perms).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut out = nalgebra::DMatrix::<f64>::zeros(n, n);
    for &w in &weights {
        let perm = random_permutation(n, rng);
        for (i, &p) in perm.iter().enumerate() {
            out[(i, p)] += w;
        }
    }
    out
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    // Fisher-Yates
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(7);
        let q = random_unitary(5, &mut r);
        let prod = &q * q.adjoint();
        let eye = CMatrix::identity(5, 5);
        let err = (&prod - &eye).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "unitarity defect {err}");
    }

    #[test]
    fn spd_spectrum_in_range() {
        let mut r = rng(11);
        let h = random_spd(6, -1.0, 2.0, &mut r);
        for &e in h.eigenvalues() {
            assert!(e >= (-1.0f64).exp() * (1.0 - 1e-9) && e <= (2.0f64).exp() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn ordered_pair_is_ordered() {
        let mut r = rng(13);
        for _ in 0..20 {
            let (a, b) = random_ordered_pair(5, 0.8, &mut r);
            let diff = b.entries() - a.entries();
            let (vals, _) = crate::spectral::hermitian_eigen(&diff).unwrap();
            assert!(vals[0] > -1e-10);
            assert!(a.eigenvalues()[0] > 1.0 - 1e-10);
        }
    }

    #[test]
    fn doubly_stochastic_rows_and_cols_sum_to_one() {
        let mut r = rng(17);
        let a = random_doubly_stochastic(6, 9, &mut r);
        for i in 0..6 {
            let rs: f64 = (0..6).map(|j| a[(i, j)]).sum();
            let cs: f64 = (0..6).map(|j| a[(j, i)]).sum();
            assert!((rs - 1.0).abs() < 1e-12 && (cs - 1.0).abs() < 1e-12);
            for j in 0..6 {
                assert!(a[(i, j)] >= 0.0);
            }
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let h1 = random_spd(4, -0.5, 0.5, &mut rng(99));
        let h2 = random_spd(4, -0.5, 0.5, &mut rng(99));
        assert_eq!(h1.entries(), h2.entries());
    }
}
