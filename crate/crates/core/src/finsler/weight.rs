use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A convex even weight with `chi(0) = 0` and `1` in the subgradient at `1`,
/// together with a selection from its subdifferential.
///
/// The power family `|l|^p / p` carries closed forms for the conjugate; any
/// other weight falls back to bracketed one-dimensional maximization.
#[derive(Clone)]
pub struct YoungWeight {
    kind: WeightKind,
    p_class: Option<f64>,
    smooth: bool,
    name: String,
}

#[derive(Clone)]
enum WeightKind {
    Power { p: f64 },
    Cosh { a: f64 },
    Custom { chi: ScalarFn, dchi: ScalarFn },
}

impl fmt::Debug for YoungWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YoungWeight({})", self.name)
    }
}

impl YoungWeight {
    /// The Lp weight `chi_p(l) = |l|^p / p`, a member of the growth class
    /// with exponent `p`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidWeight(format!("power weight needs p >= 1, got {p}")));
        }
        let w = Self {
            kind: WeightKind::Power { p },
            p_class: Some(p),
            smooth: p > 1.0,
            name: format!("chi_{p}"),
        };
        w.validate()?;
        Ok(w)
    }

    /// Smooth strictly convex weight `cosh(a l) - 1` with `a` normalized so
    /// that the derivative at `1` equals `1` (a solves `a sinh a = 1`).
    pub fn cosh() -> Self {
        // Solve a*sinh(a) = 1 once by bisection.
        let mut lo = 0.5_f64;
        let mut hi = 1.5_f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.sinh() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = 0.5 * (lo + hi);
        let w = Self {
            kind: WeightKind::Cosh { a },
            p_class: None,
            smooth: true,
            name: "cosh".to_string(),
        };
        w.validate().expect("normalized cosh weight is a Young weight");
        w
    }

    /// User-supplied weight; validated at construction.
    pub fn custom(
        name: &str,
        chi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dchi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        p_class: Option<f64>,
        smooth: bool,
    ) -> Result<Self> {
        let w = Self {
            kind: WeightKind::Custom {
                chi: Arc::new(chi),
                dchi: Arc::new(dchi),
            },
            p_class,
            smooth,
            name: name.to_string(),
        };
        w.validate()?;
        Ok(w)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Growth exponent certifying membership in the class `l chi'(l) <= p chi(l)`.
    pub fn p_class(&self) -> Option<f64> {
        self.p_class
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// Exponent of the closed-form power family, if this weight is one.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            WeightKind::Power { p } => Some(p),
            _ => None,
        }
    }

    /// Weight value `chi(l)`.
    pub fn chi(&self, l: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { p } => l.abs().powf(*p) / p,
            WeightKind::Cosh { a } => (a * l).cosh() - 1.0,
            WeightKind::Custom { chi, .. } => chi(l),
        }
    }

    /// Derivative selection `chi'(l)`.
    pub fn dchi(&self, l: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { p } => l.signum() * l.abs().powf(p - 1.0),
            WeightKind::Cosh { a } => a * (a * l).sinh(),
            WeightKind::Custom { dchi, .. } => dchi(l),
        }
    }

    /// Legendre conjugate `chi*(h) = sup_l (l h - chi(l))`, extended-real.
    ///
    /// Closed forms are registered for the power family; other weights are
    /// resolved by bracketed maximization (monotone inversion of `chi'`).
    pub fn conjugate(&self, h: f64) -> f64 {
        let h = h.abs(); // conjugate of an even weight is even
        match &self.kind {
            WeightKind::Power { p } if *p > 1.0 => {
                let q = p / (p - 1.0);
                h.powf(q) / q
            }
            WeightKind::Power { .. } => {
                // chi_1* is the indicator of [-1, 1].
                if h <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            _ => self.conjugate_numeric(h),
        }
    }

    fn conjugate_numeric(&self, h: f64) -> f64 {
        if h == 0.0 {
            return 0.0;
        }
        // Expand the bracket until chi'(L) >= h; if chi' saturates below h the
        // conjugate is infinite.
        let mut hi = 1.0;
        let mut expansions = 0;
        while self.dchi(hi) < h {
            hi *= 2.0;
            expansions += 1;
            if expansions > 4000 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.dchi(mid) < h {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let l = 0.5 * (lo + hi);
        l * h - self.chi(l)
    }

    fn validate(&self) -> Result<()> {
        if self.chi(0.0).abs() > 1e-14 {
            return Err(Error::InvalidWeight(format!(
                "{}: chi(0) = {} is not 0",
                self.name,
                self.chi(0.0)
            )));
        }
        // Subgradient condition 1 in d(chi)(1), checked with one-sided slopes.
        let eps = 1e-6;
        let up = self.chi(1.0 + eps) - self.chi(1.0);
        let down = self.chi(1.0) - self.chi(1.0 - eps);
        if up < eps * (1.0 - 1e-6) || down > eps * (1.0 + 1e-6) {
            return Err(Error::InvalidWeight(format!(
                "{}: 1 is not a subgradient at 1 (slopes {:.9e}, {:.9e})",
                self.name,
                down / eps,
                up / eps
            )));
        }
        // Evenness spot check.
        for &l in &[0.3, 1.7, 42.0] {
            if (self.chi(l) - self.chi(-l)).abs() > 1e-12 * (1.0 + self.chi(l).abs()) {
                return Err(Error::InvalidWeight(format!("{}: not even at {l}", self.name)));
            }
        }
        // Growth-class certificate on a log-spaced grid.
        if let Some(p) = self.p_class {
            let n = 121;
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                let l = 10f64.powf(-6.0 + 12.0 * t);
                let lhs = l * self.dchi(l);
                let rhs = p * self.chi(l);
                if lhs > rhs + 1e-10 * (1.0 + rhs.abs()) {
                    return Err(Error::InvalidWeight(format!(
                        "{}: growth bound fails at l={l:.3e}: {lhs:.6e} > {p} * chi = {rhs:.6e}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}
