use std::sync::Arc;

use crate::quad::{logit, softplus};

/// A convex extended-real function on the moment interval `[0, 1]`: the
/// Legendre dual of a radial potential profile.
///
/// Implementations supply the value, a derivative selection, and the region
/// where the function is finite; a closed-form conjugate can be exposed
/// through `primal_hint`.
pub trait DualFn: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// A selection from the subdifferential at interior points of the support.
    fn slope(&self, x: f64) -> f64;

    /// Closed interval outside of which the function is identically `+inf`.
    /// Full-mass profiles report `(0, 1)`.
    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    /// Conjugate value at `s` when a closed form is available.
    fn primal_hint(&self, _s: f64) -> Option<f64> {
        None
    }
}

/// Shared handle to a dual profile.
#[derive(Clone)]
pub struct DualProfile {
    f: Arc<dyn DualFn>,
}

impl std::fmt::Debug for DualProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (lo, hi) = self.support();
        write!(f, "DualProfile(support [{lo}, {hi}])")
    }
}

/// `x ln x` extended by 0 at the origin.
pub fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Dual of the model profile `g(s) = log(1 + e^s)`:
/// the entropy `g*(x) = x ln x + (1-x) ln(1-x)` on `[0, 1]`.
pub fn model_entropy(x: f64) -> f64 {
    xlnx(x) + xlnx(1.0 - x)
}

struct ModelDual;

impl DualFn for ModelDual {
    fn value(&self, x: f64) -> f64 {
        model_entropy(x)
    }
    fn slope(&self, x: f64) -> f64 {
        logit(x)
    }
    fn primal_hint(&self, s: f64) -> Option<f64> {
        Some(softplus(s))
    }
}

/// Dual `(1/a) g*` of the steepened model profile `(1/a) log(1 + e^{a s})`.
struct ScaledModelDual {
    a: f64,
}

impl DualFn for ScaledModelDual {
    fn value(&self, x: f64) -> f64 {
        model_entropy(x) / self.a
    }
    fn slope(&self, x: f64) -> f64 {
        logit(x) / self.a
    }
    fn primal_hint(&self, s: f64) -> Option<f64> {
        Some(softplus(self.a * s) / self.a)
    }
}

/// `base + c0 + c1 (x - 1/2)`; covers constant shifts and translations.
struct AffineShiftDual {
    base: DualProfile,
    c0: f64,
    c1: f64,
}

impl DualFn for AffineShiftDual {
    fn value(&self, x: f64) -> f64 {
        self.base.value(x) + self.c0 + self.c1 * (x - 0.5)
    }
    fn slope(&self, x: f64) -> f64 {
        self.base.slope(x) + self.c1
    }
    fn support(&self) -> (f64, f64) {
        self.base.support()
    }
    fn primal_hint(&self, s: f64) -> Option<f64> {
        // sup_x (s x - B(x) - c0 - c1 (x - 1/2)) = B*(s - c1) - c0 + c1/2,
        // and B* is available exactly through the base profile.
        Some(self.base.primal(s - self.c1) - self.c0 + 0.5 * self.c1)
    }
}

/// `g* - alpha ln x`: integrably divergent at the left endpoint, giving an
/// unbounded potential with zero Lelong numbers.
struct CuspDual {
    alpha: f64,
}

impl DualFn for CuspDual {
    fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::INFINITY
        } else {
            model_entropy(x) - self.alpha * x.ln()
        }
    }
    fn slope(&self, x: f64) -> f64 {
        logit(x) - self.alpha / x
    }
}

/// `+inf` on `[0, gamma)`, `g*` on `[gamma, 1]`: positive mass loss at the
/// left endpoint (a positive Lelong number), excluded from the finite-energy
/// classes.
struct MassDeficitDual {
    gamma: f64,
}

impl DualFn for MassDeficitDual {
    fn value(&self, x: f64) -> f64 {
        if x < self.gamma {
            f64::INFINITY
        } else {
            model_entropy(x)
        }
    }
    fn slope(&self, x: f64) -> f64 {
        logit(x)
    }
    fn support(&self) -> (f64, f64) {
        (self.gamma, 1.0)
    }
}

/// Piecewise-linear profile on a strictly increasing node set spanning `[0, 1]`,
/// with `+inf` permitted on end segments.
pub struct GridDual {
    xs: Vec<f64>,
    vals: Vec<f64>,
    finite_lo: usize,
    finite_hi: usize,
}

impl GridDual {
    /// Nodes must span `[0, 1]`; infinite values are allowed only in contiguous
    /// end segments. Convexity is the caller's responsibility (validated by
    /// the potential constructors).
    pub fn new(xs: Vec<f64>, vals: Vec<f64>) -> Option<Self> {
        if xs.len() != vals.len() || xs.len() < 2 {
            return None;
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        let finite_lo = vals.iter().position(|v| v.is_finite())?;
        let finite_hi = vals.iter().rposition(|v| v.is_finite())?;
        if vals[finite_lo..=finite_hi].iter().any(|v| !v.is_finite()) {
            return None; // interior holes are not a valid mask
        }
        Some(Self {
            xs,
            vals,
            finite_lo,
            finite_hi,
        })
    }

    fn cell_of(&self, x: f64) -> usize {
        let hi = self.finite_hi;
        let lo = self.finite_lo;
        let j = self.xs[lo..=hi].partition_point(|&t| t <= x) + lo;
        j.clamp(lo + 1, hi) - 1
    }
}

impl DualFn for GridDual {
    fn value(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return f64::INFINITY;
        }
        let i = self.cell_of(x);
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.vals[i] + t * (self.vals[i + 1] - self.vals[i])
    }
    fn slope(&self, x: f64) -> f64 {
        let i = self.cell_of(x);
        (self.vals[i + 1] - self.vals[i]) / (self.xs[i + 1] - self.xs[i])
    }
    fn support(&self) -> (f64, f64) {
        (self.xs[self.finite_lo], self.xs[self.finite_hi])
    }
}

/// Nonnegative combination of profiles plus a constant (geodesic interpolation).
struct ComboDual {
    terms: Vec<(f64, DualProfile)>,
    offset: f64,
}

impl DualFn for ComboDual {
    fn value(&self, x: f64) -> f64 {
        let mut sum = self.offset;
        for (w, d) in &self.terms {
            sum += w * d.value(x);
        }
        sum
    }
    fn slope(&self, x: f64) -> f64 {
        let mut sum = 0.0;
        for (w, d) in &self.terms {
            sum += w * d.slope(x);
        }
        sum
    }
    fn support(&self) -> (f64, f64) {
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for (_, d) in &self.terms {
            let (a, b) = d.support();
            lo = lo.max(a);
            hi = hi.min(b);
        }
        (lo, hi)
    }
}

/// Pointwise maximum of two profiles (the dual of the rooftop envelope).
struct MaxDual {
    a: DualProfile,
    b: DualProfile,
}

impl DualFn for MaxDual {
    fn value(&self, x: f64) -> f64 {
        self.a.value(x).max(self.b.value(x))
    }
    fn slope(&self, x: f64) -> f64 {
        let va = self.a.value(x);
        let vb = self.b.value(x);
        if va > vb {
            self.a.slope(x)
        } else if vb > va {
            self.b.slope(x)
        } else {
            self.a.slope(x).max(self.b.slope(x))
        }
    }
    fn support(&self) -> (f64, f64) {
        let (la, ha) = self.a.support();
        let (lb, hb) = self.b.support();
        (la.max(lb), ha.min(hb))
    }
}

impl DualProfile {
    pub fn from_fn(f: impl DualFn + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn model() -> Self {
        Self::from_fn(ModelDual)
    }

    pub fn scaled_model(a: f64) -> Self {
        Self::from_fn(ScaledModelDual { a })
    }

    pub fn affine_shift(base: &DualProfile, c0: f64, c1: f64) -> Self {
        Self::from_fn(AffineShiftDual {
            base: base.clone(),
            c0,
            c1,
        })
    }

    pub fn cusp(alpha: f64) -> Self {
        Self::from_fn(CuspDual { alpha })
    }

    pub fn mass_deficit(gamma: f64) -> Self {
        Self::from_fn(MassDeficitDual { gamma })
    }

    pub fn combo(terms: Vec<(f64, DualProfile)>, offset: f64) -> Self {
        let terms = terms.into_iter().filter(|(w, _)| *w != 0.0).collect();
        Self::from_fn(ComboDual { terms, offset })
    }

    pub fn max(a: &DualProfile, b: &DualProfile) -> Self {
        Self::from_fn(MaxDual {
            a: a.clone(),
            b: b.clone(),
        })
    }

    pub fn from_grid(grid: GridDual) -> Self {
        Self::from_fn(grid)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.f.value(x)
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.f.slope(x)
    }

    pub fn support(&self) -> (f64, f64) {
        self.f.support()
    }

    /// Full mass means no end segment has been cut away.
    pub fn is_full_mass(&self) -> bool {
        let (lo, hi) = self.support();
        lo <= 0.0 && hi >= 1.0
    }

    /// Conjugate value `sup_x (s x - D(x))`: the primal profile at `s`.
    ///
    /// Uses the registered closed form when present, otherwise bisects the
    /// monotone first-order condition `slope(x) = s` over the support.
    pub fn primal(&self, s: f64) -> f64 {
        if let Some(v) = self.f.primal_hint(s) {
            return v;
        }
        let (lo, hi) = self.support();
        let eval = |x: f64| {
            let v = self.f.value(x);
            if v.is_finite() {
                s * x - v
            } else {
                f64::NEG_INFINITY
            }
        };
        // Probe slightly inside the support: slopes may be infinite at the ends.
        let width = hi - lo;
        let a = lo + 1e-15 * width;
        let b = hi - 1e-15 * width;
        if self.f.slope(a) >= s {
            return eval(lo).max(eval(a));
        }
        if self.f.slope(b) <= s {
            return eval(hi).max(eval(b));
        }
        let mut x_lo = a;
        let mut x_hi = b;
        for _ in 0..90 {
            let mid = 0.5 * (x_lo + x_hi);
            if self.f.slope(mid) < s {
                x_lo = mid;
            } else {
                x_hi = mid;
            }
        }
        eval(0.5 * (x_lo + x_hi))
    }

    /// Relative potential `u(s) = phi(s) - g(s)` against the model profile.
    pub fn u(&self, s: f64) -> f64 {
        self.primal(s) - softplus(s)
    }

    /// `sup_X u`, computed on the dual side as `sup_x (g*(x) - D(x))`.
    pub fn sup_u(&self) -> f64 {
        let (lo, hi) = self.support();
        let r = |x: f64| model_entropy(x) - self.f.value(x);
        let n = 4096;
        let mut best_x = lo;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let v = r(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // Local golden refinement around the grid argmax.
        let step = (hi - lo) / n as f64;
        let (mut a, mut b) = ((best_x - step).max(lo), (best_x + step).min(hi));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (r(c), r(d));
        for _ in 0..80 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = r(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = r(d);
            }
        }
        best.max(fc).max(fd)
    }

    /// Sample on the uniform m-grid over `[0, 1]` (masked entries are `+inf`).
    pub fn sample(&self, m: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(m);
        let mut vs = Vec::with_capacity(m);
        let (lo, hi) = self.support();
        for i in 0..m {
            let x = i as f64 / (m - 1) as f64;
            xs.push(x);
            if x < lo || x > hi {
                vs.push(f64::INFINITY);
            } else {
                vs.push(self.f.value(x));
            }
        }
        (xs, vs)
    }
}
