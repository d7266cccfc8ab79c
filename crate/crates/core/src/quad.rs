//! Quadrature kernels: a 15-point Gauss–Kronrod panel rule, a deterministic
//! adaptive driver, a logistic-substitution integrator for singular weights
//! on the unit interval, and a peak-shifted integrator for log-space
//! integrands with concave exponents.

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded 7-point Gauss weights (for odd-index abscissae of `XGK`).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod panel: returns `(integral, error_estimate)`.
pub fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    let mut samples = [0.0f64; 15];
    samples[7] = fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        samples[j] = f1;
        samples[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((samples[j] - mean).abs() + (samples[14 - j] - mean).abs());
    }
    let value = kronrod * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let raw = ((kronrod - gauss) * half).abs();
    // Standard QUADPACK error rescaling.
    let mut err = raw;
    if resasc != 0.0 && raw != 0.0 {
        err = resasc * (200.0 * raw / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub panels: usize,
}

/// Deterministic adaptive integration over `[a, b]` seeded with `base_panels`
/// uniform panels, each refined depth-first until its error share is met.
pub fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    base_panels: usize,
) -> Result<QuadResult> {
    let base = base_panels.max(1);
    // First pass: rough value to convert the relative tolerance into a budget.
    let mut rough = 0.0;
    let mut rough_abs = 0.0;
    let width = (b - a) / base as f64;
    for i in 0..base {
        let (v, _) = gk15(f, a + i as f64 * width, a + (i + 1) as f64 * width);
        rough += v;
        rough_abs += v.abs();
    }
    let budget = (rel_tol * rough_abs.max(rough.abs())).max(abs_tol);
    let per_width = budget / (b - a).abs();

    let mut value = 0.0;
    let mut abs_err = 0.0;
    let mut panels = 0usize;
    const MAX_DEPTH: usize = 40;
    // Depth-first refinement keeps evaluation order deterministic.
    let mut stack: Vec<(f64, f64, usize)> = Vec::with_capacity(64);
    for i in (0..base).rev() {
        stack.push((a + i as f64 * width, a + (i + 1) as f64 * width, 0));
    }
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(f, lo, hi);
        panels += 1;
        if !v.is_finite() {
            return Err(Error::QuadratureUnstable(format!(
                "integrand not finite on [{lo:.6e}, {hi:.6e}]"
            )));
        }
        if panels > 2_000_000 {
            return Err(Error::QuadratureUnstable(format!(
                "panel budget exhausted on [{a}, {b}]"
            )));
        }
        let share = per_width * (hi - lo).abs();
        // Splitting cannot reduce an error that is already rounding-dominated.
        let roundoff = 200.0 * f64::EPSILON * v.abs();
        if e <= share.max(roundoff) || depth >= MAX_DEPTH {
            value += v;
            abs_err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(QuadResult {
        value,
        abs_err,
        panels,
    })
}

/// Numerically stable logistic map and its derivative.
pub fn sigmoid(y: f64) -> f64 {
    if y >= 0.0 {
        1.0 / (1.0 + (-y).exp())
    } else {
        let e = y.exp();
        e / (1.0 + e)
    }
}

pub fn dsigmoid(y: f64) -> f64 {
    let e = (-y.abs()).exp();
    let d = 1.0 + e;
    e / (d * d)
}

/// `log(1 + e^s)`, the model potential profile.
pub fn softplus(s: f64) -> f64 {
    s.max(0.0) + (-s.abs()).exp().ln_1p()
}

/// `log(x / (1-x))`.
pub fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

/// Parameters of the unit-interval integrator.
#[derive(Clone, Copy, Debug)]
pub struct UnitQuad {
    /// Half-width of the logistic variable: x ranges over `[sigma(-y), sigma(y)]`.
    pub y_max: f64,
    /// Seed panel count before adaptive refinement.
    pub base_panels: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for UnitQuad {
    fn default() -> Self {
        Self {
            // sigma(36) is the last logistic abscissa strictly below 1 whose
            // complement 1-x is still computed exactly; beyond it slope-type
            // integrands hit logit(1) = inf.
            y_max: 36.0,
            base_panels: 256,
            rel_tol: 1e-12,
            abs_tol: 1e-300,
        }
    }
}

impl UnitQuad {
    /// Derive panel resolution from a nominal grid size.
    pub fn from_grid(m: usize) -> Self {
        Self {
            base_panels: (m / 16).max(32),
            ..Self::default()
        }
    }

    /// Double the resolution (for two-level stability checks).
    pub fn refined(&self) -> Self {
        Self {
            base_panels: self.base_panels * 2,
            rel_tol: self.rel_tol * 0.1,
            ..*self
        }
    }
}

/// Integrate `f` over `(0, 1)` with graded resolution toward both endpoints.
///
/// The substitution `x = sigma(y)` turns endpoint singularities of
/// `log` type into smooth exponentially-decaying integrands on the line; the
/// discarded tails are added to the reported error bound.
pub fn integrate_unit(f: &dyn Fn(f64) -> f64, cfg: &UnitQuad) -> Result<QuadResult> {
    let g = |y: f64| -> f64 {
        let w = dsigmoid(y);
        if w == 0.0 {
            return 0.0;
        }
        f(sigmoid(y)) * w
    };
    let mut out = adaptive(&g, -cfg.y_max, cfg.y_max, cfg.rel_tol, cfg.abs_tol, cfg.base_panels)?;
    let tail = g(-cfg.y_max).abs().max(g(cfg.y_max).abs()) * 2.0;
    out.abs_err += tail;
    Ok(out)
}

/// Result of a log-space integration: `log_value = log of the integral`.
#[derive(Clone, Copy, Debug)]
pub struct LogQuad {
    pub log_value: f64,
    pub rel_err: f64,
}

/// Integrate `exp(log_f)` over the line for a concave exponent `log_f`.
///
/// The peak is bracketed by doubling steps and located by golden section;
/// the bulk `[s_-, s_+]` is cut where the exponent drops `drop` below the
/// peak, integrated adaptively after max-shifting, and the two tails are
/// bounded by the end slopes of the (concave) exponent.
pub fn integrate_exp(
    log_f: &dyn Fn(f64) -> f64,
    guess: f64,
    drop: f64,
    rel_tol: f64,
) -> Result<LogQuad> {
    // Bracket the peak: expand until the middle value dominates both ends.
    let mut step = 1.0;
    let mut lo = guess - step;
    let mut hi = guess + step;
    let mut f_lo = log_f(lo);
    let mut f_hi = log_f(hi);
    let mut f_mid = log_f(guess);
    let mut expansions = 0;
    while f_lo >= f_mid || f_hi >= f_mid {
        step *= 2.0;
        lo = guess - step;
        hi = guess + step;
        let new_lo = log_f(lo);
        let new_hi = log_f(hi);
        f_mid = f_mid.max(log_f(0.5 * (lo + hi)));
        // Track the best interior value seen so far.
        if new_lo > f_mid && new_lo > new_hi {
            f_mid = f_mid.max(new_lo);
        }
        f_lo = new_lo;
        f_hi = new_hi;
        expansions += 1;
        if expansions > 80 {
            return Err(Error::NoConvergence("peak bracketing"));
        }
    }
    // Golden-section for the peak of the concave exponent.
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = log_f(c);
    let mut fd = log_f(d);
    for _ in 0..200 {
        if b - a < 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = log_f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = log_f(d);
        }
    }
    let peak = 0.5 * (a + b);
    let log_peak = log_f(peak);
    if !log_peak.is_finite() {
        return Err(Error::QuadratureUnstable(
            "exponent not finite at its peak".into(),
        ));
    }

    // Locate the cut points where the exponent has dropped `drop` below the peak.
    let cut = |dir: f64| -> Result<f64> {
        let mut far = peak + dir;
        let mut steps = 0;
        while log_f(far) > log_peak - drop {
            far += dir * (far - peak).abs().max(1.0);
            steps += 1;
            if steps > 200 {
                return Err(Error::NoConvergence("integrand cut search"));
            }
        }
        let mut near = peak;
        for _ in 0..120 {
            let mid = 0.5 * (near + far);
            if log_f(mid) > log_peak - drop {
                near = mid;
            } else {
                far = mid;
            }
        }
        Ok(far)
    };
    let left = cut(-1.0)?;
    let right = cut(1.0)?;

    let shifted = |s: f64| -> f64 { (log_f(s) - log_peak).exp() };
    let bulk = adaptive(&shifted, left, right, rel_tol, 1e-300, 64)?;

    // Concavity bounds each tail by an exponential ray from the cut point.
    let eps_slope = 1e-4 * (right - left).abs().max(1e-8);
    let slope_r = (log_f(right) - log_f(right - eps_slope)) / eps_slope;
    let slope_l = (log_f(left + eps_slope) - log_f(left)) / eps_slope;
    let tail_r = if slope_r < -1e-12 {
        shifted(right) / (-slope_r)
    } else {
        f64::INFINITY
    };
    let tail_l = if slope_l > 1e-12 {
        shifted(left) / slope_l
    } else {
        f64::INFINITY
    };
    if !tail_l.is_finite() || !tail_r.is_finite() {
        return Err(Error::QuadratureUnstable(
            "tail slope vanished; integrand may not be integrable".into(),
        ));
    }
    let rel_err = (bulk.abs_err + tail_l + tail_r) / bulk.value.max(f64::MIN_POSITIVE);
    Ok(LogQuad {
        log_value: log_peak + bulk.value.ln(),
        rel_err,
    })
}
