use crate::error::{Error, Result};

/// Discrete Legendre transform of a convex grid function.
///
/// Input nodes must be strictly increasing with `+inf` allowed only on end
/// segments; the finite part must be convex to tolerance (the location of the
/// worst violation is reported otherwise). Queries are slopes, sorted
/// ascending; the conjugate `sup_i (q x_i - f_i)` is evaluated in linear time
/// by sweeping the (monotone) argmax.
pub fn legendre_transform(xs: &[f64], vals: &[f64], queries: &[f64]) -> Result<Vec<f64>> {
    let (lo, hi) = validate_grid(xs, vals)?;
    if queries.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "conjugate queries must be sorted ascending".into(),
        ));
    }
    Ok(conjugate_sweep(&xs[lo..=hi], &vals[lo..=hi], queries))
}

/// Discrete biconjugation: the convex envelope of an arbitrary grid function,
/// conjugated onto the given slope queries.
///
/// Unlike [`legendre_transform`] the input need not be convex; the lower
/// convex hull of the graph is built first.
pub fn envelope_conjugate(xs: &[f64], vals: &[f64], queries: &[f64]) -> Result<Vec<f64>> {
    if xs.len() != vals.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least two matching nodes".into(),
        ));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "grid abscissae must be strictly increasing".into(),
        ));
    }
    if queries.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "conjugate queries must be sorted ascending".into(),
        ));
    }
    // Lower convex hull by monotone chain over the finite points.
    let mut hx: Vec<f64> = Vec::with_capacity(xs.len());
    let mut hv: Vec<f64> = Vec::with_capacity(xs.len());
    for (&x, &v) in xs.iter().zip(vals.iter()) {
        if !v.is_finite() {
            continue;
        }
        while hx.len() >= 2 {
            let k = hx.len();
            let cross = (hv[k - 1] - hv[k - 2]) * (x - hx[k - 1])
                - (v - hv[k - 1]) * (hx[k - 1] - hx[k - 2]);
            if cross >= 0.0 {
                hx.pop();
                hv.pop();
            } else {
                break;
            }
        }
        hx.push(x);
        hv.push(v);
    }
    if hx.len() < 2 {
        return Err(Error::InvalidArgument(
            "grid has fewer than two finite nodes".into(),
        ));
    }
    Ok(conjugate_sweep(&hx, &hv, queries))
}

fn validate_grid(xs: &[f64], vals: &[f64]) -> Result<(usize, usize)> {
    if xs.len() != vals.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least two matching nodes".into(),
        ));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "grid abscissae must be strictly increasing".into(),
        ));
    }
    let lo = vals
        .iter()
        .position(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidArgument("grid has no finite values".into()))?;
    let hi = vals.iter().rposition(|v| v.is_finite()).unwrap();
    if hi - lo < 1 {
        return Err(Error::InvalidArgument(
            "grid has fewer than two finite nodes".into(),
        ));
    }
    if vals[lo..=hi].iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "infinite values must form end segments".into(),
        ));
    }
    // Convexity of the finite part: slope increments must be nonnegative.
    let mut worst = 0.0f64;
    let mut worst_x = xs[lo];
    let mut max_slope = 0.0f64;
    let mut prev_slope = f64::NEG_INFINITY;
    for i in lo..hi {
        let s = (vals[i + 1] - vals[i]) / (xs[i + 1] - xs[i]);
        max_slope = max_slope.max(s.abs());
        if prev_slope.is_finite() {
            let violation = prev_slope - s;
            if violation > worst {
                worst = violation;
                worst_x = xs[i];
            }
        }
        prev_slope = s;
    }
    if worst > 1e-10 * (1.0 + max_slope) {
        return Err(Error::NotConvex {
            x: worst_x,
            violation: worst,
        });
    }
    Ok((lo, hi))
}

fn conjugate_sweep(xs: &[f64], vals: &[f64], queries: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut out = Vec::with_capacity(queries.len());
    let mut i = 0usize;
    for &q in queries {
        while i + 1 < n && q * xs[i + 1] - vals[i + 1] >= q * xs[i] - vals[i] {
            i += 1;
        }
        out.push(q * xs[i] - vals[i]);
    }
    out
}

/// Sampling grid for profiles with asymptotic slopes 0 and 1: logit images of
/// a uniform interior grid (so conjugate queries on the uniform moment grid
/// hit sampled slopes exactly) plus unit-step tail extensions.
pub fn slope_adapted_s_grid(m: usize, tail: f64) -> Vec<f64> {
    let mut ss: Vec<f64> = Vec::with_capacity(m + 2 * tail as usize + 4);
    let edge = crate::quad::logit(0.5 / m as f64).abs();
    let mut t = edge + tail;
    while t > edge {
        ss.push(-t);
        t -= 1.0;
    }
    for i in 0..m {
        ss.push(crate::quad::logit((i as f64 + 0.5) / m as f64));
    }
    let mut t = edge + 1.0;
    while t <= edge + tail {
        ss.push(t);
        t += 1.0;
    }
    ss
}
