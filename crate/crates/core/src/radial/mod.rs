//! Exact Lp geometry for rotation-invariant potentials on the Riemann sphere
//! via Legendre duality.
//!
//! The model is the sphere with the unit-curvature metric normalized to total
//! volume 1, so the moment interval is `[0, 1]` and the model profile is
//! `g(s) = log(1 + e^s)` in the logarithmic coordinate `s = log|z|^2`.
//! Potentials are stored canonically through their dual profiles: distances,
//! geodesics and rooftop envelopes become Lp norms, affine interpolation and
//! pointwise maxima of duals, confining all discretization error to the
//! Legendre transforms and the quadrature.

pub mod dual;
mod legendre;

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

pub use dual::{DualFn, DualProfile, GridDual};
pub use legendre::{envelope_conjugate, legendre_transform, slope_adapted_s_grid};

use crate::error::{Error, Result};
use crate::quad::{integrate_unit, softplus, UnitQuad};

/// Resolution and tolerance knobs for the oracle quadratures.
///
/// Every oracle output is recomputed at doubled resolution and must agree to
/// 0.1% relative; disagreement raises an error instead of returning a value.
#[derive(Clone, Copy, Debug)]
pub struct OracleParams {
    pub grid_m: usize,
    pub rel_tol: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            grid_m: 4096,
            rel_tol: 1e-12,
        }
    }
}

impl OracleParams {
    pub fn with_grid(grid_m: usize) -> Self {
        Self {
            grid_m,
            ..Self::default()
        }
    }

    fn quad(&self) -> UnitQuad {
        UnitQuad {
            rel_tol: self.rel_tol,
            ..UnitQuad::from_grid(self.grid_m)
        }
    }
}

/// A rotation-invariant potential, held through the dual profile of its full
/// convex profile `phi(s) = g(s) + u(s)`.
#[derive(Clone, Debug)]
pub struct RadialPotential {
    dual: DualProfile,
    label: String,
}

impl RadialPotential {
    pub fn from_dual(dual: DualProfile, label: impl Into<String>) -> Self {
        Self {
            dual,
            label: label.into(),
        }
    }

    /// The constant potential `u = c`.
    pub fn flat(c: f64) -> Self {
        Self::from_dual(
            DualProfile::affine_shift(&DualProfile::model(), -c, 0.0),
            format!("flat:{c}"),
        )
    }

    /// The steepened-model family `phi_a(s) = (1/a) log(1 + e^{a s})`, `a > 0`.
    pub fn ua(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "family parameter a must be positive, got {a}"
            )));
        }
        Ok(Self::from_dual(
            DualProfile::scaled_model(a),
            format!("ua:a={a}"),
        ))
    }

    /// Translated model: dual `g* + c (x - 1/2)`, i.e. `phi(s) = g(s - c) + c/2`.
    pub fn shift(c: f64) -> Self {
        Self::from_dual(
            DualProfile::affine_shift(&DualProfile::model(), 0.0, c),
            format!("shift:c={c}"),
        )
    }

    /// Unbounded potential with dual `g* - alpha ln x`; finite energy for all p.
    pub fn cusp(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "cusp parameter alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self::from_dual(
            DualProfile::cusp(alpha),
            format!("cusp:alpha={alpha}"),
        ))
    }

    /// Potential with mass loss `gamma` at the origin (positive Lelong number);
    /// excluded from every finite-energy class.
    pub fn lelong(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "lelong parameter gamma must lie in (0,1), got {gamma}"
            )));
        }
        Ok(Self::from_dual(
            DualProfile::mass_deficit(gamma),
            format!("lelong:gamma={gamma}"),
        ))
    }

    /// Build from dual-profile grid samples (validates convexity and mask shape).
    pub fn from_dual_grid(xs: Vec<f64>, vals: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        validate_dual_grid(&xs, &vals)?;
        let grid = GridDual::new(xs, vals)
            .ok_or_else(|| Error::InvalidArgument("malformed dual grid".into()))?;
        Ok(Self::from_dual(DualProfile::from_grid(grid), label))
    }

    /// Build from primal grid samples with asymptotic slope data. The grid is
    /// conjugated onto the uniform moment grid; slopes outside
    /// `[slope_left, slope_right]` become masked (infinite) dual segments.
    pub fn from_primal_grid(
        ss: &[f64],
        phis: &[f64],
        slope_left: f64,
        slope_right: f64,
        grid_m: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&slope_left) || !(slope_left < slope_right) || slope_right > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= slope_left < slope_right <= 1, got [{slope_left}, {slope_right}]"
            )));
        }
        let m = grid_m.max(16);
        let queries: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
        let conj = legendre_transform(ss, phis, &queries)?;
        let vals: Vec<f64> = queries
            .iter()
            .zip(conj.iter())
            .map(|(&x, &v)| {
                if x < slope_left - 1e-12 || x > slope_right + 1e-12 {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect();
        Self::from_dual_grid(queries, vals, label)
    }

    /// Parse a potential family spec: `flat:<c>`, `ua:a=<a>`, `shift:c=<c>`,
    /// `cusp:alpha=<a>`, `lelong:gamma=<g>`, or `file:<path>` (dual-profile file).
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (family, rest) = spec.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let param = |rest: &str| -> Result<f64> {
            let raw = rest.rsplit_once('=').map(|(_, v)| v).unwrap_or(rest);
            raw.trim()
                .parse::<f64>()
                .map_err(|e| bad(&format!("bad parameter `{raw}`: {e}")))
        };
        match family {
            "flat" => Ok(Self::flat(param(rest)?)),
            "ua" => Self::ua(param(rest)?),
            "shift" => Ok(Self::shift(param(rest)?)),
            "cusp" => Self::cusp(param(rest)?),
            "lelong" => Self::lelong(param(rest)?),
            "file" => read_dual_profile(Path::new(rest)),
            other => Err(bad(&format!("unknown family `{other}`"))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dual(&self) -> &DualProfile {
        &self.dual
    }

    /// Full convex profile `phi(s)`.
    pub fn primal(&self, s: f64) -> f64 {
        self.dual.primal(s)
    }

    /// Relative potential `u(s) = phi(s) - g(s)`.
    pub fn u(&self, s: f64) -> f64 {
        self.dual.u(s)
    }

    pub fn sup_u(&self) -> f64 {
        self.dual.sup_u()
    }

    /// The translate `u + c`.
    pub fn add_const(&self, c: f64) -> Self {
        Self::from_dual(
            DualProfile::affine_shift(&self.dual, -c, 0.0),
            format!("{}+{c}", self.label),
        )
    }
}

fn validate_dual_grid(xs: &[f64], vals: &[f64]) -> Result<()> {
    if xs.len() != vals.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "dual grid needs at least two nodes".into(),
        ));
    }
    if (xs[0]).abs() > 1e-9 || (xs[xs.len() - 1] - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(
            "dual grid must span the moment interval [0, 1]".into(),
        ));
    }
    // Shares the validation (convexity, mask shape) with the transform engine.
    legendre::legendre_transform(xs, vals, &[]).map(|_| ())
}

/// Two-level agreement gate: oracle outputs must be stable to 0.1% between
/// the base resolution and its refinement.
fn richardson_gate(coarse: f64, fine: f64, what: &str) -> Result<f64> {
    let scale = coarse.abs().max(fine.abs());
    if (coarse - fine).abs() > 1e-3 * scale + 1e-12 {
        return Err(Error::QuadratureUnstable(format!(
            "{what}: {coarse:.12e} vs {fine:.12e} between refinement levels"
        )));
    }
    Ok(fine)
}

fn require_full_mass(u: &RadialPotential, what: &str) -> Result<()> {
    if !u.dual.is_full_mass() {
        return Err(Error::NotFiniteEnergy(format!(
            "{what}: `{}` has positive mass loss (not in any finite-energy class)",
            u.label
        )));
    }
    Ok(())
}

/// The Lp distance `(int_0^1 |D_0 - D_1|^p dx)^{1/p}` of the dual profiles.
pub fn d_p_oracle(
    u0: &RadialPotential,
    u1: &RadialPotential,
    p: f64,
    params: &OracleParams,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    require_full_mass(u0, "d_p")?;
    require_full_mass(u1, "d_p")?;
    let d0 = u0.dual.clone();
    let d1 = u1.dual.clone();
    let f = move |x: f64| (d0.value(x) - d1.value(x)).abs().powf(p);
    let cfg = params.quad();
    let coarse = integrate_unit(&f, &cfg)?.value;
    let fine = integrate_unit(&f, &cfg.refined())?.value;
    let v = richardson_gate(coarse, fine, "d_p oracle")?;
    Ok(v.max(0.0).powf(1.0 / p))
}

/// The finite-energy geodesic at time `t`: dual profiles interpolate affinely.
pub fn geodesic_t(u0: &RadialPotential, u1: &RadialPotential, t: f64) -> Result<RadialPotential> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "geodesic time must lie in [0,1], got {t}"
        )));
    }
    require_full_mass(u0, "geodesic")?;
    require_full_mass(u1, "geodesic")?;
    if t == 0.0 {
        return Ok(u0.clone());
    }
    if t == 1.0 {
        return Ok(u1.clone());
    }
    Ok(RadialPotential::from_dual(
        DualProfile::combo(
            vec![(1.0 - t, u0.dual.clone()), (t, u1.dual.clone())],
            0.0,
        ),
        format!("geodesic({}, {}; {t})", u0.label, u1.label),
    ))
}

/// Rooftop envelope `P(u0, u1)`: the dual profile is the pointwise maximum.
pub fn rooftop(u0: &RadialPotential, u1: &RadialPotential) -> Result<RadialPotential> {
    require_full_mass(u0, "rooftop")?;
    require_full_mass(u1, "rooftop")?;
    Ok(RadialPotential::from_dual(
        DualProfile::max(&u0.dual, &u1.dual),
        format!("P({}, {})", u0.label, u1.label),
    ))
}

/// Envelope `P(delta u)` of the scaled potential, the increasing approximant
/// of `u` as `delta` decreases to 1.
///
/// Computed as the biconjugate of `f(s) = delta phi(s) - (delta - 1) g(s)`
/// with slopes constrained to the moment interval; the conjugate is taken on
/// a slope-adapted grid and the normalization shift `u <= -1` is applied and
/// undone internally.
pub fn delta_projection(
    u: &RadialPotential,
    delta: f64,
    params: &OracleParams,
) -> Result<RadialPotential> {
    if !(delta >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be >= 1, got {delta}"
        )));
    }
    require_full_mass(u, "delta projection")?;
    if delta == 1.0 {
        return Ok(u.clone());
    }
    let c = u.sup_u() + 1.0;
    let shifted = DualProfile::affine_shift(&u.dual, c, 0.0); // dual of u - c
    let m_s = (4 * params.grid_m).max(1024);
    let ss = slope_adapted_s_grid(m_s, 80.0);
    let fs: Vec<f64> = ss
        .iter()
        .map(|&s| delta * shifted.primal(s) - (delta - 1.0) * softplus(s))
        .collect();
    let m = params.grid_m.max(64) + 1;
    let queries: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let mut dual_vals = envelope_conjugate(&ss, &fs, &queries)?;
    // Undo the normalization: P(delta u) = P(delta (u - c)) + delta c.
    for v in &mut dual_vals {
        *v -= delta * c;
    }
    RadialPotential::from_dual_grid(queries, dual_vals, format!("P({delta}*{})", u.label))
}

/// The energy integral `int_0^1 |u(s(x))|^p dx` with `s(x)` the dual-derivative
/// change of variables; `+inf` when the potential has positive mass loss.
pub fn energy_p(u: &RadialPotential, p: f64, params: &OracleParams) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    if !u.dual.is_full_mass() {
        return Ok(f64::INFINITY);
    }
    let d = u.dual.clone();
    // u(s(x)) = x s(x) - D(x) - g(s(x)) with s(x) = D'(x).
    let f = move |x: f64| {
        let s = d.slope(x);
        (x * s - d.value(x) - softplus(s)).abs().powf(p)
    };
    let cfg = params.quad();
    let coarse = integrate_unit(&f, &cfg)?.value;
    let fine = integrate_unit(&f, &cfg.refined())?.value;
    richardson_gate(coarse, fine, "energy integral")
}

/// Symmetric two-sided energy functional
/// `int |u0-u1|^p d mu_{u0} + int |u0-u1|^p d mu_{u1}`, each term through the
/// corresponding dual change of variables.
pub fn i_p_functional(
    u0: &RadialPotential,
    u1: &RadialPotential,
    p: f64,
    params: &OracleParams,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    require_full_mass(u0, "i_p")?;
    require_full_mass(u1, "i_p")?;
    let term = |da: &DualProfile, db: &DualProfile| -> Result<f64> {
        let da = da.clone();
        let db = db.clone();
        // (u_a - u_b)(s_a(x)) = phi_a(s_a(x)) - phi_b(s_a(x)); the model
        // profile cancels in the difference.
        let f = move |x: f64| {
            let s = da.slope(x);
            let phi_a = x * s - da.value(x);
            (phi_a - db.primal(s)).abs().powf(p)
        };
        let cfg = params.quad();
        let coarse = integrate_unit(&f, &cfg)?.value;
        let fine = integrate_unit(&f, &cfg.refined())?.value;
        richardson_gate(coarse, fine, "i_p term")
    };
    Ok(term(&u0.dual, &u1.dual)? + term(&u1.dual, &u0.dual)?)
}

/// Membership in the finite-energy class: full mass and an energy integral
/// that is stable (< 5% relative drift) under grid refinement.
pub fn is_finite_energy(u: &RadialPotential, p: f64, params: &OracleParams) -> bool {
    if !u.dual.is_full_mass() {
        return false;
    }
    let d = u.dual.clone();
    let f = move |x: f64| {
        let s = d.slope(x);
        (x * s - d.value(x) - softplus(s)).abs().powf(p)
    };
    let cfg = params.quad();
    let coarse = match integrate_unit(&f, &cfg) {
        Ok(r) => r.value,
        Err(_) => return false,
    };
    let fine = match integrate_unit(&f, &cfg.refined()) {
        Ok(r) => r.value,
        Err(_) => return false,
    };
    coarse.is_finite()
        && fine.is_finite()
        && (coarse - fine).abs() <= 0.05 * coarse.abs().max(fine.abs()) + 1e-12
}

/// Write the dual profile on the uniform m-grid in the plain-text format
/// `dualprofile m=<int> domain=0,1` followed by `x value` lines.
pub fn write_dual_profile(path: &Path, u: &RadialPotential, m: usize) -> Result<()> {
    let m = m.max(2);
    let (xs, vs) = u.dual.sample(m);
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "dualprofile m={m} domain=0,1")?;
    for (x, v) in xs.iter().zip(vs.iter()) {
        if v.is_finite() {
            writeln!(w, "{x:.16e} {v:.16e}")?;
        } else {
            writeln!(w, "{x:.16e} inf")?;
        }
    }
    Ok(())
}

/// Read a dual-profile file written by [`write_dual_profile`].
pub fn read_dual_profile(path: &Path) -> Result<RadialPotential> {
    let file = std::fs::File::open(path)?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty dual-profile file".into()))??;
    let m = parse_header(&header)?;
    let mut xs = Vec::with_capacity(m);
    let mut vs = Vec::with_capacity(m);
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let x: f64 = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("short line `{line}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad abscissa in `{line}`: {e}")))?;
        let raw = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("short line `{line}`")))?;
        let v = if raw == "inf" || raw == "+inf" {
            f64::INFINITY
        } else {
            raw.parse()
                .map_err(|e| Error::Parse(format!("bad value in `{line}`: {e}")))?
        };
        xs.push(x);
        vs.push(v);
    }
    if xs.len() != m {
        return Err(Error::Parse(format!(
            "header promised {m} rows, found {}",
            xs.len()
        )));
    }
    RadialPotential::from_dual_grid(xs, vs, format!("file:{}", path.display()))
}

fn parse_header(header: &str) -> Result<usize> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some("dualprofile") {
        return Err(Error::Parse(format!("bad header `{header}`")));
    }
    let mut m = None;
    for tok in parts {
        if let Some(v) = tok.strip_prefix("m=") {
            m = Some(
                v.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad m in header: {e}")))?,
            );
        } else if tok != "domain=0,1" {
            return Err(Error::Parse(format!("unknown header token `{tok}`")));
        }
    }
    m.ok_or_else(|| Error::Parse("header missing m=<int>".into()))
}
