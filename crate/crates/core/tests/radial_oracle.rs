//! Oracle tests for the radial Legendre-duality module: closed-form distances,
//! geodesic speed, rooftop geometry, envelope projections and energies.

use finsler_quant_core::quad::{integrate_unit, UnitQuad};
use finsler_quant_core::radial::{
    d_p_oracle, delta_projection, energy_p, geodesic_t, i_p_functional, is_finite_energy,
    read_dual_profile, rooftop, write_dual_profile, OracleParams, RadialPotential,
};

fn params() -> OracleParams {
    OracleParams::default()
}

#[test]
fn distance_vanishes_on_the_diagonal() {
    let u = RadialPotential::ua(0.5).unwrap();
    let d = d_p_oracle(&u, &u, 1.0, &params()).unwrap();
    assert!(d < 1e-12, "d = {d}");
}

#[test]
fn distance_ua_half_to_flat_is_one_half() {
    // Independent oracle: the dual gap is (1/a - 1)|g*| and the entropy
    // integrates to -1/2; quadrature of the raw integrand re-derives it.
    let quad = integrate_unit(
        &|x: f64| {
            let h = finsler_quant_core::radial::dual::model_entropy(x);
            (h - 2.0 * h).abs()
        },
        &UnitQuad::default(),
    )
    .unwrap();
    assert!((quad.value - 0.5).abs() < 1e-10);

    let u0 = RadialPotential::flat(0.0);
    let u1 = RadialPotential::ua(0.5).unwrap();
    let d = d_p_oracle(&u0, &u1, 1.0, &params()).unwrap();
    assert!((d - 0.5).abs() < 1e-9, "d = {d}");
}

#[test]
fn distance_of_translate_pair_is_c_over_two() {
    // duals g* +- c(x - 1/2): |difference| = 2c|x - 1/2| integrates to c/2.
    let c = 1.0;
    let u0 = RadialPotential::shift(c);
    let u1 = RadialPotential::shift(-c);
    let d = d_p_oracle(&u0, &u1, 1.0, &params()).unwrap();
    assert!((d - 0.5 * c).abs() < 1e-9, "d = {d}");
}

#[test]
fn translation_equivariance() {
    let u0 = RadialPotential::ua(0.5).unwrap();
    let u1 = RadialPotential::shift(1.0);
    let base = d_p_oracle(&u0, &u1, 2.0, &params()).unwrap();
    let shifted = d_p_oracle(&u0.add_const(0.8), &u1.add_const(0.8), 2.0, &params()).unwrap();
    assert!((base - shifted).abs() < 1e-12 * (1.0 + base));
}

#[test]
fn geodesic_hits_endpoints_and_moves_at_constant_speed() {
    let u0 = RadialPotential::ua(0.5).unwrap();
    let u1 = RadialPotential::shift(1.0);
    let p = 2.0;
    let full = d_p_oracle(&u0, &u1, p, &params()).unwrap();
    for &(s, t) in &[(0.0, 0.25), (0.25, 0.75), (0.4, 1.0)] {
        let us = geodesic_t(&u0, &u1, s).unwrap();
        let ut = geodesic_t(&u0, &u1, t).unwrap();
        let d = d_p_oracle(&us, &ut, p, &params()).unwrap();
        assert!(
            (d - (t - s) * full).abs() < 1e-6,
            "speed defect at [{s},{t}]: {d} vs {}",
            (t - s) * full
        );
    }
}

#[test]
fn geodesic_between_constants_is_linear() {
    let c = 1.3;
    let u0 = RadialPotential::flat(0.0);
    let u1 = RadialPotential::flat(-c);
    let mid = geodesic_t(&u0, &u1, 0.5).unwrap();
    for &s in &[-4.0, 0.0, 2.0] {
        assert!((mid.u(s) + 0.5 * c).abs() < 1e-12);
    }
}

#[test]
fn rooftop_of_ordered_family_is_the_smaller_potential() {
    // a <= b gives u_a >= u_b, so P(u_a, u_b) = u_b, i.e. the dual of the
    // larger parameter.
    let ua = RadialPotential::ua(0.4).unwrap();
    let ub = RadialPotential::ua(0.9).unwrap();
    let p = rooftop(&ua, &ub).unwrap();
    let d = d_p_oracle(&p, &ub, 1.0, &params()).unwrap();
    assert!(d < 1e-10, "rooftop is not the lower potential: {d}");
}

#[test]
fn rooftop_is_idempotent_and_dominated() {
    let u = RadialPotential::shift(0.7);
    let p = rooftop(&u, &u).unwrap();
    assert!(d_p_oracle(&p, &u, 1.0, &params()).unwrap() < 1e-12);

    let u0 = RadialPotential::ua(0.5).unwrap();
    let u1 = RadialPotential::shift(1.0);
    let roof = rooftop(&u0, &u1).unwrap();
    for &s in &[-6.0, -1.0, 0.0, 1.5, 6.0] {
        assert!(roof.u(s) <= u0.u(s) + 1e-8);
        assert!(roof.u(s) <= u1.u(s) + 1e-8);
    }
}

#[test]
fn translate_pair_rooftop_splits_the_distance_in_quarters() {
    let u0 = RadialPotential::shift(1.0);
    let u1 = RadialPotential::shift(-1.0);
    let p = rooftop(&u0, &u1).unwrap();
    let d0 = d_p_oracle(&u0, &p, 1.0, &params()).unwrap();
    let d1 = d_p_oracle(&u1, &p, 1.0, &params()).unwrap();
    assert!((d0 - 0.25).abs() < 1e-9, "d0 = {d0}");
    assert!((d1 - 0.25).abs() < 1e-9, "d1 = {d1}");
    let full = d_p_oracle(&u0, &u1, 1.0, &params()).unwrap();
    assert!((d0 + d1 - full).abs() < 1e-9);
}

#[test]
fn pythagorean_identity_for_random_style_pairs() {
    let pairs = vec![
        (RadialPotential::ua(0.5).unwrap(), RadialPotential::shift(1.0)),
        (RadialPotential::ua(0.3).unwrap(), RadialPotential::cusp(0.5).unwrap()),
        (RadialPotential::shift(-0.6), RadialPotential::flat(0.4)),
    ];
    for (u0, u1) in pairs {
        for &p in &[1.0, 2.0, 3.0] {
            let roof = rooftop(&u0, &u1).unwrap();
            let full = d_p_oracle(&u0, &u1, p, &params()).unwrap().powf(p);
            let a = d_p_oracle(&u0, &roof, p, &params()).unwrap().powf(p);
            let b = d_p_oracle(&roof, &u1, p, &params()).unwrap().powf(p);
            assert!(
                (full - a - b).abs() < 1e-6 * (1.0 + full),
                "{} vs {}: residual {}",
                u0.label(),
                u1.label(),
                (full - a - b).abs()
            );
        }
    }
}

#[test]
fn delta_projection_at_one_is_the_identity() {
    let u = RadialPotential::ua(0.5).unwrap();
    let p = delta_projection(&u, 1.0, &params()).unwrap();
    assert!(d_p_oracle(&p, &u, 1.0, &params()).unwrap() < 1e-12);
}

#[test]
fn delta_projection_scales_constants() {
    let c = -0.8;
    let u = RadialPotential::flat(c);
    for &delta in &[1.5, 2.0] {
        let p = delta_projection(&u, delta, &params()).unwrap();
        let want = RadialPotential::flat(delta * c);
        let d = d_p_oracle(&p, &want, 1.0, &params()).unwrap();
        assert!(d < 1e-6, "delta={delta}: d = {d}");
    }
}

#[test]
fn delta_projection_converges_from_below() {
    let u = RadialPotential::ua(0.5).unwrap();
    let mut last = f64::INFINITY;
    for &delta in &[2.0, 1.5, 1.1, 1.01] {
        let pd = delta_projection(&u, delta, &params()).unwrap();
        let d = d_p_oracle(&pd, &u, 1.0, &params()).unwrap();
        assert!(d < last, "not strictly decreasing at delta={delta}: {d} vs {last}");
        // P(delta u) <= u pointwise.
        for &s in &[-8.0, -2.0, 0.0, 3.0] {
            assert!(pd.u(s) <= u.u(s) + 1e-7, "domination fails at s={s}");
        }
        last = d;
    }
    assert!(last < 0.02, "d_1(P(1.01 u), u) = {last}");
}

#[test]
fn energy_of_constants_and_cusps() {
    let pr = params();
    assert!(energy_p(&RadialPotential::flat(0.0), 2.0, &pr).unwrap() < 1e-12);
    let c = -1.7;
    let e = energy_p(&RadialPotential::flat(c), 3.0, &pr).unwrap();
    assert!((e - c.abs().powi(3)).abs() < 1e-9, "e = {e}");

    let cusp = RadialPotential::cusp(0.5).unwrap();
    for &p in &[1.0, 2.0, 3.0] {
        let e = energy_p(&cusp, p, &pr).unwrap();
        assert!(e.is_finite() && e > 0.0, "cusp energy at p={p}: {e}");
    }

    let lelong = RadialPotential::lelong(0.2).unwrap();
    assert!(energy_p(&lelong, 1.0, &pr).unwrap().is_infinite());
}

#[test]
fn finite_energy_classification() {
    let pr = params();
    assert!(is_finite_energy(&RadialPotential::flat(0.0), 1.0, &pr));
    assert!(is_finite_energy(&RadialPotential::cusp(0.5).unwrap(), 3.0, &pr));
    assert!(!is_finite_energy(&RadialPotential::lelong(0.3).unwrap(), 1.0, &pr));
}

#[test]
fn i_p_functional_is_symmetric_and_comparable_to_the_distance() {
    let pr = params();
    let u0 = RadialPotential::shift(1.0);
    let u1 = RadialPotential::shift(-1.0);
    assert!(i_p_functional(&u0, &u0, 1.0, &pr).unwrap() < 1e-12);
    let ab = i_p_functional(&u0, &u1, 1.0, &pr).unwrap();
    let ba = i_p_functional(&u1, &u0, 1.0, &pr).unwrap();
    assert!((ab - ba).abs() < 1e-12 * (1.0 + ab));
    let d = d_p_oracle(&u0, &u1, 1.0, &pr).unwrap();
    assert!(ab >= d - 1e-9, "I_1 = {ab} below d_1 = {d}");
    assert!(ab <= 16.0 * d, "I_1 = {ab} not comparable to d_1 = {d}");
}

#[test]
fn dual_profile_file_round_trip() {
    let dir = std::env::temp_dir();
    let path = dir.join("finsler_quant_dual_roundtrip.txt");
    let u = RadialPotential::ua(0.5).unwrap();
    write_dual_profile(&path, &u, 4096).unwrap();
    let back = read_dual_profile(&path).unwrap();
    let d = d_p_oracle(&u, &back, 1.0, &params()).unwrap();
    assert!(d < 1e-7, "round-trip distance {d}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn masked_profiles_round_trip_and_stay_excluded() {
    let dir = std::env::temp_dir();
    let path = dir.join("finsler_quant_dual_masked.txt");
    let u = RadialPotential::lelong(0.25).unwrap();
    write_dual_profile(&path, &u, 512).unwrap();
    let back = read_dual_profile(&path).unwrap();
    assert!(!is_finite_energy(&back, 1.0, &params()));
    assert!(d_p_oracle(&back, &RadialPotential::flat(0.0), 1.0, &params()).is_err());
    std::fs::remove_file(&path).ok();
}

#[test]
fn spec_parsing_accepts_keyed_and_bare_forms() {
    assert!(RadialPotential::parse("flat:0").is_ok());
    assert!(RadialPotential::parse("flat:c=-1.5").is_ok());
    assert!(RadialPotential::parse("ua:a=0.5").is_ok());
    assert!(RadialPotential::parse("shift:c=1").is_ok());
    assert!(RadialPotential::parse("cusp:alpha=0.5").is_ok());
    assert!(RadialPotential::parse("lelong:gamma=0.2").is_ok());
    assert!(RadialPotential::parse("nope:1").is_err());
    assert!(RadialPotential::parse("ua:a=-1").is_err());
}
