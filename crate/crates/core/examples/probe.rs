use finsler_quant_core::quad::{integrate_unit, softplus, UnitQuad};
use finsler_quant_core::radial::RadialPotential;

fn main() {
    let u = RadialPotential::flat(-1.7);
    let d = u.dual().clone();
    let f = move |x: f64| {
        let s = d.slope(x);
        (x * s - d.value(x) - softplus(s)).abs().powf(3.0)
    };
    let cfg = UnitQuad::default().refined();
    println!("refined: panels {} rel_tol {}", cfg.base_panels, cfg.rel_tol);
    match integrate_unit(&f, &cfg) {
        Ok(r) => println!("value {} err {} panels {}", r.value, r.abs_err, r.panels),
        Err(e) => println!("ERR {e}"),
    }
}
