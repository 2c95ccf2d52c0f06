//! Dumps a point sample with exact coordinates and visibility flags, checked against the ray oracle.

use quasigap::geometry::make_decagon_t;
use quasigap::quasicrystal::{generate, oracle_visible, FamilySpec};

fn main() -> quasigap::error::Result<()> {
    let t: f64 = std::env::args().nth(1).map_or(10.0, |s| s.parse().expect("radius"));
    let spec = FamilySpec::t(make_decagon_t())?;
    let mut s = generate(&spec, t)?;
    s.compute_visibility()?;
    let oracle = oracle_visible(&s);
    let vis = s.visible.as_ref().expect("computed");
    assert_eq!(vis, &oracle, "predicate and oracle disagree");
    println!("a,b,c,d,re,im,visible");
    for (x, v) in s.points.iter().zip(vis) {
        let [a, b, c, d] = x.coeffs();
        let (re, im) = x.phys_f64();
        println!("{a},{b},{c},{d},{re:.9},{im:.9},{}", u8::from(*v));
    }
    Ok(())
}
